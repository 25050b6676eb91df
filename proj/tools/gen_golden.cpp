// Writes the canonical .arb corpus used by the round-trip tests.
#include "arborify/arborify.hpp"
#include "arborify/io.hpp"
#include "arborify/random.hpp"

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

using namespace arborify;

namespace {

int counter = 0;
std::filesystem::path out_dir;

void emit(const std::string& stem, const std::string& text) {
  std::ostringstream name;
  name << std::setw(2) << std::setfill('0') << counter++ << "_" << stem << ".arb";
  std::ofstream(out_dir / name.str(), std::ios::binary) << text;
}

}  // namespace

int main(int argc, char** argv) {
  if (argc != 2) {
    std::cerr << "usage: gen_golden OUTDIR\n";
    return 2;
  }
  out_dir = argv[1];
  std::filesystem::create_directories(out_dir);

  emit("t4", print_tree(parse_tree("let k1 = (1)\nlet k2 = (2)\nlet k3 = (5)\n"
                                   "I[t2,0]((k); I[t1,1]((k1)) I[t1,0]((k2)) I[t1,0]((k3)))")));
  emit("t7", print_tree(parse_tree("let k1 = (1)\nlet k2 = (2)\nlet k4 = (4)\nlet k5 = (5)\n"
                                   "Ihat[t1,0](k1)#a I[t1,0](k2) I[t2,1](l; I[t1,0](k4) I[t1,1](k5) "
                                   "Ihat[t1,1](k1)#b)\npair1: (a,b)")));
  emit("empty_word_nls", print_word(single(empty_word(Model::NLS))));
  emit("empty_word_wave", print_word(single(empty_word(Model::Wave))));
  emit("zero_tree", print_tree(TreePoly{}));

  Rng rng(20240601);
  const ExactCoeff coeffs[] = {ExactCoeff::one(), ExactCoeff(Rational(-3, 2), 1, 1), ExactCoeff(0, Rational(2, 7)),
                               ExactCoeff(Rational(5), Rational(-1), 2)};
  for (int i = 0; i < 10; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    const PairedTree t = random_paired_tree(rng, m, 1 + i % 3, 3);
    TreePoly p;
    add_term(p, t, coeffs[i % 4]);
    emit(std::string("tree_") + (i % 2 ? "wave" : "nls"), print_tree(p));
  }
  for (int i = 0; i < 5; ++i) {
    const PairedTree a = random_paired_tree(rng, Model::NLS, 2, 2, 2);
    const PairedTree b = random_paired_tree(rng, Model::NLS, 2, 2, 2);
    TreePoly p;
    add_term(p, a, coeffs[i % 4]);
    add_term(p, b, coeffs[(i + 1) % 4]);
    emit("treepoly_nls", print_tree(p));
  }
  for (int i = 0; i < 5; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    TreePoly p;
    add_term(p, random_distinct_tree(rng, m, 7), ExactCoeff::one());
    emit("distinct_tree", print_tree(p));
  }
  for (int i = 0; i < 10; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    emit(std::string("word_") + (i % 2 ? "wave" : "nls"), print_word(single(random_word(rng, m, 4, "x"), coeffs[i % 4])));
  }
  for (int i = 0; i < 10; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    const PairedTree t = random_paired_tree(rng, m, 1 + i % 2, 2, 2);
    emit(std::string("arborified_") + (i % 2 ? "wave" : "nls"), print_word(arborify::arborify(t, m)));
  }
  for (int i = 0; i < 5; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    const Word u = random_word(rng, m, 2, "u");
    const Word v = random_word(rng, m, 2, "v");
    emit("shuffle", print_word(shuffle(u, v)));
  }
  std::cout << counter << " files written to " << out_dir << "\n";
  return counter == 50 ? 0 : 1;
}
