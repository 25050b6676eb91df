#include "catch_amalgamated.hpp"
#include "helpers.hpp"

#include "arborify/arborify.hpp"
#include "arborify/io.hpp"
#include "arborify/random.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace arborify;
using namespace th;

#ifndef GOLDEN_DIR
#define GOLDEN_DIR "tests/golden"
#endif

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int count_substr(const std::string& s, const std::string& pat) {
  int n = 0;
  for (auto pos = s.find(pat); pos != std::string::npos; pos = s.find(pat, pos + 1)) ++n;
  return n;
}

const char* kT7 =
    "let k1 = (1)\nlet k2 = (2)\nlet k4 = (4)\nlet k5 = (5)\n"
    "Ihat[t1,0](k1)#a I[t1,0](k2) I[t2,1](l; I[t1,0](k4) I[t1,1](k5) Ihat[t1,1](k1)#b)\npair1: (a,b)";

}  // namespace

TEST_CASE("leaf with a bound frequency", "[dsl-io]") {
  const TreePoly p = parse_tree("let k1 = (4)\nI[t1,1](k1)");
  REQUIRE(p.size() == 1);
  CHECK(p.begin()->first.tree == leaf_tree({EdgeKind::T1, 1, false}, Frequency{4}));
}

TEST_CASE("T4 expression", "[dsl-io]") {
  const TreePoly p = parse_tree("let k1 = (1)\nlet k2 = (2)\nlet k3 = (5)\n"
                                "I[t2,0]((k); I[t1,1]((k1)) I[t1,0]((k2)) I[t1,0]((k3)))");
  const PairedTree t4 = paired(root({inner(0, {leaf(Frequency{1}, 1), leaf(Frequency{2}), leaf(Frequency{5})})}));
  REQUIRE(p.size() == 1);
  CHECK(p.begin()->first == t4);
  CHECK(p.begin()->second == ExactCoeff::one());
}

TEST_CASE("coefficients and distribution", "[dsl-io]") {
  const TreePoly p = parse_tree("-3/2i mu^2 I[t1,0]((1)) + {1,2} I[t1,0]((2)) - 1/2i mu^2 I[t1,0]((1))");
  REQUIRE(p.size() == 2);
  const PairedTree one{leaf_tree({EdgeKind::T1, 0, false}, Frequency{1}), {}};
  CHECK(p.at(one) == ExactCoeff(Rational(0), Rational(-2), 1));
  const TreePoly q = parse_tree("(I[t1,0]((1)) + I[t1,0]((2))) I[t1,1]((3))");
  CHECK(q.size() == 2);
}

TEST_CASE("parse errors carry positions", "[dsl-io]") {
  try {
    parse_tree("I[t2,0]((3); I[t1,0]((1)) I[t1,0]((1)))");
    FAIL("expected a Kirchhoff error");
  } catch (const ParseError& e) {
    CHECK(e.span.line == 1);
    CHECK(std::string(e.what()).find("Kirchhoff") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_tree("I[t1,0](k9)"), ParseError);
  CHECK_THROWS_AS(parse_tree("I[t1,0]((1))#a\npair2: (a,zz)"), ParseError);
  try {
    parse_tree("I[t1,0]((1))\n  I[t3,0]((2))");
    FAIL("expected a syntax error");
  } catch (const ParseError& e) {
    CHECK(e.span.line == 2);
  }
}

TEST_CASE("print and parse round trip", "[dsl-io]") {
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    const PairedTree t = random_paired_tree(rng, m, 1 + i % 3, 3);
    TreePoly p;
    add_term(p, t, ExactCoeff(Rational(-3, 2), 1, 1));
    const std::string s = print_tree(p);
    CHECK(parse_tree(s) == p);
    CHECK(print_tree(parse_tree(s)) == s);

    const WordPoly w = arborify::arborify(t, m);
    const std::string sw = print_word(w);
    CHECK(parse_word(sw) == w);
    CHECK(print_word(parse_word(sw)) == sw);

    const Word rw = random_word(rng, m, 4, "x");
    CHECK(parse_word(print_word(rw)) == single(rw));
  }
}

TEST_CASE("JSON round trip", "[dsl-io]") {
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    const Word rw = random_word(rng, m, 4, "x");
    const WordPoly w = single(rw, ExactCoeff(Rational(5, 3), Rational(-7, 2), 2));
    CHECK(word_from_json(to_json(w)) == w);
    CHECK(word_from_json(nlohmann::json::parse(to_json(w).dump())) == w);
    TreePoly p;
    add_term(p, random_paired_tree(rng, m, 2, 2), ExactCoeff(Rational(1, 3)));
    CHECK(tree_from_json(to_json(p)) == p);
  }
  const WordPoly e = single(empty_word(Model::Wave));
  CHECK(word_from_json(to_json(e)) == e);
  CHECK(print_word(e).find("+ 1") != std::string::npos);
}

TEST_CASE("JSON schema errors", "[dsl-io]") {
  nlohmann::json j = to_json(single(tagged({"a", "b"})));
  j["schema"] = "arborify/v0";
  CHECK_THROWS_AS(word_from_json(j), SchemaError);

  Rng rng(2);
  PairedTree t = random_paired_tree(rng, Model::NLS, 1, 2);
  TreePoly p;
  add_term(p, t, ExactCoeff::one());
  nlohmann::json k = to_json(p);
  k["terms"][0]["pairing"]["class2"].push_back(nlohmann::json::array({0, 99}));
  CHECK_THROWS_AS(tree_from_json(k), SchemaError);
  CHECK(coeff_from_json(coeff_to_json(ExactCoeff(Rational(-1, 7), Rational(2), 3))) ==
        ExactCoeff(Rational(-1, 7), Rational(2), 3));
}

TEST_CASE("DOT rendering marks green leaves", "[dsl-io]") {
  const Document d = parse_document(kT7);
  REQUIRE(d.trees);
  const std::string dot = to_dot(d.trees->begin()->first);
  CHECK(count_substr(dot, "fillcolor=green") == 2);
  CHECK(count_substr(dot, "style=dashed") == 1);
  CHECK(dot.rfind("graph", 0) == 0);
}

TEST_CASE("golden corpus round trips byte for byte", "[dsl-io]") {
  int files = 0;
  for (const auto& e : std::filesystem::directory_iterator(GOLDEN_DIR)) {
    if (e.path().extension() != ".arb") continue;
    ++files;
    const std::string text = slurp(e.path());
    const Document d = parse_document(text);
    INFO(e.path().filename().string());
    if (d.trees) {
      CHECK(print_tree(*d.trees) == text);
      CHECK(tree_from_json(to_json(*d.trees)) == *d.trees);
    } else {
      REQUIRE(d.words);
      CHECK(print_word(*d.words) == text);
      CHECK(word_from_json(to_json(*d.words)) == *d.words);
    }
  }
  CHECK(files == 50);
}
