#include "catch_amalgamated.hpp"
#include "helpers.hpp"

#include "arborify/arborify.hpp"
#include "arborify/cancellation.hpp"
#include "arborify/random.hpp"

using namespace arborify;
using namespace th;

namespace {

PairedTree t4() {
  return paired(root({inner(0, {leaf(Frequency{1}, 1), leaf(Frequency{2}), leaf(Frequency{5})})}));
}

}  // namespace

TEST_CASE("a one-letter tree maps to its letter", "[arborification]") {
  const PairedTree t = paired(root({leaf(Frequency{1}), leaf(Frequency{2}, 1), leaf(Frequency{3})}, "a"));
  const WordPoly w = arborify::arborify(t, Model::NLS);
  REQUIRE(w.size() == 1);
  CHECK(w.begin()->second == ExactCoeff::one());
  CHECK(w.begin()->first.letters.size() == 1);
  CHECK(tags_of(w.begin()->first) == TagWord{"a"});
}

TEST_CASE("two branches give two orders", "[arborification]") {
  const PairedTree t = paired(root({inner(0, {leaf(Frequency{1}), leaf(Frequency{2}, 1), leaf(Frequency{3})}, "a1"),
                                    inner(0, {leaf(Frequency{4}), leaf(Frequency{5}, 1), leaf(Frequency{6})}, "a2")},
                                   "a3"));
  const TagPoly p = tag_projection(arborify::arborify(t, Model::NLS));
  REQUIRE(p.size() == 2);
  CHECK(p.count({"a1", "a2", "a3"}) == 1);
  CHECK(p.count({"a2", "a1", "a3"}) == 1);
  CHECK(p.at({"a1", "a2", "a3"}) == p.at({"a2", "a1", "a3"}));
}

TEST_CASE("T5 arborifies to one two-letter word with coefficient -i", "[arborification]") {
  const auto f = family1_freqs(Frequency{3}, Frequency{-5}, Frequency{7}, Frequency{9});
  const WordPoly w = arborify::arborify(family1_trees(f).t5, Model::NLS);
  REQUIRE(w.size() == 1);
  const auto& [word, c] = *w.begin();
  CHECK(c == ExactCoeff(0, -1));
  REQUIRE(word.letters.size() == 2);
  CHECK(word.letters[0].slots.size() == 4);
  CHECK(word.letters[1].slots.size() == 3);
  int hats = 0;
  for (const auto& l : word.letters)
    for (const auto& s : l.slots)
      if (s.hat) {
        ++hats;
        CHECK(s.freq == f.l1);
      }
  CHECK(hats == 2);
  CHECK(word.pairing.class1.size() == 1);
}

TEST_CASE("wave T2 arborifies to two three-letter words", "[arborification]") {
  const WordPoly w = arborify::arborify(wave_T2({1, 0, 0}, {0, 1, 0}, {0, 0, 1}), Model::Wave);
  REQUIRE(w.size() == 2);
  for (const auto& [word, c] : w) CHECK(word.letters.size() == 3);
}

TEST_CASE("coproduct of a leaf and of T4", "[arborification]") {
  const auto leaf_cp = coproduct(leaf_tree({EdgeKind::T1, 0, false}, Frequency{1}), Model::NLS);
  REQUIRE(leaf_cp.size() == 1);
  CHECK(leaf_cp[0].left.empty());
  CHECK(leaf_cp[0].coeff == ExactCoeff::one());

  const auto cp = coproduct(t4().tree, Model::NLS);
  REQUIRE(cp.size() == 2);
  int with_i = 0;
  for (const auto& c : cp) with_i += c.coeff == ExactCoeff(0, 1);
  CHECK(with_i == 1);
}

TEST_CASE("wave coproduct puts -k on the hat factor", "[arborification]") {
  const Frequency a{1, 0, 0}, b{0, 1, 0}, c{0, 0, 1};
  const DecoratedTree t = canonicalize(root({inner(0, {leaf(a), leaf(b), leaf(c)}), leaf(-(a + b + c))}));
  bool found = false;
  for (const auto& term : coproduct(t, Model::Wave))
    for (const auto& f : term.left)
      for (const auto& l : f.leaves()) found = found || (l->decor.hat && l->freq == -(a + b + c));
  CHECK(found);
}

TEST_CASE("recursive and coproduct arborification agree", "[arborification]") {
  CHECK(arborify::arborify(t4(), Model::NLS) == arborify_cp(t4(), Model::NLS));
  const auto f = family1_trees(family1_freqs(Frequency{3}, Frequency{-5}, Frequency{7}, Frequency{9}));
  CHECK(arborify::arborify(f.t5, Model::NLS) == arborify_cp(f.t5, Model::NLS));
  CHECK(arborify::arborify(f.t6, Model::NLS) == arborify_cp(f.t6, Model::NLS));
  Rng rng(3);
  for (int i = 0; i < 50; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    const PairedTree t = random_distinct_tree(rng, m, 6);
    CHECK(arborify::arborify(t, m) == arborify_cp(t, m));
  }
}

TEST_CASE("word count equals linear extension count", "[arborification]") {
  Rng rng(17);
  for (int i = 0; i < 50; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    const PairedTree t = random_distinct_tree(rng, m, 8);
    CHECK(arborify::arborify(t, m).size() == linear_extensions(t.tree).count);
  }
}

TEST_CASE("arborification of a forest is the shuffle", "[arborification]") {
  const PairedTree a = paired(root({inner(0, {leaf(Frequency{1}), leaf(Frequency{2}, 1), leaf(Frequency{3})})}));
  const PairedTree b = paired(root({leaf(Frequency{8}), leaf(Frequency{9}, 1), leaf(Frequency{4})}));
  CHECK(arborify_forest({a, b}, Model::NLS) ==
        shuffle(arborify::arborify(a, Model::NLS), arborify::arborify(b, Model::NLS)));
}
