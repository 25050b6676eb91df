#include "catch_amalgamated.hpp"
#include "helpers.hpp"

#include "arborify/random.hpp"

#include <algorithm>

using namespace arborify;
using namespace th;

namespace {

std::int64_t binom(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// all interleavings by brute force over position subsets
TagPoly interleavings(const TagWord& u, const TagWord& v) {
  const int n = static_cast<int>(u.size() + v.size());
  TagPoly out;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != u.size()) continue;
    TagWord w;
    std::size_t i = 0, j = 0;
    for (int b = 0; b < n; ++b) w.push_back(mask >> b & 1 ? u[i++] : v[j++]);
    out[w] += ExactCoeff::one();
  }
  return out;
}

}  // namespace

TEST_CASE("shuffle with the empty word", "[algebra-words]") {
  const Word a = tagged({"a"});
  const WordPoly s = shuffle(a, empty_word(Model::NLS));
  REQUIRE(s.size() == 1);
  CHECK(s.begin()->first == a);
  CHECK(shuffle(empty_word(Model::NLS), a) == s);
}

TEST_CASE("a1 shuffle a2", "[algebra-words]") {
  const TagPoly p = tag_projection(shuffle(tagged({"a1"}), tagged({"a2"})));
  CHECK(p == TagPoly{{{"a1", "a2"}, ExactCoeff::one()}, {{"a2", "a1"}, ExactCoeff::one()}});
}

TEST_CASE("shuffle matches brute-force interleavings", "[algebra-words]") {
  CHECK(tag_projection(shuffle(tagged({"a1", "a2"}), tagged({"b"}))) == interleavings({"a1", "a2"}, {"b"}));
  CHECK(tag_projection(shuffle(tagged({"a", "b", "c"}), tagged({"x", "y"}))) ==
        interleavings({"a", "b", "c"}, {"x", "y"}));
  CHECK(tag_shuffle(TagWord{"p", "q"}, TagWord{"r", "s"}) == interleavings({"p", "q"}, {"r", "s"}));
}

TEST_CASE("concat", "[algebra-words]") {
  const Word a = tagged({"a1"}), bc = tagged({"a2", "a3"});
  CHECK(concat(empty_word(Model::NLS), a) == a);
  CHECK(tags_of(concat(a, bc)) == TagWord{"a1", "a2", "a3"});
}

TEST_CASE("shuffle algebra laws on random words", "[algebra-words]") {
  Rng rng(11);
  for (int i = 0; i < 60; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    const Word u = random_word(rng, m, 3, "u"), v = random_word(rng, m, 3, "v"), w = random_word(rng, m, 2, "w");
    const WordPoly uv = shuffle(u, v);
    CHECK(uv == shuffle(v, u));
    CHECK(shuffle(uv, single(w)) == shuffle(single(u), shuffle(v, w)));
    const auto c = concat(u, v);
    REQUIRE(uv.count(c) == 1);
    CHECK(uv.at(c) == ExactCoeff::one());
    std::int64_t total = 0;
    for (const auto& [x, k] : uv) total += k.re.numerator();
    CHECK(total == binom(static_cast<int>(u.letters.size() + v.letters.size()), static_cast<int>(u.letters.size())));
  }
}

TEST_CASE("swap_green", "[algebra-words]") {
  const Frequency k{2}, l{5};
  const Word w = word(Model::NLS, {letter({slot(k, 0), slot(l, 1, true), slot(k, 1), slot(Frequency{1})}, "a"),
                                   letter({slot(l, 0, true)}, "b")},
                      {{1, 4}});
  const Word s = swap_green(w, k, l);
  CHECK_FALSE(s == w);
  CHECK(swap_green(s, k, l) == w);
  for (const auto& sl : s.letters[0].slots) CHECK(sl.hat == (sl.freq == k));

  const Word plain = word(Model::NLS, {letter({slot(k), slot(l, 1), slot(Frequency{3})}, "c")});
  CHECK(swap_green(plain, k, l) == plain);
}

TEST_CASE("word validation", "[algebra-words]") {
  // the final letter is the root letter and is not constrained
  const Letter last = letter({slot(Frequency{9})}, "z");
  CHECK_NOTHROW(validate_word(word(Model::NLS, {letter({slot(Frequency{1}), slot(Frequency{2}, 1), slot(Frequency{3})}, "a"), last})));
  CHECK_THROWS(validate_word(word(Model::NLS, {letter({slot(Frequency{1}), slot(Frequency{1}, 1)}, "a"), last})));
  CHECK_NOTHROW(validate_word(word(Model::NLS, {letter({slot(Frequency{1}), slot(Frequency{1}, 1)}, "a")})));
  // four slots must balance
  CHECK_THROWS(validate_word(word(
      Model::NLS, {letter({slot(Frequency{1}), slot(Frequency{2}, 1), slot(Frequency{3}), slot(Frequency{4}, 1)}, "a"), last})));
  CHECK_NOTHROW(validate_word(word(
      Model::NLS, {letter({slot(Frequency{1}), slot(Frequency{2}, 1), slot(Frequency{5}), slot(Frequency{4}, 1)}, "a"), last})));
  Word g = word(Model::NLS, {letter({slot(Frequency{1})}, "a", true), letter({slot(Frequency{1}, 1)}, "b")});
  CHECK_THROWS(validate_word(g));
}

TEST_CASE("canonical word is idempotent", "[algebra-words]") {
  Rng rng(5);
  for (int i = 0; i < 30; ++i) {
    const Word w = random_word(rng, i % 2 ? Model::Wave : Model::NLS, 4, "x");
    const Word c = canonical_word(w);
    CHECK(canonical_word(c).key == c.key);
  }
}
