#include "catch_amalgamated.hpp"
#include "helpers.hpp"

#include "arborify/arborify.hpp"
#include "arborify/cancellation.hpp"

#include <cmath>

using namespace arborify;
using namespace th;
using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;

TEST_CASE("family 1 exact case cancels", "[cancellation]") {
  EvalParams p;
  p.L = 10;
  const auto r = cancel_family1(family1_freqs(Frequency{3}, Frequency{-5}, Frequency{7}, Frequency{7}), p);
  CHECK(r.exact_case);
  CHECK(std::abs(r.pi_t5) > 0.1);
  CHECK(std::abs(r.sum) <= 1e-9);
}

TEST_CASE("family 1 word identity", "[cancellation]") {
  CHECK(family1_identity(family1_freqs(Frequency{3}, Frequency{-5}, Frequency{7}, Frequency{9})).empty());
  CHECK_THROWS_AS(family1_identity(family1_freqs(Frequency{3}, Frequency{-5}, Frequency{7}, Frequency{7})),
                  CancellationError);
}

TEST_CASE("family 1 sweep decreases with L", "[cancellation]") {
  const auto s = family1_sweep(0.3, -0.5, 0.7, {10, 100, 1000}, EvalParams{});
  REQUIRE(s.size() == 3);
  CHECK(s[1].abs_sum < s[0].abs_sum);
  CHECK(s[2].abs_sum < s[1].abs_sum);
  CHECK_THAT(s[0].gap, WithinAbs(0.1, 1e-15));
}

TEST_CASE("family 2 residual", "[cancellation]") {
  const auto f = family2_freqs(Frequency{1}, Frequency{3}, Frequency{9}, Frequency{27}, Frequency{81});
  const auto r0 = cancel_family2(f);
  CHECK(r0.residual ==
        TagPoly{{{"a3", "a1", "a2"}, ExactCoeff(0, 1)}, {{"a2", "a1", "a3"}, ExactCoeff(0, -1)}});
  CHECK(r0.forbidden == 0);
  CHECK(r0.ordered_opposite);

  const auto r1 = cancel_family2(f, 1);
  CHECK(r1.residual.size() == 8);
  CHECK(r1.forbidden == 0);
  CHECK(r1.ordered_opposite);
  for (const auto& [w, c] : r1.residual) CHECK_FALSE(has_ordered(w, {"a1", "a2", "a3"}));
}

TEST_CASE("family 3 residual is one monomial", "[cancellation]") {
  const auto r = cancel_family3();
  CHECK(r.residual == TagPoly{{{"a2", "a1", "a3", "tail"}, ExactCoeff(0, -1)}});
  CHECK(r.letters_match);
  CHECK(r.forbidden == 0);
}

TEST_CASE("ordered subsequence test", "[cancellation]") {
  CHECK(has_ordered({"a1", "x", "a2", "a3"}, {"a1", "a2", "a3"}));
  CHECK_FALSE(has_ordered({"a2", "a1", "a3"}, {"a1", "a2", "a3"}));
}

TEST_CASE("integration by parts on the T1 word", "[cancellation]") {
  const Word w = wave_T1_word({1, 0, 0}, {0, 1, -1}, {1, 1, 0});
  const IbpResult r = ibp(w, 0);
  REQUIRE(r.relocated.size() == 3);
  REQUIRE(r.upper_boundary.size() == 1);
  REQUIRE(r.lower_boundary.size() == 1);
  for (const auto& [x, c] : r.relocated) CHECK(c == ExactCoeff(-1));
  CHECK(r.upper_boundary.begin()->second == ExactCoeff::one());
  CHECK(r.lower_boundary.begin()->second == ExactCoeff(-1));
  CHECK(r.upper_boundary.begin()->first.letters.size() == 2);
  CHECK(r.upper_boundary.begin()->first.letters[0].slots.size() == 8);
  CHECK(r.lower_boundary.begin()->first.letters[0].green_node);

  EvalParams p;
  p.d = 3;
  p.N = 10;
  const Complex a = eval_word(w, p), b = eval_wordpoly(r.total(), p);
  CHECK(std::abs(a - b) <= 1e-8 * std::abs(a));
  CHECK_THROWS(ibp(w, 1));
}

TEST_CASE("Gamma_N values", "[cancellation]") {
  const Frequency z{0, 0, 0}, e{1, 0, 0};
  CHECK(gamma_N(z, 0) == 1.0);
  CHECK(gamma_N(e, 0) == 0.0);
  CHECK_THAT(gamma_N(z, 1), WithinRel(5.5, 1e-15));
  CHECK_THAT(gamma_N(e, 1), WithinRel(3.375, 1e-15));
  CHECK_THAT(gamma_N(z, 2), WithinRel(28.8977777777778, 1e-12));
  for (int N = 0; N < 3; ++N) {
    CHECK(gamma_N(z, N + 1) >= gamma_N(z, N));
    CHECK(gamma_N(e, N + 1) >= gamma_N(e, N));
  }
  CHECK(ball(1).size() == 7);
  CHECK(ball(2).size() == 33);
}

TEST_CASE("c_N at N = 0 against Simpson", "[cancellation]") {
  const int n = 20000;
  const double h = 1.0 / n;
  double s = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = i * h;
    s += (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2)) * std::pow(std::cos(x), 3) * std::sin(1 - x);
  }
  const double oracle = -2 * std::cos(1.0) * s * h / 3;
  CHECK_THAT(oracle, WithinAbs(-0.39266289821162, 1e-13));

  const FrakC c = frak_c_N(0, 1.0, EvalParams{});
  CHECK_THAT(c.closed_form, WithinAbs(oracle, 1e-12));
  CHECK(std::abs(c.difference) <= 1e-8);
  CHECK_THAT(c.gamma_term, WithinAbs(c.upper, 1e-14));
  CHECK_THAT(c.relocated[0] + c.relocated[1], WithinAbs(2 * c.t1_sum, 1e-14));
  CHECK_THAT(c.t2_orders[0], WithinAbs(c.t2_orders[1], 1e-14));
  CHECK_THAT(c.sixth_lhs, WithinAbs(c.sixth_rhs, 1e-12));
}

TEST_CASE("c_N at N = 1", "[cancellation]") {
  const FrakC c = frak_c_N(1, 1.0, EvalParams{});
  CHECK(std::abs(c.difference) <= 1e-7);
  CHECK_THAT(c.pipeline, WithinAbs(-2.85041949289136, 1e-11));
  CHECK_THAT(c.gamma_term, WithinRel(c.upper, 1e-13));
}
