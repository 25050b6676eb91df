#pragma once

#include "arborify/evaluation.hpp"
#include "arborify/tree.hpp"
#include "arborify/word.hpp"

#include <stdexcept>
#include <vector>

namespace arborify {

struct CancellationError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// ---- family 1 (NLS) ----

// l1 must satisfy -l1 = -k1 - k5 + k4.
struct Family1Freqs {
  Frequency k1, k2, k4, k5, l1;
};
Family1Freqs family1_freqs(const Frequency& k1, const Frequency& k2, const Frequency& k4,
                           const Frequency& k5);

struct Family1Trees {
  PairedTree t5, t6;
};
// k1 pairs inside each tree (l1 in the second); k4, k5 pair when equal.
Family1Trees family1_trees(const Family1Freqs& f);

struct Family1Report {
  bool exact_case = false;
  Complex pi_t5, pi_t6, sum;
};
// Unpaired leaves are evaluated with eta = 1.
Family1Report cancel_family1(const Family1Freqs& f, const EvalParams& p);

// a(T5) + psi_{k1,l1}(a(T6)); needs k1 != l1.
WordPoly family1_identity(const Family1Freqs& f);

struct SweepPoint {
  double L = 0;
  double gap = 0;  // |k1 - l1| / L
  double abs_sum = 0;
};
// d = 1, k_i = round(kappa_i L), l1 = k1 + 1, k5 = k4 + 1.
std::vector<SweepPoint> family1_sweep(double kappa1, double kappa2, double kappa4,
                                      const std::vector<double>& Ls, EvalParams p);

// ---- families 2 and 3 (NLS, tag level) ----

struct ResidualReport {
  WordPoly words1, words2;  // the second already mapped (psi for family 3)
  TagPoly tags1, tags2;     // tags of the second renamed to a-letters
  TagPoly residual;
  int forbidden = 0;             // residual monomials with a1 a2 a3 in order
  bool ordered_opposite = false; // those monomials cancel termwise between the two sides
  bool letters_match = true;     // family 3: psi(b_i) has the shape of its a-letter
};

bool has_ordered(const TagWord& w, const TagWord& pattern);

struct Family2Freqs {
  Frequency k1, k2, k3, r1, r2, h1, h2, h3;
};
// h1 = k1, h2 = k2, h3 = k3 + r2 - r1.
Family2Freqs family2_freqs(const Frequency& k1, const Frequency& k2, const Frequency& k3,
                           const Frequency& r1, const Frequency& r2);

struct Family2Trees {
  PairedTree t1, t2;
};
// Root letter tagged "v"; u_letters adds a chain branch u1 .. un at the root.
Family2Trees family2_trees(const Family2Freqs& f, int u_letters = 0);

// keep_root = false drops the trailing "v" (v = 1).
ResidualReport cancel_family2(const Family2Freqs& f, int u_letters = 0, bool keep_root = false);

struct Family3Freqs {
  Frequency k1, k2, r1, r2, r3, h2;
};
// h2 = k2 + r1 - r2
Family3Freqs family3_freqs(const Frequency& k1, const Frequency& k2, const Frequency& r1,
                           const Frequency& r2, const Frequency& r3);

struct Family3Trees {
  PairedTree t1, t2;
  Frequency l6;  // k1 + r1 - r2
};
Family3Trees family3_trees(const Family3Freqs& f);

// Root letter tagged "tail".
ResidualReport cancel_family3(const Family3Freqs& f);
ResidualReport cancel_family3();

// ---- wave integration by parts ----

struct IbpResult {
  WordPoly relocated;
  WordPoly upper_boundary;
  WordPoly lower_boundary;
  WordPoly total() const;
};

IbpResult ibp(const Word& w, std::size_t pos);

// Chain tree: root over -k3 and l1, l1 over -k1, -k2 and l2, l2 over k1, k2, k3.
PairedTree wave_T1(const Frequency& k1, const Frequency& k2, const Frequency& k3);
// Root over two nodes carrying k1, k2, k3 and -k1, -k2, -k3.
PairedTree wave_T2(const Frequency& k1, const Frequency& k2, const Frequency& k3);
// [k3, g(-k3)] [-k3, k3]
Word wave_W2(const Frequency& k3);
Word wave_T1_word(const Frequency& k1, const Frequency& k2, const Frequency& k3);

// Sum over k1 + k2 + l2 + k = 0, all in the ball of radius N, of 1/(<l2>^2 <k1>^2 <k2>^2).
double gamma_N(const Frequency& k, int N);

// Lattice points of Z^d with |k| <= N.
std::vector<Frequency> ball(int N, std::size_t d = 3);

struct FrakC {
  double pipeline = 0;     // sum 6 a(T1) + a(T2) - 2 Gamma W2
  double closed_form = 0;  // -2 sum of the cos/sin integral
  double difference = 0;
  double t1_sum = 0, t2_sum = 0, gamma_term = 0;
  // cross-checks
  double t2_orders[2] = {0, 0};    // the two shuffle orders of a(T2), summed
  double relocated[3] = {0, 0, 0}; // relocated words of a(T1), summed, partner in letter 1,1,2
  double upper = 0, lower = 0;     // boundary words, summed
  double sixth_lhs = 0, sixth_rhs = 0;
};

FrakC frak_c_N(int N, double t, const EvalParams& base);

// The closed-form integral alone, by Gauss-Legendre in s.
double frak_c_closed_form(int N, double t, int order = 64);

}  // namespace arborify
