#pragma once

#include "arborify/quadrature.hpp"
#include "arborify/tree.hpp"
#include "arborify/word.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>

namespace arborify {

enum class WeightKind { Gaussian, Rational, Table };

// How unpaired NLS leaves are treated.
enum class EtaMode {
  Error,   // deterministic mode: unpaired leaves are rejected
  Ones,    // eta == 1, the deterministic factor of a Monte Carlo sample
  Sample,  // eta taken from EvalParams::eta (per frequency)
};

struct EvalParams {
  double t = 1.0;
  std::size_t d = 1;
  double L = 1.0;
  double mu = 1.0;
  WeightKind weight = WeightKind::Gaussian;
  std::map<Frequency, double> weight_table;
  int N = 3;
  int quad_order = 64;
  std::uint64_t seed = 0;
  bool phase_2pi = false;
  EtaMode eta_mode = EtaMode::Error;
  std::map<Frequency, Complex> eta;
  bool self_check = false;  // also integrate at half order and compare
  double self_check_tol = 1e-9;
  int threads = 0;  // 0: ARBORIFY_THREADS
};

struct EvalStats {
  bool warning = false;
  double self_check_diff = 0;
  void merge(const EvalStats& o) {
    warning = warning || o.warning;
    self_check_diff = std::max(self_check_diff, o.self_check_diff);
  }
};

struct EvalError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// <n> = sqrt(1 + |n|^2)
double japanese(const Frequency& n);
// |k/L|^2, times (2 pi)^2 with phase_2pi
double nls_phase(const Frequency& k, const EvalParams& p);
double nls_weight(const Frequency& k, const EvalParams& p);

// |e^{i(s-t)k^2} - e^{-itk^2} conj(e^{-isk^2})|
double nls_kernel_split_check(const Frequency& k, double s, double t, const EvalParams& p = {});

double wave_cov(const Frequency& n, double t, double tp);
// d/dt of wave_cov
double wave_cov_dt(const Frequency& n, double t, double tp);
// |central difference - analytic| for the t-derivative
double wave_cov_fd_error(const Frequency& n, double t, double tp, double h);

TimeProblem tree_problem(const PairedTree& t, const EvalParams& p, Model model);
TimeProblem word_problem(const Word& w, const EvalParams& p);

Complex eval_tree(const PairedTree& t, const EvalParams& p, Model model, EvalStats* stats = nullptr);
Complex eval_treepoly(const TreePoly& poly, const EvalParams& p, Model model, EvalStats* stats = nullptr);
Complex eval_word(const Word& w, const EvalParams& p, EvalStats* stats = nullptr);
Complex eval_wordpoly(const WordPoly& poly, const EvalParams& p, EvalStats* stats = nullptr);

// Numeric value of an exact coefficient with mu substituted.
Complex coeff_value(const ExactCoeff& c, double mu);

struct WickCheck {
  Complex mean;
  Complex expected;
  double std_error = 0;
  double z = 0;
  int samples = 0;
  std::size_t pairings = 0;
};

// Monte Carlo mean of the tree evaluated at sampled eta against the Wick sum.
WickCheck mc_wick_check(const DecoratedTree& t, const EvalParams& p, int samples);

}  // namespace arborify
