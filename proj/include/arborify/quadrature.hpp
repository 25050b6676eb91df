#pragma once

#include <complex>
#include <vector>

namespace arborify {

using Complex = std::complex<double>;

// Gauss-Legendre nodes and weights on [0, 1].
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre(int order);

// Time slots: values >= 0 are integration variables, kFinalTime is t, kZeroTime is 0.
constexpr int kFinalTime = -1;
constexpr int kZeroTime = -2;

enum class FactorKind { Exp, Sin, Cos };

// scale * g(omega * (t_a - t_b)) with g = exp(i.), sin or cos.
struct TimeFactor {
  int a = kFinalTime;
  int b = kFinalTime;
  FactorKind kind = FactorKind::Exp;
  double omega = 0;
  Complex scale = 1;
};

// Nested integral over 0 < t_v < t_{upper[v]} of the product of the factors.
struct TimeProblem {
  int num_vars = 0;
  std::vector<int> upper;  // per variable: another variable or kFinalTime
  std::vector<TimeFactor> factors;
  Complex prefactor = 1;
};

struct QuadOptions {
  int order = 64;
  // largest omega * panel width per panel, scaled by order / 64
  double max_phase_per_panel = 80;
  int max_panels = 512;
  int threads = 1;
};

Complex integrate(const TimeProblem& p, double t, const QuadOptions& opt);

// Reads ARBORIFY_THREADS (default 1).
int default_threads();

}  // namespace arborify
