#include "arborify/evaluation.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>

namespace arborify {

double japanese(const Frequency& n) { return std::sqrt(1.0 + static_cast<double>(n.norm2())); }

double nls_phase(const Frequency& k, const EvalParams& p) {
  double s = static_cast<double>(k.norm2()) / (p.L * p.L);
  if (p.phase_2pi) s *= 4 * std::numbers::pi * std::numbers::pi;
  return s;
}

double nls_weight(const Frequency& k, const EvalParams& p) {
  const double x = static_cast<double>(k.norm2()) / (p.L * p.L);
  switch (p.weight) {
    case WeightKind::Gaussian:
      return std::exp(-x);
    case WeightKind::Rational:
      return 1.0 / ((1.0 + x) * (1.0 + x));
    case WeightKind::Table: {
      auto it = p.weight_table.find(k);
      if (it == p.weight_table.end()) throw EvalError("weight table has no entry for " + k.str());
      if (!(it->second > 0)) throw EvalError("weight must be strictly positive");
      return it->second;
    }
  }
  return 0;
}

double nls_kernel_split_check(const Frequency& k, double s, double t, const EvalParams& p) {
  const double k2 = nls_phase(k, p);
  const Complex lhs = std::polar(1.0, (s - t) * k2);
  const Complex rhs = std::polar(1.0, -t * k2) * std::conj(std::polar(1.0, -s * k2));
  return std::abs(lhs - rhs);
}

double wave_cov(const Frequency& n, double t, double tp) {
  const double a = japanese(n);
  return std::cos((t - tp) * a) / (a * a);
}

double wave_cov_dt(const Frequency& n, double t, double tp) {
  const double a = japanese(n);
  return -std::sin((t - tp) * a) / a;
}

double wave_cov_fd_error(const Frequency& n, double t, double tp, double h) {
  const double fd = (wave_cov(n, t + h, tp) - wave_cov(n, t - h, tp)) / (2 * h);
  return std::abs(fd - wave_cov_dt(n, t, tp));
}

Complex coeff_value(const ExactCoeff& c, double mu) {
  const Complex z(boost::rational_cast<double>(c.re), boost::rational_cast<double>(c.im));
  return z * std::pow(mu, 2 * c.mu_exp);
}

namespace {

struct End {
  Frequency freq;
  int conj = 0;
  bool hat = false;
  int slot = kFinalTime;
};

// Adds one pair covariance. Returns false when the covariance vanishes.
bool add_pair(TimeProblem& prob, const End& x, const End& y, int cls, Model model, const EvalParams& p) {
  if (model == Model::NLS) {
    if (x.freq != y.freq || x.conj == y.conj) return false;
    const End& e0 = x.conj == 0 ? x : y;
    const End& e1 = x.conj == 0 ? y : x;
    prob.factors.push_back({e0.slot, e1.slot, FactorKind::Exp, -nls_phase(x.freq, p), 1.0});
    const double sw = std::sqrt(nls_weight(x.freq, p));
    if (!x.hat) prob.prefactor *= sw;
    if (!y.hat) prob.prefactor *= sw;
    return true;
  }
  if (!(x.freq + y.freq).is_zero()) return false;
  const double a = japanese(x.freq);
  if (cls == 2) {
    prob.factors.push_back({x.slot, y.slot, FactorKind::Cos, a, 1.0 / (a * a)});
    return true;
  }
  if (x.hat == y.hat) throw EvalError("green pair needs exactly one green end");
  const End& g = x.hat ? x : y;
  const End& o = x.hat ? y : x;
  prob.factors.push_back({g.slot, o.slot, FactorKind::Sin, a, -1.0 / a});
  return true;
}

void add_unpaired(TimeProblem& prob, const End& z, Model model, const EvalParams& p) {
  if (model == Model::Wave) throw EvalError("unpaired leaf " + z.freq.str() + " in wave evaluation");
  Complex eta = 1;
  switch (p.eta_mode) {
    case EtaMode::Error:
      throw EvalError("unpaired leaf " + z.freq.str() + " in deterministic mode");
    case EtaMode::Ones:
      break;
    case EtaMode::Sample: {
      auto it = p.eta.find(z.freq);
      if (it == p.eta.end()) throw EvalError("no eta sample for " + z.freq.str());
      eta = z.conj ? std::conj(it->second) : it->second;
      break;
    }
  }
  const double k2 = nls_phase(z.freq, p);
  prob.factors.push_back({z.slot, kZeroTime, FactorKind::Exp, z.conj ? k2 : -k2, 1.0});
  prob.prefactor *= eta;
  if (!z.hat) prob.prefactor *= std::sqrt(nls_weight(z.freq, p));
}

bool within(const Frequency& f, int N) { return f.norm2() <= static_cast<std::int64_t>(N) * N; }

QuadOptions quad_options(const EvalParams& p, int order) {
  QuadOptions q;
  q.order = order;
  q.threads = p.threads > 0 ? p.threads : default_threads();
  return q;
}

Complex run(const TimeProblem& prob, const EvalParams& p, EvalStats* stats) {
  if (!(p.t > 0)) throw EvalError("t must be positive");
  if (p.quad_order < 2) throw EvalError("quadrature order must be at least 2");
  const Complex v = integrate(prob, p.t, quad_options(p, p.quad_order));
  if (p.self_check) {
    const Complex h = integrate(prob, p.t, quad_options(p, std::max(2, p.quad_order / 2)));
    const double diff = std::abs(v - h);
    if (stats) {
      stats->self_check_diff = std::max(stats->self_check_diff, diff);
      if (diff > p.self_check_tol * (1 + std::abs(v))) stats->warning = true;
    }
  }
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw EvalError("non-finite evaluation");
  return v;
}

}  // namespace

TimeProblem tree_problem(const PairedTree& pt, const EvalParams& p, Model model) {
  TimeProblem prob;
  std::map<int, End> leaf_end;
  bool killed = false;
  std::function<void(const Node&, int)> walk = [&](const Node& n, int slot) {
    for (const auto& c : n.children) {
      if (model == Model::Wave && !within(c.freq, p.N)) killed = true;
      if (c.is_leaf()) {
        leaf_end[c.leaf_id] = End{c.freq, c.decor.conj, c.decor.hat, slot};
        continue;
      }
      const int v = prob.num_vars++;
      prob.upper.push_back(slot);
      if (model == Model::NLS) {
        const double sgn = c.decor.conj ? -1.0 : 1.0;
        prob.prefactor *= Complex(0, sgn) * p.mu * p.mu;
        prob.factors.push_back({v, slot, FactorKind::Exp, sgn * nls_phase(c.freq, p), 1.0});
      } else {
        const double a = japanese(c.freq);
        prob.factors.push_back({slot, v, FactorKind::Sin, a, 1.0 / a});
      }
      walk(c, v);
    }
  };
  walk(pt.tree.root, kFinalTime);
  pt.pairing.check_disjoint(static_cast<int>(leaf_end.size()));
  for (int cls : {1, 2})
    for (auto [a, b] : cls == 1 ? pt.pairing.class1 : pt.pairing.class2) {
      if (!add_pair(prob, leaf_end.at(a), leaf_end.at(b), cls, model, p)) killed = true;
      leaf_end.erase(a);
      leaf_end.erase(b);
    }
  for (const auto& [id, e] : leaf_end) add_unpaired(prob, e, model, p);
  if (killed) prob.prefactor = 0;
  return prob;
}

TimeProblem word_problem(const Word& w, const EvalParams& p) {
  TimeProblem prob;
  if (w.empty()) return prob;
  if (w.letters.back().green_node) throw EvalError("last letter cannot be a green node");
  const int n = static_cast<int>(w.letters.size());
  std::vector<int> slot_of_letter(n);
  int next_slot = kFinalTime;
  for (int i = n - 1; i >= 0; --i) {
    if (i == n - 1) {
      slot_of_letter[i] = kFinalTime;
      continue;
    }
    if (w.letters[i].green_node) {
      slot_of_letter[i] = kZeroTime;
      continue;
    }
    const int v = prob.num_vars++;
    prob.upper.push_back(next_slot);
    slot_of_letter[i] = v;
    next_slot = v;
  }
  bool killed = false;
  std::vector<End> ends;
  for (int i = 0; i < n; ++i)
    for (const auto& s : w.letters[i].slots) {
      if (w.model == Model::Wave && !within(s.freq, p.N)) killed = true;
      ends.push_back(End{s.freq, s.conj, s.hat, slot_of_letter[i]});
    }
  w.pairing.check_disjoint(static_cast<int>(ends.size()));
  std::vector<char> paired(ends.size(), 0);
  for (int cls : {1, 2})
    for (auto [a, b] : cls == 1 ? w.pairing.class1 : w.pairing.class2) {
      if (!add_pair(prob, ends[a], ends[b], cls, w.model, p)) killed = true;
      paired[a] = paired[b] = 1;
    }
  for (std::size_t i = 0; i < ends.size(); ++i)
    if (!paired[i]) add_unpaired(prob, ends[i], w.model, p);
  if (w.model == Model::NLS) prob.prefactor *= std::pow(p.mu, 2 * (n - 1));
  if (killed) prob.prefactor = 0;
  return prob;
}

Complex eval_tree(const PairedTree& t, const EvalParams& p, Model model, EvalStats* stats) {
  return run(tree_problem(t, p, model), p, stats);
}

Complex eval_treepoly(const TreePoly& poly, const EvalParams& p, Model model, EvalStats* stats) {
  Complex s = 0;
  for (const auto& [t, c] : poly) s += coeff_value(c, p.mu) * eval_tree(t, p, model, stats);
  return s;
}

Complex eval_word(const Word& w, const EvalParams& p, EvalStats* stats) {
  if (w.empty()) return 1;
  return run(word_problem(w, p), p, stats);
}

Complex eval_wordpoly(const WordPoly& poly, const EvalParams& p, EvalStats* stats) {
  Complex s = 0;
  for (const auto& [w, c] : poly) s += coeff_value(c, p.mu) * eval_word(w, p, stats);
  return s;
}

WickCheck mc_wick_check(const DecoratedTree& t, const EvalParams& p, int samples) {
  if (samples < 2) throw EvalError("need at least two samples");
  WickCheck r;
  r.samples = samples;
  EvalParams det = p;
  det.eta_mode = EtaMode::Ones;
  const Complex D = eval_tree(PairedTree{t, {}}, det, Model::NLS);

  auto leaves = t.leaf_data();
  det.eta_mode = EtaMode::Error;
  for (const auto& pr : wick_pairings(leaves, Model::NLS)) {
    r.expected += eval_tree(PairedTree{t, pr}, det, Model::NLS);
    ++r.pairings;
  }

  std::map<Frequency, Complex> eta;
  for (const auto& l : leaves) eta[l.freq] = 0;
  std::mt19937_64 rng(p.seed);
  std::normal_distribution<double> g(0.0, std::sqrt(0.5));
  Complex sum = 0;
  double sum2 = 0;
  std::vector<Complex> xs;
  xs.reserve(samples);
  for (int s = 0; s < samples; ++s) {
    for (auto& [k, e] : eta) {
      const double re = g(rng);
      const double im = g(rng);
      e = Complex(re, im);
    }
    Complex x = D;
    for (const auto& l : leaves) x *= l.conj ? std::conj(eta[l.freq]) : eta[l.freq];
    xs.push_back(x);
    sum += x;
  }
  r.mean = sum / static_cast<double>(samples);
  for (const auto& x : xs) sum2 += std::norm(x - r.mean);
  const double var = sum2 / (samples - 1);
  r.std_error = std::sqrt(var / samples);
  const double diff = std::abs(r.mean - r.expected);
  r.z = r.std_error > 0 ? diff / r.std_error : (diff == 0 ? 0 : INFINITY);
  return r;
}

}  // namespace arborify
