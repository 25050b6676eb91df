#include "arborify/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace arborify {

const GaussRule& gauss_legendre(int order) {
  static std::mutex m;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(m);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;
  if (order < 2) throw std::invalid_argument("quadrature order must be at least 2");
  GaussRule r;
  r.x.resize(order);
  r.w.resize(order);
  // Newton iteration on P_n from the Tricomi initial guess
  for (int i = 0; i < order; ++i) {
    double z = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0;
    for (int it2 = 0; it2 < 100; ++it2) {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (z * p1 - p0) / (z * z - 1);
      double dz = p1 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1, p1 = z;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1) * z * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (z * p1 - p0) / (z * z - 1);
    }
    r.x[order - 1 - i] = 0.5 * (1 + z);
    r.w[order - 1 - i] = 1.0 / ((1 - z * z) * dp * dp);
  }
  return cache.emplace(order, std::move(r)).first->second;
}

int default_threads() {
  if (const char* s = std::getenv("ARBORIFY_THREADS")) {
    int n = std::atoi(s);
    if (n > 0) return n;
  }
  return 1;
}

namespace {

struct Compiled {
  std::vector<int> order;                        // variables in binding order
  std::vector<int> upper_slot;                   // per level
  std::vector<std::vector<TimeFactor>> by_level;  // factors first evaluable at each level
  std::vector<double> omega_bound;               // per level
  Complex constant = 1;
};

Complex eval_factor(const TimeFactor& f, const std::vector<double>& times) {
  auto get = [&](int s) { return s >= 0 ? times[s] : s == kFinalTime ? times.back() : 0.0; };
  const double x = f.omega * (get(f.a) - get(f.b));
  switch (f.kind) {
    case FactorKind::Exp:
      return f.scale * Complex(std::cos(x), std::sin(x));
    case FactorKind::Sin:
      return f.scale * std::sin(x);
    case FactorKind::Cos:
      return f.scale * std::cos(x);
  }
  return 0;
}

Compiled compile(const TimeProblem& p, double t) {
  Compiled c;
  if (static_cast<int>(p.upper.size()) != p.num_vars) throw std::invalid_argument("upper bounds size mismatch");
  std::vector<int> level(p.num_vars, -1);
  // bind a variable once its upper bound is bound
  for (int round = 0; round < p.num_vars; ++round) {
    for (int v = 0; v < p.num_vars; ++v) {
      if (level[v] >= 0) continue;
      const int u = p.upper[v];
      if (u == kFinalTime || (u >= 0 && level[u] >= 0)) {
        level[v] = static_cast<int>(c.order.size());
        c.order.push_back(v);
      }
    }
  }
  if (static_cast<int>(c.order.size()) != p.num_vars) throw std::invalid_argument("cyclic time constraints");
  for (int v : c.order) c.upper_slot.push_back(p.upper[v]);
  c.by_level.resize(p.num_vars);
  c.omega_bound.assign(p.num_vars, 0);
  c.constant = p.prefactor;
  // net exponential rate and sin/cos spread per level
  std::vector<double> net(p.num_vars, 0), spread(p.num_vars, 0);
  std::vector<double> fixed(p.num_vars + 1, 0);
  fixed.back() = t;
  for (const auto& f : p.factors) {
    const int la = f.a >= 0 ? level.at(f.a) : -1;
    const int lb = f.b >= 0 ? level.at(f.b) : -1;
    const int l = std::max(la, lb);
    if (l < 0) {
      c.constant *= eval_factor(f, fixed);
      continue;
    }
    for (auto [lv, sgn] : {std::pair{la, 1.0}, std::pair{lb, -1.0}}) {
      if (lv < 0) continue;
      if (f.kind == FactorKind::Exp) net[lv] += sgn * f.omega;
      else spread[lv] += std::abs(f.omega);
    }
    c.by_level[l].push_back(f);
  }
  // the integrand at a level oscillates with partial sums of the rates bound at or after it
  for (int l = 0; l < p.num_vars; ++l) {
    double pos = 0, neg = 0, sp = 0;
    for (int m = l; m < p.num_vars; ++m) {
      sp += spread[m];
      if (m == l) continue;
      if (net[m] > 0) pos += net[m];
      else neg += net[m];
    }
    c.omega_bound[l] = std::max(std::abs(net[l] + pos), std::abs(net[l] + neg)) + sp;
  }
  return c;
}

struct Runner {
  const Compiled& c;
  const GaussRule& rule;
  double max_phase;
  int max_panels;

  int panels(int level, double u) const {
    double n = std::ceil(c.omega_bound[level] * u / max_phase);
    return static_cast<int>(std::clamp(n, 1.0, static_cast<double>(max_panels)));
  }

  // points (value, weight) for a level given the upper bound
  void points(int level, double u, std::vector<std::pair<double, double>>& out) const {
    out.clear();
    const int np = panels(level, u);
    const double h = u / np;
    for (int k = 0; k < np; ++k)
      for (std::size_t i = 0; i < rule.x.size(); ++i) out.emplace_back(h * (k + rule.x[i]), h * rule.w[i]);
  }

  using Scratch = std::vector<std::vector<std::pair<double, double>>>;

  Complex rec(int level, std::vector<double>& times, Scratch& scratch) const {
    if (level == static_cast<int>(c.order.size())) return 1;
    const int v = c.order[level];
    const int us = c.upper_slot[level];
    const double u = us == kFinalTime ? times.back() : times[us];
    auto& pts = scratch[level];
    points(level, u, pts);
    Complex sum = 0;
    for (auto [x, w] : pts) {
      times[v] = x;
      Complex val = w;
      for (const auto& f : c.by_level[level]) val *= eval_factor(f, times);
      if (val != 0.0) sum += val * rec(level + 1, times, scratch);
    }
    return sum;
  }
};

}  // namespace

Complex integrate(const TimeProblem& p, double t, const QuadOptions& opt) {
  const Compiled c = compile(p, t);
  if (c.constant == 0.0) return 0;
  const GaussRule& rule = gauss_legendre(opt.order);
  Runner r{c, rule, opt.max_phase_per_panel * opt.order / 64.0, opt.max_panels};
  std::vector<double> times(p.num_vars + 1, 0);
  times.back() = t;
  if (c.order.empty()) return c.constant;

  // outermost level split across threads; partials summed in point order
  std::vector<std::pair<double, double>> pts;
  r.points(0, t, pts);
  std::vector<Complex> partial(pts.size(), 0);
  const int v0 = c.order[0];
  auto work = [&](std::size_t begin, std::size_t end) {
    std::vector<double> tm = times;
    Runner::Scratch scratch(c.order.size());
    for (std::size_t i = begin; i < end; ++i) {
      tm[v0] = pts[i].first;
      Complex val = pts[i].second;
      for (const auto& f : c.by_level[0]) val *= eval_factor(f, tm);
      if (val != 0.0) val *= r.rec(1, tm, scratch);
      partial[i] = val;
    }
  };
  const int nt = std::max(1, std::min<int>(opt.threads, static_cast<int>(pts.size())));
  if (nt == 1) {
    work(0, pts.size());
  } else {
    std::vector<std::thread> pool;
    const std::size_t chunk = (pts.size() + nt - 1) / nt;
    for (int k = 0; k < nt; ++k) {
      std::size_t b = k * chunk, e = std::min(pts.size(), b + chunk);
      if (b < e) pool.emplace_back(work, b, e);
    }
    for (auto& th : pool) th.join();
  }
  Complex sum = 0;
  for (const auto& x : partial) sum += x;
  return c.constant * sum;
}

}  // namespace arborify
