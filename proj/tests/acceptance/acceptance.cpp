// Acceptance suite: one line per criterion, exit status 1 if any fails.
#include "arborify/arborify.hpp"
#include "arborify/cancellation.hpp"
#include "arborify/evaluation.hpp"
#include "arborify/io.hpp"
#include "arborify/random.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>

using namespace arborify;

#ifndef GOLDEN_DIR
#define GOLDEN_DIR "tests/golden"
#endif

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string sci(double x) {
  std::ostringstream o;
  o.precision(2);
  o << std::scientific << x;
  return o.str();
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

bool within_cutoff(const Node& n, int N, bool is_root) {
  if (!is_root && n.freq.norm2() > static_cast<std::int64_t>(N) * N) return false;
  return std::all_of(n.children.begin(), n.children.end(), [&](const Node& c) { return within_cutoff(c, N, false); });
}

// ---- 1, 2: main identity ----

Outcome theorem(Model model) {
  Rng rng(42);
  const auto t0 = Clock::now();
  double worst = 0, worst_order = 0;
  int trivial = 0;
  for (int i = 0; i < 20; ++i) {
    EvalParams p;
    PairedTree t;
    if (model == Model::NLS) {
      p.d = 1 + i % 2;
      t = random_paired_tree(rng, model, p.d, 3, 3);
    } else {
      p.d = 3;
      p.N = 3;
      do t = random_paired_tree(rng, model, 3, 3, 3);
      while (!within_cutoff(t.tree.root, p.N, true));
    }
    const Complex a = eval_tree(t, p, model);
    const Complex b = eval_wordpoly(arborify::arborify(t, model), p);
    if (std::abs(a) == 0) ++trivial;
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
    EvalParams h = p;
    h.quad_order = 32;
    worst_order = std::max(worst_order, std::abs(eval_tree(t, h, model) - a));
  }
  const double secs = seconds_since(t0);
  const double budget = model == Model::NLS ? 60 : 120;
  Outcome o;
  o.ok = worst <= 1e-8 && secs <= budget && trivial == 0;
  o.detail = "20 trees, worst relative " + sci(worst) + ", order 32 vs 64 " + sci(worst_order) + ", " +
             std::to_string(static_cast<int>(std::ceil(secs))) + " s of " + std::to_string(static_cast<int>(budget));
  if (trivial) o.detail += ", " + std::to_string(trivial) + " zero-valued trees";
  return o;
}

// ---- 3: coherence ----

std::size_t brute_extensions(const DecoratedTree& t) {
  std::vector<int> parent;
  std::function<void(const Node&, int)> walk = [&](const Node& n, int par) {
    const int me = static_cast<int>(parent.size());
    parent.push_back(par);
    for (const auto& c : n.children)
      if (!c.is_leaf()) walk(c, me);
  };
  walk(t.root, -1);
  std::vector<int> perm(parent.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::size_t count = 0;
  do {
    std::vector<std::size_t> at(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) at[perm[i]] = i;
    bool ok = true;
    for (std::size_t v = 1; v < parent.size() && ok; ++v) ok = at[v] < at[parent[v]];
    count += ok;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return count;
}

Outcome coherence() {
  Rng rng(3);
  int same = 0, counted = 0;
  for (int i = 0; i < 200; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    const PairedTree t = random_distinct_tree(rng, m, 8);
    const WordPoly a = arborify::arborify(t, m);
    same += a == arborify_cp(t, m);
    counted += a.size() == brute_extensions(t.tree);
  }
  return {same == 200 && counted == 200, "recursive == coproduct on " + std::to_string(same) +
                                             "/200, word count == extensions on " + std::to_string(counted) + "/200"};
}

// ---- 4: shuffle algebra ----

std::int64_t binom(int n, int k) {
  std::int64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<TagWord> interleave(const TagWord& u, const TagWord& v) {
  if (u.empty()) return {v};
  if (v.empty()) return {u};
  std::vector<TagWord> out;
  for (auto tail : interleave(TagWord(u.begin() + 1, u.end()), v)) {
    tail.insert(tail.begin(), u[0]);
    out.push_back(tail);
  }
  for (auto tail : interleave(u, TagWord(v.begin() + 1, v.end()))) {
    tail.insert(tail.begin(), v[0]);
    out.push_back(tail);
  }
  return out;
}

Outcome shuffle_laws() {
  Rng rng(4);
  int comm = 0, assoc = 0, count = 0;
  for (int i = 0; i < 500; ++i) {
    const Model m = i % 2 ? Model::Wave : Model::NLS;
    const Word u = random_word(rng, m, 4, "u"), v = random_word(rng, m, 4, "v"), w = random_word(rng, m, 4, "w");
    const WordPoly uv = shuffle(u, v);
    comm += uv == shuffle(v, u);
    assoc += shuffle(uv, single(w)) == shuffle(single(u), shuffle(v, w));
    TagWord tu, tv;
    for (const auto& l : u.letters) tu.push_back(l.tag);
    for (const auto& l : v.letters) tv.push_back(l.tag);
    const auto oracle = interleave(tu, tv);
    TagPoly expect;
    for (const auto& x : oracle) expect[x] += ExactCoeff::one();
    count += static_cast<std::int64_t>(oracle.size()) ==
                 binom(static_cast<int>(tu.size() + tv.size()), static_cast<int>(tu.size())) &&
             uv.size() == oracle.size() && tag_projection(uv) == expect;
  }
  return {comm == 500 && assoc == 500 && count == 500,
          "commutative " + std::to_string(comm) + "/500, associative " + std::to_string(assoc) +
              "/500, binomial count " + std::to_string(count) + "/500"};
}

// ---- 5: Wick ----

std::int64_t matchings(int n) {
  if (n == 0) return 1;
  return (n - 1) * matchings(n - 2);
}

// independent moment estimate of prod eta^{conj} with our own sampler
double own_moment_z(const std::vector<LeafData>& leaves, std::uint64_t seed, int samples, Complex expected) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, std::sqrt(0.5));
  std::map<Frequency, Complex> eta;
  Complex sum = 0;
  double sum2 = 0;
  for (int s = 0; s < samples; ++s) {
    for (const auto& l : leaves) eta[l.freq] = 0;
    for (auto& [k, e] : eta) {
      const double re = g(rng);
      e = Complex(re, g(rng));
    }
    Complex x = 1;
    for (const auto& l : leaves) x *= l.conj ? std::conj(eta[l.freq]) : eta[l.freq];
    sum += x;
    sum2 += std::norm(x);
  }
  const Complex mean = sum / static_cast<double>(samples);
  const double var = (sum2 - samples * std::norm(mean)) / (samples - 1);
  return std::abs(mean - expected) / std::sqrt(var / samples);
}

Node leaf(const Frequency& k, int conj) {
  Node n;
  n.decor = {EdgeKind::T1, conj, false};
  n.freq = k;
  return n;
}

Outcome wick() {
  bool counts = true;
  for (int n = 1; n <= 5; ++n) {
    std::vector<LeafData> ls;
    for (int i = 0; i < 2 * n; ++i) ls.push_back({Frequency{i}, 0});
    const auto lib = static_cast<std::int64_t>(wick_pairings(ls, Model::NLS, false).size());
    counts = counts && lib == matchings(2 * n) && lib == double_factorial_odd(n);
  }
  Node two;
  two.children = {leaf({1}, 0), leaf({1}, 1)};
  Node in;
  in.decor = {EdgeKind::T2, 0, false};
  in.children = {leaf({1}, 0), leaf({2}, 0), leaf({2}, 1)};
  Node four;
  four.children = {leaf({1}, 1), in};
  EvalParams p;
  p.seed = 42;
  p.L = 2;
  double zmax = 0, own = 0;
  for (const Node* r : {&two, &four}) {
    const DecoratedTree t = canonicalize(*r);
    zmax = std::max(zmax, mc_wick_check(t, p, 10000).z);
    // E prod eta = number of valid pairings, each contributing E|eta|^2 = 1
    const auto leaves = t.leaf_data();
    own = std::max(own, own_moment_z(leaves, 7, 10000, static_cast<double>(wick_pairings(leaves, Model::NLS).size())));
  }
  return {counts && zmax <= 3 && own <= 3,
          std::string("(2n-1)!! counts ") + (counts ? "match" : "differ") + " for n <= 5, MC z " + sci(zmax) +
              ", independent sampler z " + sci(own)};
}

// ---- 6: kernels ----

Outcome kernels() {
  Rng rng(6);
  std::uniform_real_distribution<double> u(0, 1);
  double worst = 0, own = 0;
  const Complex I(0, 1);
  for (int i = 0; i < 100; ++i) {
    const Frequency k = random_frequency(rng, 1 + i % 3, 5);
    const double t = 2 * u(rng), s = t * u(rng);
    worst = std::max(worst, nls_kernel_split_check(k, s, t));
    const double k2 = static_cast<double>(k.norm2());
    own = std::max(own, std::abs(std::exp(I * (s - t) * k2) - std::exp(-I * t * k2) * std::conj(std::exp(-I * s * k2))));
  }
  const Frequency n{1, 2, 0};
  const double a = std::sqrt(1.0 + n.norm2()), t = 0.7, tp = 0.2;
  auto cov = [&](double x) { return std::cos((x - tp) * a) / (a * a); };
  auto err = [&](double h) { return std::abs((cov(t + h) - cov(t - h)) / (2 * h) + std::sin((t - tp) * a) / a); };
  const double ratio = err(1e-2) / err(5e-3);
  const double lib_ratio = wave_cov_fd_error(n, t, tp, 1e-2) / wave_cov_fd_error(n, t, tp, 5e-3);
  const bool agree = std::abs(wave_cov(n, t, tp) - cov(t)) <= 1e-15;
  return {worst <= 1e-13 && own <= 1e-13 && ratio >= 3.5 && ratio <= 4.5 && lib_ratio >= 3.5 && lib_ratio <= 4.5 && agree,
          "split residual " + sci(worst) + " over 100 (k,s,t), FD ratio " + sci(ratio) + " (library " + sci(lib_ratio) + ")"};
}

// ---- 7, 8: cancellations ----

Outcome family1() {
  EvalParams p;
  p.L = 10;
  const auto f = family1_freqs(Frequency{3}, Frequency{-5}, Frequency{7}, Frequency{7});
  const auto r = cancel_family1(f, p);
  const auto trees = family1_trees(f);
  p.eta_mode = EtaMode::Ones;
  const Complex direct = eval_tree(trees.t5, p, Model::NLS) + eval_tree(trees.t6, p, Model::NLS);
  const bool id = family1_identity(family1_freqs(Frequency{3}, Frequency{-5}, Frequency{7}, Frequency{9})).empty();
  return {r.exact_case && std::abs(r.sum) <= 1e-9 && std::abs(direct) <= 1e-9 && std::abs(r.pi_t5) > 1e-3 && id,
          "|Pi(T5+T6)| = " + sci(std::abs(direct)) + " with |Pi T5| = " + sci(std::abs(r.pi_t5)) +
              ", word identity " + (id ? "exact" : "broken")};
}

bool ordered(const TagWord& w, const TagWord& pat) {
  std::size_t j = 0;
  for (const auto& x : w)
    if (j < pat.size() && x == pat[j]) ++j;
  return j == pat.size();
}

Outcome families23() {
  const TagWord abc{"a1", "a2", "a3"};
  const auto f = family2_freqs(Frequency{1}, Frequency{3}, Frequency{9}, Frequency{27}, Frequency{81});
  int bad = 0;
  std::size_t terms = 0;
  for (int u : {0, 1, 2}) {
    const auto r = cancel_family2(f, u);
    terms += r.residual.size();
    for (const auto& [w, c] : r.residual) bad += ordered(w, abc);
    bad += !r.ordered_opposite;
  }
  const auto r3 = cancel_family3();
  for (const auto& [w, c] : r3.residual) bad += ordered(w, abc);
  const bool single = r3.residual == TagPoly{{{"a2", "a1", "a3", "tail"}, ExactCoeff(0, -1)}};
  return {bad == 0 && single && r3.letters_match,
          "family 2: " + std::to_string(terms) + " residual monomials over 0-2 context letters, " +
              std::to_string(bad) + " ordered; family 3 residual " + (single ? "-i a2 a1 a3 tail" : "unexpected")};
}

// ---- 9: integration by parts ----

Outcome ibp_check() {
  EvalParams p;
  p.d = 3;
  p.N = 1000;
  std::vector<Word> words{wave_T1_word({1, 0, 0}, {0, 1, -1}, {1, 1, 0})};
  Rng rng(9);
  while (words.size() < 6) {
    const WordPoly wp = arborify::arborify(random_paired_tree(rng, Model::Wave, 3, 2, 3), Model::Wave);
    for (const auto& [w, c] : wp) {
      if (words.size() == 6 || w.letters.size() < 2) continue;
      try {
        ibp(w, 0);
        words.push_back(w);
      } catch (const std::exception&) {
      }
      break;
    }
  }
  double worst = 0;
  for (const auto& w : words) {
    const Complex a = eval_word(w, p), b = eval_wordpoly(ibp(w, 0).total(), p);
    worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
  }
  return {worst <= 1e-8, "6 words, worst relative " + sci(worst)};
}

// ---- 10: c_N ----

double own_gamma(const Frequency& k, int N) {
  double s = 0;
  const auto jap2 = [](std::int64_t x, std::int64_t y, std::int64_t z) { return 1.0 + x * x + y * y + z * z; };
  for (int a = -N; a <= N; ++a)
    for (int b = -N; b <= N; ++b)
      for (int c = -N; c <= N; ++c)
        for (int d = -N; d <= N; ++d)
          for (int e = -N; e <= N; ++e)
            for (int f = -N; f <= N; ++f) {
              const std::int64_t x = -(a + d + k.c[0]), y = -(b + e + k.c[1]), z = -(c + f + k.c[2]);
              if (a * a + b * b + c * c > N * N || d * d + e * e + f * f > N * N || x * x + y * y + z * z > N * N)
                continue;
              s += 1.0 / (jap2(a, b, c) * jap2(d, e, f) * jap2(x, y, z));
            }
  return s;
}

Outcome frak_c() {
  const int n = 20000;
  double s = 0;
  for (int i = 0; i <= n; ++i) {
    const double x = static_cast<double>(i) / n;
    s += (i == 0 || i == n ? 1 : (i % 2 ? 4 : 2)) * std::pow(std::cos(x), 3) * std::sin(1 - x);
  }
  const double c0 = -2 * std::cos(1.0) * s / (3.0 * n);
  const FrakC a = frak_c_N(0, 1.0, EvalParams{});
  const FrakC b = frak_c_N(1, 1.0, EvalParams{});
  const double d0 = std::max(std::abs(a.difference), std::abs(a.pipeline - c0));
  const double d1 = std::abs(b.difference);

  EvalParams p;
  p.d = 3;
  double fact = 0, gam = 0;
  for (int N = 0; N <= 2; ++N) {
    p.N = N;
    const auto B = ball(N);
    for (const auto& k3 : B) {
      gam = std::max(gam, std::abs(gamma_N(k3, N) - own_gamma(k3, N)));
      Complex merged = 0;
      for (const auto& k1 : B)
        for (const auto& k2 : B) {
          if ((k1 + k2 + k3).norm2() > static_cast<std::int64_t>(N) * N) continue;
          for (const auto& [w, c] : ibp(wave_T1_word(k1, k2, k3), 0).upper_boundary)
            merged += coeff_value(c, 1) * eval_word(w, p);
        }
      const Complex want = own_gamma(k3, N) * eval_word(wave_W2(k3), p);
      fact = std::max(fact, std::abs(merged - want) / std::max(1.0, std::abs(want)));
    }
  }
  const bool g0 = gamma_N(Frequency{0, 0, 0}, 0) == 1.0;
  return {d0 <= 1e-7 && d1 <= 1e-7 && g0 && fact <= 1e-12 && gam <= 1e-12,
          "N=0: " + sci(a.pipeline) + " vs Simpson " + sci(c0) + " (diff " + sci(d0) + "), N=1 diff " + sci(d1) +
              ", Gamma_0(0) = 1, factorization residual " + sci(fact) + " for N <= 2"};
}

// ---- 11: IO ----

Outcome golden() {
  int files = 0, bytes_ok = 0, json_ok = 0;
  for (const auto& e : std::filesystem::directory_iterator(GOLDEN_DIR)) {
    if (e.path().extension() != ".arb") continue;
    ++files;
    std::ifstream in(e.path(), std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    const std::string text = ss.str();
    try {
      const Document d = parse_document(text);
      if (d.trees) {
        bytes_ok += print_tree(*d.trees) == text;
        json_ok += tree_from_json(nlohmann::json::parse(to_json(*d.trees).dump())) == *d.trees;
      } else if (d.words) {
        bytes_ok += print_word(*d.words) == text;
        json_ok += word_from_json(nlohmann::json::parse(to_json(*d.words).dump())) == *d.words;
      }
    } catch (const std::exception& ex) {
      std::cerr << e.path() << ": " << ex.what() << "\n";
    }
  }
  return {files == 50 && bytes_ok == 50 && json_ok == 50, std::to_string(bytes_ok) + "/" + std::to_string(files) +
                                                              " byte-exact, " + std::to_string(json_ok) +
                                                              " JSON round trips"};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"theorem nls", [] { return theorem(Model::NLS); }},
      {"theorem wave", [] { return theorem(Model::Wave); }},
      {"arborification coherence", coherence},
      {"shuffle algebra", shuffle_laws},
      {"wick", wick},
      {"kernels", kernels},
      {"cancellation family 1", family1},
      {"cancellation families 2-3", families23},
      {"wave integration by parts", ibp_check},
      {"c_N", frak_c},
      {"dsl and json round trip", golden},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.ok;
    std::cout << "criterion " << i + 1 << " (" << criteria[i].first << "): " << (o.ok ? "PASS" : "FAIL") << "  "
              << o.detail << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : "all criteria passed") << std::endl;
  return failed ? 1 : 0;
}
