#include "arborify/cancellation.hpp"

#include "arborify/arborify.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>

namespace arborify {

namespace {

Node leaf(const Frequency& k, int conj, int id) {
  Node n;
  n.decor = {EdgeKind::T1, conj, false};
  n.freq = k;
  n.leaf_id = id;
  return n;
}

Node inner(int conj, const std::string& tag, std::vector<Node> kids) {
  Node n;
  n.decor = {EdgeKind::T2, conj, false};
  n.tag = tag;
  n.children = std::move(kids);
  return n;
}

Node root(const std::string& tag, std::vector<Node> kids) {
  Node n;
  n.tag = tag;
  n.children = std::move(kids);
  return n;
}

PairedTree make(Node r, Pairing p) {
  try {
    DecoratedTree t = canonicalize(std::move(r), &p);
    return {std::move(t), std::move(p)};
  } catch (const TreeError& e) {
    throw CancellationError(e.what());
  }
}

void set_class(Pairing& p, int a, int b, int cls) {
  auto key = std::minmax(a, b);
  p.class1.erase({key.first, key.second});
  p.class2.erase({key.first, key.second});
  p.add(a, b, cls);
}

const ExactCoeff kMinusOne{-1};

std::vector<std::pair<int, bool>> shape(const Letter& l) {
  std::vector<std::pair<int, bool>> s;
  for (const auto& x : l.slots) s.push_back({x.conj, x.hat});
  std::sort(s.begin(), s.end());
  return s;
}

void fill_residual(ResidualReport& r, const TagWord& pattern) {
  r.residual = r.tags1;
  for (const auto& [w, c] : r.tags2) {
    auto& slot = r.residual[w];
    slot += c;
    if (slot.is_zero()) r.residual.erase(w);
  }
  r.forbidden = 0;
  for (const auto& [w, c] : r.residual)
    if (has_ordered(w, pattern)) ++r.forbidden;
  bool any = false, opposite = true;
  std::set<TagWord> ordered;
  for (const auto* side : {&r.tags1, &r.tags2})
    for (const auto& [w, c] : *side)
      if (has_ordered(w, pattern)) ordered.insert(w);
  for (const auto& w : ordered) {
    auto a = r.tags1.find(w);
    auto b = r.tags2.find(w);
    if (a == r.tags1.end() || b == r.tags2.end() || !(a->second + b->second).is_zero()) opposite = false;
    any = true;
  }
  r.ordered_opposite = any && opposite;
}

TagPoly drop_tag(const TagPoly& p, const std::string& tag) {
  TagPoly out;
  for (const auto& [w, c] : p) {
    TagWord v;
    for (const auto& x : w)
      if (x != tag) v.push_back(x);
    out[v] += c;
  }
  return out;
}

}  // namespace

// ---- family 1 ----

Family1Freqs family1_freqs(const Frequency& k1, const Frequency& k2, const Frequency& k4,
                           const Frequency& k5) {
  return {k1, k2, k4, k5, k1 + k5 - k4};
}

Family1Trees family1_trees(const Family1Freqs& f) {
  if (f.l1 != f.k1 + f.k5 - f.k4)
    throw CancellationError("incompatible frequencies: l1 must equal k1 + k5 - k4");
  const bool tie = f.k4 == f.k5;
  Pairing p5;
  p5.add(1, 4, 2);
  if (tie) p5.add(2, 3, 2);
  Node r5 = root("", {leaf(f.k2, 0, 0), leaf(f.k1, 0, 1),
                      inner(1, "", {leaf(f.k4, 0, 2), leaf(f.k5, 1, 3), leaf(f.k1, 1, 4)})});
  Pairing p6;
  p6.add(1, 3, 2);
  if (tie) p6.add(2, 4, 2);
  Node r6 = root("", {leaf(f.k2, 0, 0), leaf(f.l1, 1, 1),
                      inner(0, "", {leaf(f.k4, 0, 2), leaf(f.l1, 0, 3), leaf(f.k5, 1, 4)})});
  return {make(std::move(r5), std::move(p5)), make(std::move(r6), std::move(p6))};
}

Family1Report cancel_family1(const Family1Freqs& f, const EvalParams& p) {
  Family1Trees t = family1_trees(f);
  EvalParams q = p;
  q.eta_mode = EtaMode::Ones;
  Family1Report r;
  r.exact_case = f.k1 == f.l1;
  r.pi_t5 = eval_tree(t.t5, q, Model::NLS);
  r.pi_t6 = eval_tree(t.t6, q, Model::NLS);
  r.sum = r.pi_t5 + r.pi_t6;
  return r;
}

WordPoly family1_identity(const Family1Freqs& f) {
  if (f.k1 == f.l1) throw CancellationError("family 1 identity needs l1 != k1");
  Family1Trees t = family1_trees(f);
  WordPoly a5 = arborify::arborify(t.t5, Model::NLS);
  WordPoly a6 = arborify::arborify(t.t6, Model::NLS);
  return a5 + swap_green(a6, f.k1, f.l1);
}

std::vector<SweepPoint> family1_sweep(double kappa1, double kappa2, double kappa4,
                                      const std::vector<double>& Ls, EvalParams p) {
  std::vector<SweepPoint> out;
  p.d = 1;
  for (double L : Ls) {
    auto r = [&](double x) { return static_cast<std::int64_t>(std::llround(x * L)); };
    const Frequency k1{r(kappa1)}, k2{r(kappa2)}, k4{r(kappa4)};
    const Frequency k5 = k4 + Frequency{1};
    p.L = L;
    Family1Report rep = cancel_family1(family1_freqs(k1, k2, k4, k5), p);
    out.push_back({L, 1.0 / L, std::abs(rep.sum)});
  }
  return out;
}

// ---- families 2 and 3 ----

bool has_ordered(const TagWord& w, const TagWord& pattern) {
  std::size_t j = 0;
  for (const auto& x : w)
    if (j < pattern.size() && x == pattern[j]) ++j;
  return j == pattern.size();
}

Family2Freqs family2_freqs(const Frequency& k1, const Frequency& k2, const Frequency& k3,
                           const Frequency& r1, const Frequency& r2) {
  return {k1, k2, k3, r1, r2, k1, k2, k3 + r2 - r1};
}

namespace {

// Chain u1 (deepest) .. un; unpaired leaves with large distinct frequencies.
Node u_branch(int n, std::size_t d, int& next_id) {
  auto f = [&](std::int64_t v) {
    Frequency x = Frequency::zero(d);
    x.c[0] = v;
    return x;
  };
  Node cur;
  for (int i = 1; i <= n; ++i) {
    std::vector<Node> kids;
    kids.push_back(leaf(f(1000 + 10 * i), 0, next_id++));
    kids.push_back(leaf(f(1001 + 10 * i), 0, next_id++));
    if (i == 1) kids.push_back(leaf(f(1002 + 10 * i), 1, next_id++));
    else kids.push_back(std::move(cur));
    cur = inner(0, "u" + std::to_string(i), std::move(kids));
  }
  return cur;
}

}  // namespace

Family2Trees family2_trees(const Family2Freqs& f, int u_letters) {
  const Frequency lhs = -f.k1 + f.k2 + f.k3 + f.r2 - f.r1;
  const Frequency rhs = -f.h1 + f.h2 + f.h3;
  if (lhs != rhs) throw CancellationError("condition -k1+k2+k3+r2-r1 = -h1+h2+h3 violated");
  const std::size_t d = f.k1.dim();

  Pairing p1;
  p1.add(1, 6, 2);  // k1
  p1.add(0, 7, 2);  // k2
  p1.add(4, 5, 2);  // k3
  std::vector<Node> kids1;
  kids1.push_back(inner(0, "a2", {leaf(f.k2, 0, 0), leaf(f.k1, 1, 1),
                                  inner(0, "a1", {leaf(f.r1, 1, 2), leaf(f.r2, 0, 3), leaf(f.k3, 0, 4)})}));
  kids1.push_back(inner(1, "a3", {leaf(f.k3, 1, 5), leaf(f.k1, 0, 6), leaf(f.k2, 1, 7)}));

  Pairing p2;
  p2.add(0, 3, 2);  // h1
  p2.add(1, 4, 2);  // h2
  p2.add(2, 7, 2);  // h3
  std::vector<Node> kids2;
  kids2.push_back(inner(0, "b1", {leaf(f.h1, 1, 0), leaf(f.h2, 0, 1), leaf(f.h3, 0, 2)}));
  kids2.push_back(inner(1, "b3", {leaf(f.h1, 0, 3), leaf(f.h2, 1, 4),
                                  inner(1, "b2", {leaf(f.r2, 0, 5), leaf(f.r1, 1, 6), leaf(f.h3, 1, 7)})}));
  if (u_letters > 0) {
    int id1 = 8, id2 = 8;
    kids1.push_back(u_branch(u_letters, d, id1));
    kids2.push_back(u_branch(u_letters, d, id2));
  }
  return {make(root("v", std::move(kids1)), std::move(p1)), make(root("v", std::move(kids2)), std::move(p2))};
}

ResidualReport cancel_family2(const Family2Freqs& f, int u_letters, bool keep_root) {
  Family2Trees t = family2_trees(f, u_letters);
  ResidualReport r;
  r.words1 = arborify::arborify(t.t1, Model::NLS);
  r.words2 = arborify::arborify(t.t2, Model::NLS);
  r.tags1 = tag_projection(r.words1);
  r.tags2 = tag_projection(r.words2, {{"b1", "a2"}, {"b2", "a1"}, {"b3", "a3"}});
  if (!keep_root) {
    r.tags1 = drop_tag(r.tags1, "v");
    r.tags2 = drop_tag(r.tags2, "v");
  }
  fill_residual(r, {"a1", "a2", "a3"});
  return r;
}

Family3Freqs family3_freqs(const Frequency& k1, const Frequency& k2, const Frequency& r1,
                           const Frequency& r2, const Frequency& r3) {
  return {k1, k2, r1, r2, r3, k2 + r1 - r2};
}

Family3Trees family3_trees(const Family3Freqs& f) {
  if (f.h2 != f.k2 + f.r1 - f.r2) throw CancellationError("condition h2 = k2 + r1 - r2 violated");
  Pairing p1;
  p1.add(1, 5, 2);  // k1
  p1.add(0, 3, 2);  // k2
  Node a1 = inner(1, "a1", {leaf(f.r1, 0, 4), leaf(f.k1, 1, 5), leaf(f.r2, 1, 6)});
  Node a2 = inner(0, "a2", {leaf(f.r3, 0, 2), leaf(f.k2, 0, 3), std::move(a1)});
  Node a3 = inner(0, "a3", {leaf(f.k2, 1, 0), leaf(f.k1, 0, 1), std::move(a2)});

  Pairing p2;
  p2.add(0, 6, 2);  // h2
  p2.add(3, 4, 2);  // k1
  Node b2 = inner(0, "b2", {leaf(f.r2, 1, 1), leaf(f.r1, 0, 2), leaf(f.k1, 0, 3)});
  Node b1 = inner(0, "b1", {leaf(f.k1, 1, 4), leaf(f.r3, 0, 5), leaf(f.h2, 0, 6)});
  Node b3 = inner(0, "b3", {leaf(f.h2, 1, 0), std::move(b2), std::move(b1)});

  return {make(root("tail", {std::move(a3)}), std::move(p1)), make(root("tail", {std::move(b3)}), std::move(p2)),
          f.k1 + f.r1 - f.r2};
}

ResidualReport cancel_family3(const Family3Freqs& f) {
  Family3Trees t = family3_trees(f);
  if (t.l6 == f.k1) throw CancellationError("family 3 needs r1 != r2");
  ResidualReport r;
  r.words1 = arborify::arborify(t.t1, Model::NLS);
  r.words2 = swap_green(arborify::arborify(t.t2, Model::NLS), f.k1, t.l6);
  const std::map<std::string, std::string> rename{{"b1", "a2"}, {"b2", "a1"}, {"b3", "a3"}};
  std::map<std::string, std::set<std::vector<std::pair<int, bool>>>> shapes;
  for (const auto& [w, c] : r.words1)
    for (const auto& l : w.letters) shapes[l.tag].insert(shape(l));
  r.letters_match = true;
  for (const auto& [w, c] : r.words2)
    for (const auto& l : w.letters) {
      auto it = rename.find(l.tag);
      const std::string tag = it == rename.end() ? l.tag : it->second;
      auto s = shapes.find(tag);
      if (s == shapes.end() || !s->second.count(shape(l)) || s->second.size() != 1) r.letters_match = false;
    }
  r.tags1 = tag_projection(r.words1);
  r.tags2 = tag_projection(r.words2, rename);
  fill_residual(r, {"a1", "a2", "a3"});
  return r;
}

ResidualReport cancel_family3() {
  return cancel_family3(family3_freqs({1}, {3}, {10}, {30}, {100}));
}

// ---- wave integration by parts ----

WordPoly IbpResult::total() const { return relocated + upper_boundary + lower_boundary; }

namespace {

// Merges letters i and i + 1; slot ids stay put.
Word merge_letters(Word w, std::size_t i, bool keep_first_time) {
  Letter& a = w.letters[i];
  Letter& b = w.letters[i + 1];
  Letter m;
  m.slots = a.slots;
  m.slots.insert(m.slots.end(), b.slots.begin(), b.slots.end());
  m.green_node = keep_first_time ? a.green_node : b.green_node;
  if (a.tag.empty() || b.tag.empty()) m.tag = a.tag + b.tag;
  else m.tag = a.tag + "_" + b.tag;
  w.letters[i] = std::move(m);
  w.letters.erase(w.letters.begin() + static_cast<long>(i) + 1);
  return w;
}

Slot& slot_at(Word& w, int id) {
  std::size_t l = w.letter_of(id);
  return w.letters[l].slots[id - static_cast<int>(w.slot_offset(l))];
}

}  // namespace

IbpResult ibp(const Word& w, std::size_t pos) {
  if (w.model != Model::Wave) throw CancellationError("ibp applies to wave words");
  if (pos + 1 >= w.letters.size()) throw CancellationError("ibp position must precede the last letter");
  if (w.letters[pos].green_node) throw CancellationError("letter at ibp position is a green node");
  const int begin = static_cast<int>(w.slot_offset(pos));
  const int end = begin + static_cast<int>(w.letters[pos].slots.size());
  auto inside = [&](int id) { return id >= begin && id < end; };

  int green = -1, green_partner = -1;
  for (int id = begin; id < end; ++id) {
    if (!w.slot(id).hat) continue;
    auto pr = w.pairing.partner(id);
    if (!pr || pr->cls != 1) throw CancellationError("green slot at ibp position is not in a class-1 pair");
    if (green >= 0) throw CancellationError("more than one green slot at ibp position");
    green = id;
    green_partner = pr->other;
  }
  if (green < 0) throw CancellationError("no green slot at ibp position");
  if (w.letter_of(green_partner) <= pos) throw CancellationError("green pair points backward");
  for (auto [a, b] : w.pairing.class1) {
    if (a == green || b == green) continue;
    if ((inside(a) && !inside(b)) || (inside(b) && !inside(a)))
      throw CancellationError("another green pair depends on the ibp time");
  }

  Word base = w;
  slot_at(base, green).hat = false;
  set_class(base.pairing, green, green_partner, 2);

  IbpResult r;
  for (int id = begin; id < end; ++id) {
    if (id == green) continue;
    auto pr = w.pairing.partner(id);
    if (!pr || inside(pr->other)) continue;
    Word m = base;
    slot_at(m, id).hat = true;
    set_class(m.pairing, id, pr->other, 1);
    add_term(r.relocated, canonical_word(std::move(m)), kMinusOne);
  }
  add_term(r.upper_boundary, canonical_word(merge_letters(base, pos, false)), ExactCoeff::one());
  if (pos == 0) {
    Word g = base;
    g.letters[0].green_node = true;
    add_term(r.lower_boundary, canonical_word(std::move(g)), kMinusOne);
  } else {
    add_term(r.lower_boundary, canonical_word(merge_letters(base, pos - 1, true)), kMinusOne);
  }
  return r;
}

PairedTree wave_T1(const Frequency& k1, const Frequency& k2, const Frequency& k3) {
  Pairing p;
  p.add(0, 5, 2);
  p.add(1, 6, 2);
  p.add(2, 7, 2);
  Node l2 = inner(0, "l2", {leaf(k1, 0, 0), leaf(k2, 0, 1), leaf(k3, 0, 2)});
  Node l1 = inner(0, "l1", {leaf(-k1, 0, 5), leaf(-k2, 0, 6), std::move(l2)});
  return make(root("r", {leaf(-k3, 0, 7), std::move(l1)}), std::move(p));
}

PairedTree wave_T2(const Frequency& k1, const Frequency& k2, const Frequency& k3) {
  Pairing p;
  p.add(0, 3, 2);
  p.add(1, 4, 2);
  p.add(2, 5, 2);
  Node a = inner(0, "p", {leaf(k1, 0, 0), leaf(k2, 0, 1), leaf(k3, 0, 2)});
  Node b = inner(0, "m", {leaf(-k1, 0, 3), leaf(-k2, 0, 4), leaf(-k3, 0, 5)});
  return make(root("r", {std::move(a), std::move(b)}), std::move(p));
}

Word wave_W2(const Frequency& k3) {
  Word w;
  w.model = Model::Wave;
  Letter a, b;
  a.slots = {Slot{0, false, k3}, Slot{0, true, -k3}};
  b.slots = {Slot{0, false, -k3}, Slot{0, false, k3}};
  w.letters = {a, b};
  w.pairing.add(0, 2, 2);
  w.pairing.add(1, 3, 1);
  return canonical_word(std::move(w));
}

Word wave_T1_word(const Frequency& k1, const Frequency& k2, const Frequency& k3) {
  WordPoly p = arborify::arborify(wave_T1(k1, k2, k3), Model::Wave);
  if (p.size() != 1) throw CancellationError("chain tree must give a single word");
  return p.begin()->first;
}

std::vector<Frequency> ball(int N, std::size_t d) {
  std::vector<Frequency> out;
  Frequency f = Frequency::zero(d);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == d) {
      if (f.norm2() <= static_cast<std::int64_t>(N) * N) out.push_back(f);
      return;
    }
    for (int v = -N; v <= N; ++v) {
      f.c[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

double gamma_N(const Frequency& k, int N) {
  const auto B = ball(N, k.dim());
  const std::int64_t n2 = static_cast<std::int64_t>(N) * N;
  double s = 0;
  for (const auto& k1 : B)
    for (const auto& k2 : B) {
      const Frequency l2 = -(k1 + k2 + k);
      if (l2.norm2() > n2) continue;
      const double a = japanese(l2), b = japanese(k1), c = japanese(k2);
      s += 1.0 / (a * a * b * b * c * c);
    }
  return s;
}

double frak_c_closed_form(int N, double t, int order) {
  const auto B = ball(N, 3);
  const std::int64_t n2 = static_cast<std::int64_t>(N) * N;
  const GaussRule& g = gauss_legendre(order);
  const int panels = 8;
  double total = 0;
  for (const auto& k1 : B)
    for (const auto& k2 : B)
      for (const auto& k3 : B) {
        const Frequency l2 = -(k1 + k2 + k3);
        if (l2.norm2() > n2) continue;
        const double a = japanese(l2), b = japanese(k1), c = japanese(k2), e = japanese(k3);
        double integral = 0;
        for (int q = 0; q < panels; ++q)
          for (std::size_t i = 0; i < g.x.size(); ++i) {
            const double s = t * (q + g.x[i]) / panels;
            integral += g.w[i] * t / panels * std::cos(s * a) * std::cos(s * b) * std::cos(s * c) *
                        std::sin((t - s) * e);
          }
        total += integral / (a * a * b * b * c * c * e) * std::cos(t * e) / (e * e);
      }
  return -2 * total;
}

FrakC frak_c_N(int N, double t, const EvalParams& base) {
  EvalParams p = base;
  p.d = 3;
  p.N = N;
  p.t = t;
  const auto B = ball(N, 3);
  const std::int64_t n2 = static_cast<std::int64_t>(N) * N;
  FrakC r;
  auto val = [&](const Word& w) { return eval_word(w, p).real(); };
  for (const auto& k1 : B)
    for (const auto& k2 : B)
      for (const auto& k3 : B) {
        if ((k1 + k2 + k3).norm2() > n2) continue;
        const Word w1 = wave_T1_word(k1, k2, k3);
        r.t1_sum += val(w1);
        const IbpResult parts = ibp(w1, 0);
        for (const auto& [w, c] : parts.relocated) {
          const double v = -coeff_value(c, 1).real() * val(w);
          // green slot sits in the first letter; its partner decides the class
          int green = -1;
          for (std::size_t i = 0; i < w.letters[0].slots.size(); ++i)
            if (w.letters[0].slots[i].hat) green = static_cast<int>(i);
          const std::size_t at = w.letter_of(w.pairing.partner(green)->other);
          if (at == 2) r.relocated[2] += v;
          else r.relocated[0] += v / 2, r.relocated[1] += v / 2;
        }
        for (const auto& [w, c] : parts.upper_boundary) r.upper += coeff_value(c, 1).real() * val(w);
        for (const auto& [w, c] : parts.lower_boundary) r.lower += -coeff_value(c, 1).real() * val(w);
        const WordPoly a2 = arborify::arborify(wave_T2(k1, k2, k3), Model::Wave);
        int j = 0;
        for (const auto& [w, c] : a2) {
          const double v = coeff_value(c, 1).real() * val(w);
          r.t2_sum += v;
          if (a2.size() == 1) r.t2_orders[0] += v / 2, r.t2_orders[1] += v / 2;
          else r.t2_orders[j++] += v;
        }
      }
  for (const auto& k3 : B) r.gamma_term += gamma_N(k3, N) * val(wave_W2(k3));
  r.pipeline = 6 * r.t1_sum - 2 * r.gamma_term + r.t2_sum;
  r.closed_form = frak_c_closed_form(N, t);
  r.difference = r.pipeline - r.closed_form;
  r.sixth_lhs = r.t1_sum;
  r.sixth_rhs = -r.relocated[2] / 3 + r.gamma_term / 3 + r.closed_form / 6;
  return r;
}

}  // namespace arborify
