#include "arborify/random.hpp"

#include <algorithm>
#include <functional>

namespace arborify {

namespace {

int uniform(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

std::vector<Node*> leaf_ptrs(Node& root) {
  std::vector<Node*> out;
  std::function<void(Node&, bool)> rec = [&](Node& n, bool is_root) {
    if (!is_root && n.is_leaf()) {
      out.push_back(&n);
      return;
    }
    for (auto& c : n.children) rec(c, false);
  };
  rec(root, true);
  return out;
}

}  // namespace

Frequency random_frequency(Rng& rng, std::size_t d, int kmax) {
  for (;;) {
    Frequency f = Frequency::zero(d);
    for (auto& x : f.c) x = uniform(rng, -kmax, kmax);
    if (f.norm2() <= static_cast<std::int64_t>(kmax) * kmax) return f;
  }
}

PairedTree random_paired_tree(Rng& rng, Model model, std::size_t d, int kmax, int max_t2) {
  Node root;
  const int arity = uniform(rng, 0, 1) ? 4 : 2;
  root.children.resize(arity);
  const int m = uniform(rng, 1, max_t2);
  for (int e = 0; e < m; ++e) {
    auto leaves = leaf_ptrs(root);
    Node* pick = leaves[uniform(rng, 0, static_cast<int>(leaves.size()) - 1)];
    pick->decor.kind = EdgeKind::T2;
    pick->decor.conj = model == Model::NLS ? uniform(rng, 0, 1) : 0;
    pick->children.resize(3);
  }
  auto leaves = leaf_ptrs(root);
  std::vector<int> perm(leaves.size());
  for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = static_cast<int>(i);
  std::shuffle(perm.begin(), perm.end(), rng);
  Pairing p;
  for (std::size_t i = 0; i + 1 < perm.size(); i += 2) {
    Node* a = leaves[perm[i]];
    Node* b = leaves[perm[i + 1]];
    const Frequency k = random_frequency(rng, d, kmax);
    a->decor = {EdgeKind::T1, 0, false};
    b->decor = {EdgeKind::T1, 0, false};
    if (model == Model::NLS) {
      a->freq = b->freq = k;
      (uniform(rng, 0, 1) ? a : b)->decor.conj = 1;
    } else {
      a->freq = k;
      b->freq = -k;
    }
    p.add(perm[i], perm[i + 1], 2);
  }
  for (std::size_t i = 0; i < leaves.size(); ++i) leaves[i]->leaf_id = static_cast<int>(i);
  DecoratedTree t = canonicalize(std::move(root), &p);
  return {std::move(t), std::move(p)};
}

PairedTree random_distinct_tree(Rng& rng, Model model, int max_nodes) {
  Node root;
  int nodes = 1;
  const int target = uniform(rng, 2, max_nodes);
  // grow by attaching a leaf to the root or any inner node, or under an existing leaf
  std::int64_t next_freq = 1;
  while (nodes < target) {
    std::vector<Node*> all;
    std::function<void(Node&)> rec = [&](Node& n) {
      all.push_back(&n);
      for (auto& c : n.children) rec(c);
    };
    rec(root);
    Node* host = all[uniform(rng, 0, static_cast<int>(all.size()) - 1)];
    Node leaf;
    if (host != &root && host->is_leaf()) {
      host->decor.kind = EdgeKind::T2;
      host->decor.hat = false;
      host->freq = Frequency{};
    }
    host->children.push_back(leaf);
    ++nodes;
  }
  for (Node* l : leaf_ptrs(root)) {
    l->decor.kind = EdgeKind::T1;
    l->decor.conj = model == Model::NLS ? uniform(rng, 0, 1) : 0;
    l->freq = Frequency{next_freq};
    next_freq *= 3;
  }
  std::function<void(Node&, bool)> fix = [&](Node& n, bool is_root) {
    if (!is_root && !n.is_leaf()) {
      n.decor.kind = EdgeKind::T2;
      n.decor.conj = model == Model::NLS ? uniform(rng, 0, 1) : 0;
      n.freq = Frequency{};
    }
    for (auto& c : n.children) fix(c, false);
  };
  fix(root, true);
  return {canonicalize(std::move(root)), {}};
}

Word random_word(Rng& rng, Model model, int max_len, const std::string& tag_prefix) {
  Word w;
  w.model = model;
  const int len = uniform(rng, 1, max_len);
  for (int i = 0; i < len; ++i) {
    Letter l;
    l.tag = tag_prefix + std::to_string(i);
    const int arity = uniform(rng, 1, 3);
    for (int j = 0; j < arity; ++j) {
      Slot s;
      s.conj = model == Model::NLS ? uniform(rng, 0, 1) : 0;
      s.hat = uniform(rng, 0, 3) == 0;
      s.freq = Frequency{uniform(rng, -2, 2)};
      l.slots.push_back(s);
    }
    w.letters.push_back(l);
  }
  const int n = static_cast<int>(w.num_slots());
  std::vector<int> ids(n);
  for (int i = 0; i < n; ++i) ids[i] = i;
  std::shuffle(ids.begin(), ids.end(), rng);
  const int pairs = uniform(rng, 0, n / 2);
  for (int i = 0; i < pairs; ++i) w.pairing.add(ids[2 * i], ids[2 * i + 1], uniform(rng, 1, 2));
  return canonical_word(std::move(w));
}

}  // namespace arborify
