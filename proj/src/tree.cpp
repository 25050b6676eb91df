#include "arborify/tree.hpp"

#include <algorithm>
#include <functional>
#include <numeric>

namespace arborify {

namespace {

void collect_leaves(const Node& n, std::vector<const Node*>& out, bool is_root) {
  if (!is_root && n.is_leaf()) {
    out.push_back(&n);
    return;
  }
  for (const auto& c : n.children) collect_leaves(c, out, false);
}

int count_t2(const Node& n) {
  int s = 0;
  for (const auto& c : n.children) s += (c.decor.kind == EdgeKind::T2) + count_t2(c);
  return s;
}

std::size_t find_dim(const Node& n, bool is_root) {
  if (!is_root && !n.freq.c.empty()) return n.freq.dim();
  for (const auto& c : n.children)
    if (auto d = find_dim(c, false)) return d;
  return 0;
}

std::string header(const Node& n) {
  std::string h;
  h += n.decor.kind == EdgeKind::T1 ? 'a' : 'b';
  h += static_cast<char>('0' + n.decor.conj);
  h += n.decor.hat ? 'h' : '-';
  h += n.is_leaf() ? 'L' : 'N';
  return h;
}

struct Keyed {
  std::string head;
  std::string inner;
  Node node;
};

// Validates, derives missing inner frequencies, sorts children; returns the subtree key.
std::string canon(Node& n, bool is_root, std::size_t dim) {
  if (!is_root) {
    if (n.decor.conj != 0 && n.decor.conj != 1) throw TreeError("conj bit must be 0 or 1");
    if (n.is_leaf()) {
      if (n.decor.kind != EdgeKind::T1)
        throw TreeError("edge to leaf " + n.freq.str() + " must have kind t1");
      if (n.freq.dim() != dim) throw TreeError("leaf frequency " + n.freq.str() + " has wrong dimension");
    } else {
      if (n.decor.kind != EdgeKind::T2) throw TreeError("edge to inner node must have kind t2");
      if (n.decor.hat) throw TreeError("hat flag is invalid on a t2 edge");
    }
  }
  std::vector<std::pair<std::string, std::string>> keys;
  std::vector<Keyed> kids;
  kids.reserve(n.children.size());
  for (auto& c : n.children) {
    std::string inner = canon(c, false, dim);
    kids.push_back({header(c), std::move(inner), std::move(c)});
  }
  if (!is_root && !n.is_leaf()) {
    std::vector<Node> plain;
    for (auto& k : kids) plain.push_back(k.node);
    Frequency expect = kirchhoff_frequency(n.decor, plain, dim);
    if (n.freq.c.empty()) n.freq = expect;
    else if (n.freq != expect)
      throw TreeError("Kirchhoff relation violated at inner node " + n.freq.str() + ", children give " +
                      expect.str());
  }
  std::stable_sort(kids.begin(), kids.end(), [](const Keyed& a, const Keyed& b) {
    if (a.head != b.head) return a.head < b.head;
    if (a.inner != b.inner) return a.inner < b.inner;
    if (a.node.freq != b.node.freq) return a.node.freq < b.node.freq;
    return a.node.tag < b.node.tag;
  });
  std::string body = "{";
  n.children.clear();
  for (std::size_t i = 0; i < kids.size(); ++i) {
    if (i) body += ",";
    body += kids[i].head + kids[i].inner + kids[i].node.freq.str();
    if (!kids[i].node.tag.empty()) body += "#" + kids[i].node.tag;
    n.children.push_back(std::move(kids[i].node));
  }
  body += "}";
  return n.is_leaf() ? std::string() : body;
}

void number_leaves(Node& n, bool is_root, int& next, std::vector<int>& old_to_new) {
  if (!is_root && n.is_leaf()) {
    if (n.leaf_id >= 0) {
      if (n.leaf_id >= static_cast<int>(old_to_new.size())) old_to_new.resize(n.leaf_id + 1, -1);
      old_to_new[n.leaf_id] = next;
    }
    n.leaf_id = next++;
    return;
  }
  n.leaf_id = -1;
  for (auto& c : n.children) number_leaves(c, false, next, old_to_new);
}

void assign_missing_ids(Node& n, bool is_root, int& next, int& with_id, int& without_id) {
  if (!is_root && n.is_leaf()) {
    if (n.leaf_id < 0) {
      n.leaf_id = next;
      ++without_id;
    } else {
      ++with_id;
    }
    ++next;
    return;
  }
  for (auto& c : n.children) assign_missing_ids(c, false, next, with_id, without_id);
}

void clear_ids(Node& n) {
  n.leaf_id = -1;
  for (auto& c : n.children) clear_ids(c);
}

}  // namespace

int DecoratedTree::num_leaves() const { return static_cast<int>(leaves().size()); }

int DecoratedTree::num_t2_edges() const { return count_t2(root); }

std::vector<const Node*> DecoratedTree::leaves() const {
  std::vector<const Node*> out;
  collect_leaves(root, out, true);
  std::sort(out.begin(), out.end(), [](const Node* a, const Node* b) { return a->leaf_id < b->leaf_id; });
  return out;
}

std::vector<LeafData> DecoratedTree::leaf_data() const {
  std::vector<LeafData> out;
  for (const Node* l : leaves()) out.push_back({l->freq, l->decor.conj});
  return out;
}

Frequency kirchhoff_frequency(const EdgeDecoration& decor, const std::vector<Node>& children,
                              std::size_t dim) {
  Frequency s = Frequency::zero(dim);
  for (const auto& c : children) s += c.freq.signed_by(c.decor.conj);
  return s.signed_by(decor.conj);
}

DecoratedTree canonicalize(Node root, Pairing* pairing) {
  int next = 0, with_id = 0, without_id = 0;
  assign_missing_ids(root, true, next, with_id, without_id);
  if (with_id && without_id) {
    if (pairing && !pairing->empty())
      throw TreeError("some leaves carry ids and some do not; pairing is ambiguous");
    clear_ids(root);
    next = 0;
    assign_missing_ids(root, true, next, with_id, without_id);
  }
  DecoratedTree t;
  t.dim = find_dim(root, true);
  std::string body = canon(root, true, t.dim);
  std::vector<int> old_to_new;
  int counter = 0;
  number_leaves(root, true, counter, old_to_new);
  if (pairing) {
    pairing->check_disjoint(static_cast<int>(old_to_new.size()));
    *pairing = pairing->remap(old_to_new);
  }
  t.root = std::move(root);
  t.key = t.root.tag.empty() ? body : body + "#" + t.root.tag;
  return t;
}

void validate_tree(const DecoratedTree& t, Model model) {
  if (model != Model::Wave) return;
  std::function<void(const Node&, bool)> rec = [&](const Node& n, bool is_root) {
    if (!is_root && n.decor.conj != 0) throw TreeError("wave trees carry conj 0 on every edge");
    for (const auto& c : n.children) rec(c, false);
  };
  rec(t.root, true);
}

void validate_pairing(const PairedTree& t, Model model) {
  auto data = t.tree.leaf_data();
  t.pairing.check_disjoint(static_cast<int>(data.size()));
  for (const auto* s : {&t.pairing.class1, &t.pairing.class2})
    for (auto [a, b] : *s)
      if (!pair_is_valid(data[a], data[b], model))
        throw TreeError("pair (" + std::to_string(a) + "," + std::to_string(b) + ") is not valid for model " +
                        to_string(model));
}

void add_term(TreePoly& p, const PairedTree& t, const ExactCoeff& c) {
  if (c.is_zero()) return;
  auto it = p.find(t);
  if (it == p.end()) {
    p.emplace(t, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero()) p.erase(it);
}

DecoratedTree leaf_tree(const EdgeDecoration& decor, const Frequency& k) {
  Node root;
  Node leaf;
  leaf.decor = decor;
  leaf.freq = k;
  root.children.push_back(leaf);
  return canonicalize(root);
}

DecoratedTree empty_tree(std::size_t dim) {
  DecoratedTree t = canonicalize(Node{});
  t.dim = dim;
  return t;
}

std::optional<DecoratedTree> graft_tree(const EdgeDecoration& decor, const Frequency& k,
                                        const DecoratedTree& children) {
  if (decor.kind == EdgeKind::T2 && decor.hat) throw TreeError("hat flag is invalid on a t2 edge");
  const bool is_leaf = children.is_empty();
  if (is_leaf && decor.kind == EdgeKind::T2) throw TreeError("t2 edge needs a non-empty argument");
  if (!is_leaf && decor.kind == EdgeKind::T1) throw TreeError("t1 edge must end in a leaf");
  Node n;
  n.decor = decor;
  n.freq = k;
  n.children = children.root.children;
  if (!is_leaf && kirchhoff_frequency(decor, n.children, k.dim()) != k) return std::nullopt;
  Node root;
  root.children.push_back(std::move(n));
  return canonicalize(std::move(root));
}

TreePoly graft(const EdgeDecoration& decor, const Frequency& k, const PairedTree& children) {
  TreePoly out;
  if (auto t = graft_tree(decor, k, children.tree)) add_term(out, PairedTree{*t, children.pairing}, ExactCoeff::one());
  return out;
}

PairedTree tree_product(const PairedTree& a, const PairedTree& b) {
  Node root;
  const int shift = a.tree.num_leaves();
  root.children = a.tree.root.children;
  std::function<void(Node&)> bump = [&](Node& n) {
    if (n.is_leaf()) n.leaf_id += shift;
    for (auto& c : n.children) bump(c);
  };
  for (Node c : b.tree.root.children) {
    bump(c);
    root.children.push_back(std::move(c));
  }
  Pairing p = a.pairing;
  for (auto [x, y] : b.pairing.class1) p.add(x + shift, y + shift, 1);
  for (auto [x, y] : b.pairing.class2) p.add(x + shift, y + shift, 2);
  PairedTree r{canonicalize(std::move(root), &p), p};
  if (r.tree.dim == 0) r.tree.dim = std::max(a.tree.dim, b.tree.dim);
  return r;
}

DecoratedTree tree_product(const DecoratedTree& a, const DecoratedTree& b) {
  return tree_product(PairedTree{a, {}}, PairedTree{b, {}}).tree;
}

TreePoly tree_product(const TreePoly& a, const TreePoly& b) {
  TreePoly out;
  for (const auto& [ta, ca] : a)
    for (const auto& [tb, cb] : b) add_term(out, tree_product(ta, tb), ca * cb);
  return out;
}

LinearExtensions linear_extensions(const DecoratedTree& t, int max_inner) {
  std::vector<int> parent;
  std::function<void(const Node&, int)> walk = [&](const Node& n, int par) {
    int me = static_cast<int>(parent.size());
    parent.push_back(par);
    for (const auto& c : n.children)
      if (!c.is_leaf()) walk(c, me);
  };
  walk(t.root, -1);
  const int n = static_cast<int>(parent.size());
  if (n > max_inner) throw std::length_error("linear_extensions: too many inner nodes");
  std::vector<int> pending(n, 0);
  for (int i = 1; i < n; ++i) ++pending[parent[i]];
  LinearExtensions out;
  std::vector<int> cur;
  std::vector<char> placed(n, 0);
  std::function<void()> rec = [&]() {
    if (static_cast<int>(cur.size()) == n) {
      out.orders.push_back(cur);
      return;
    }
    for (int i = 0; i < n; ++i) {
      if (placed[i] || pending[i]) continue;
      placed[i] = 1;
      cur.push_back(i);
      if (parent[i] >= 0) --pending[parent[i]];
      rec();
      if (parent[i] >= 0) ++pending[parent[i]];
      cur.pop_back();
      placed[i] = 0;
    }
  };
  rec();
  out.count = out.orders.size();
  return out;
}

}  // namespace arborify
