#include "arborify/arborify.hpp"

#include <functional>
#include <map>
#include <stdexcept>

namespace arborify {

namespace {

// Words under construction keep slot origins so the pairing can be rebuilt at the end:
// origin >= 0 is a leaf id, origin < 0 marks the two halves of a split t2 edge.
struct RawWord {
  std::vector<Letter> letters;
  ExactCoeff coeff = ExactCoeff::one();
};
using RawPoly = std::vector<RawWord>;

RawPoly raw_shuffle(const RawPoly& a, const RawPoly& b) {
  RawPoly out;
  for (const auto& u : a)
    for (const auto& v : b) {
      std::vector<Letter> cur;
      const ExactCoeff c = u.coeff * v.coeff;
      std::function<void(std::size_t, std::size_t)> rec = [&](std::size_t i, std::size_t j) {
        if (i == u.letters.size() && j == v.letters.size()) {
          out.push_back({cur, c});
          return;
        }
        if (i < u.letters.size()) {
          cur.push_back(u.letters[i]);
          rec(i + 1, j);
          cur.pop_back();
        }
        if (j < v.letters.size()) {
          cur.push_back(v.letters[j]);
          rec(i, j + 1);
          cur.pop_back();
        }
      };
      rec(0, 0);
    }
  return out;
}

long split_origin(const Node& n) { return -(static_cast<long>(n.uid) + 1); }

Slot leaf_slot(const Node& leaf) { return {leaf.decor.conj, leaf.decor.hat, leaf.freq, leaf.leaf_id}; }

// Slot left in the parent letter by a split t2 edge.
Slot lower_split_slot(const Node& child, Model model) {
  if (model == Model::NLS) return {child.decor.conj, true, child.freq, split_origin(child)};
  return {0, false, child.freq, split_origin(child)};
}

// Slot leading the recursive factor spawned by a split t2 edge.
Slot upper_split_slot(const Node& child, Model model) {
  if (model == Model::NLS) return {1 - child.decor.conj, true, child.freq, split_origin(child)};
  return {0, true, -child.freq, split_origin(child)};
}

ExactCoeff split_coeff(const Node& child, Model model) {
  if (model == Model::Wave) return ExactCoeff::one();
  return child.decor.conj ? -ExactCoeff::imag_unit() : ExactCoeff::imag_unit();
}

RawPoly raw_arborify(const Node& n, const std::vector<Slot>& extra, Model model) {
  Letter root;
  root.tag = n.tag;
  root.slots = extra;
  ExactCoeff c = ExactCoeff::one();
  RawPoly acc{RawWord{}};
  for (const auto& ch : n.children) {
    if (ch.is_leaf()) {
      root.slots.push_back(leaf_slot(ch));
      continue;
    }
    root.slots.push_back(lower_split_slot(ch, model));
    c *= split_coeff(ch, model);
    acc = raw_shuffle(acc, raw_arborify(ch, {upper_split_slot(ch, model)}, model));
  }
  for (auto& w : acc) {
    w.letters.push_back(root);
    w.coeff *= c;
  }
  return acc;
}

void assign_uids(Node& n, int& next) {
  n.uid = next++;
  for (auto& c : n.children) assign_uids(c, next);
}

void check_model(const PairedTree& t, Model model) {
  validate_tree(t.tree, model);
  std::function<void(const Node&, bool)> rec = [&](const Node& n, bool is_root) {
    if (!is_root && n.is_leaf() && n.leaf_id < 0) throw TreeError("leaf without id; canonicalize first");
    for (const auto& c : n.children) rec(c, false);
  };
  rec(t.tree.root, true);
}

Word finish(const RawWord& r, const Pairing& tree_pairing, Model model) {
  Word w;
  w.model = model;
  w.letters = r.letters;
  std::map<long, std::vector<int>> where;
  int pos = 0;
  for (const auto& l : w.letters)
    for (const auto& s : l.slots) where[s.origin].push_back(pos++);
  for (const auto& [origin, ids] : where) {
    if (origin < 0) {
      if (ids.size() != 2) throw std::logic_error("split edge without two halves");
      w.pairing.add(ids[0], ids[1], 1);
    } else if (ids.size() != 1) {
      throw std::logic_error("leaf appears twice in a word");
    }
  }
  auto at = [&](int leaf) {
    auto it = where.find(leaf);
    if (it == where.end()) throw std::logic_error("paired leaf missing from word");
    return it->second[0];
  };
  for (auto [a, b] : tree_pairing.class1) w.pairing.add(at(a), at(b), 1);
  for (auto [a, b] : tree_pairing.class2) w.pairing.add(at(a), at(b), 2);
  return canonical_word(std::move(w));
}

WordPoly finish_all(const RawPoly& raw, const Pairing& p, Model model) {
  WordPoly out;
  for (const auto& r : raw) add_term(out, finish(r, p, model), r.coeff);
  return out;
}

// Coproduct on raw nodes; leaf ids and uids are kept so origins survive.
struct RawCut {
  std::vector<Node> left;  // each a tree root
  std::vector<Node> right;  // edges hanging from the right tree's root
  ExactCoeff coeff = ExactCoeff::one();
};

std::vector<RawCut> raw_coproduct_edges(const std::vector<Node>& edges, Model model);

std::vector<RawCut> raw_coproduct_edge(const Node& e, Model model) {
  if (e.is_leaf()) return {RawCut{{}, {e}, ExactCoeff::one()}};
  std::vector<RawCut> out;
  for (auto& cut : raw_coproduct_edges(e.children, model)) {
    Node g = e;
    g.children = std::move(cut.right);
    out.push_back({std::move(cut.left), {std::move(g)}, cut.coeff});
  }
  Node up;
  up.tag = e.tag;
  up.uid = e.uid;
  Node hat_leaf;
  const Slot us = upper_split_slot(e, model);
  hat_leaf.decor = {EdgeKind::T1, us.conj, true};
  hat_leaf.freq = us.freq;
  hat_leaf.leaf_id = static_cast<int>(us.origin);
  up.children.push_back(hat_leaf);
  for (const auto& c : e.children) up.children.push_back(c);
  Node low;
  const Slot ls = lower_split_slot(e, model);
  low.decor = {EdgeKind::T1, ls.conj, ls.hat};
  low.freq = ls.freq;
  low.leaf_id = static_cast<int>(ls.origin);
  out.push_back({{std::move(up)}, {std::move(low)}, split_coeff(e, model)});
  return out;
}

std::vector<RawCut> raw_coproduct_edges(const std::vector<Node>& edges, Model model) {
  std::vector<RawCut> acc{RawCut{}};
  for (const auto& e : edges) {
    std::vector<RawCut> next;
    for (const auto& a : acc)
      for (const auto& b : raw_coproduct_edge(e, model)) {
        RawCut c = a;
        c.left.insert(c.left.end(), b.left.begin(), b.left.end());
        c.right.insert(c.right.end(), b.right.begin(), b.right.end());
        c.coeff *= b.coeff;
        next.push_back(std::move(c));
      }
    acc = std::move(next);
  }
  return acc;
}

bool all_leaves(const std::vector<Node>& edges) {
  for (const auto& e : edges)
    if (!e.is_leaf()) return false;
  return true;
}

RawPoly raw_arborify_cp(const Node& root, Model model) {
  RawPoly out;
  for (const auto& cut : raw_coproduct_edges(root.children, model)) {
    if (!all_leaves(cut.right)) continue;
    Letter letter;
    letter.tag = root.tag;
    for (const auto& e : cut.right) letter.slots.push_back({e.decor.conj, e.decor.hat, e.freq, e.leaf_id});
    RawPoly acc{RawWord{}};
    for (const auto& f : cut.left) acc = raw_shuffle(acc, raw_arborify_cp(f, model));
    for (auto& w : acc) {
      w.letters.push_back(letter);
      w.coeff *= cut.coeff;
      out.push_back(std::move(w));
    }
  }
  return out;
}

DecoratedTree public_tree(Node root) {
  std::function<void(Node&)> strip = [&](Node& n) {
    n.leaf_id = -1;
    n.uid = -1;
    for (auto& c : n.children) strip(c);
  };
  strip(root);
  return canonicalize(std::move(root));
}

}  // namespace

bool CutTerm::right_is_letter() const { return all_leaves(right.root.children); }

WordPoly arborify(const PairedTree& t, Model model) {
  check_model(t, model);
  Node root = t.tree.root;
  int next = 0;
  assign_uids(root, next);
  return finish_all(raw_arborify(root, {}, model), t.pairing, model);
}

WordPoly arborify(const TreePoly& p, Model model) {
  WordPoly out;
  for (const auto& [t, c] : p) out += scale(arborify(t, model), c);
  return out;
}

WordPoly arborify_forest(const std::vector<PairedTree>& forest, Model model) {
  WordPoly out = single(empty_word(model));
  for (const auto& t : forest) out = shuffle(out, arborify(t, model));
  return out;
}

std::vector<CutTerm> coproduct(const DecoratedTree& t, Model model) {
  validate_tree(t, model);
  Node root = t.root;
  int next = 0;
  assign_uids(root, next);
  std::vector<CutTerm> out;
  for (auto& cut : raw_coproduct_edges(root.children, model)) {
    CutTerm ct;
    for (auto& l : cut.left) ct.left.push_back(public_tree(std::move(l)));
    Node r;
    r.tag = root.tag;
    r.children = std::move(cut.right);
    ct.right = public_tree(std::move(r));
    ct.coeff = cut.coeff;
    out.push_back(std::move(ct));
  }
  return out;
}

WordPoly arborify_cp(const PairedTree& t, Model model) {
  check_model(t, model);
  Node root = t.tree.root;
  int next = 0;
  assign_uids(root, next);
  return finish_all(raw_arborify_cp(root, model), t.pairing, model);
}

}  // namespace arborify
