#pragma once

#include "arborify/exact.hpp"
#include "arborify/frequency.hpp"
#include "arborify/pairing.hpp"

#include <compare>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace arborify {

enum class EdgeKind : std::uint8_t { T1 = 0, T2 = 1 };

struct EdgeDecoration {
  EdgeKind kind = EdgeKind::T1;
  int conj = 0;
  bool hat = false;

  auto operator<=>(const EdgeDecoration&) const = default;
  bool operator==(const EdgeDecoration&) const = default;
};

// Thrown on structural or Kirchhoff problems by the validating path.
struct TreeError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// A node together with the edge to its parent. The root ignores decor and freq.
struct Node {
  EdgeDecoration decor;
  Frequency freq;
  int leaf_id = -1;
  std::string tag;
  std::vector<Node> children;
  int uid = -1;  // scratch id used by arborification; not part of equality

  bool is_leaf() const { return children.empty(); }
};

struct DecoratedTree {
  Node root;
  std::size_t dim = 0;
  std::string key;  // canonical key, filled by canonicalize

  bool is_empty() const { return root.children.empty(); }
  int num_leaves() const;
  int num_t2_edges() const;
  // leaves in id order
  std::vector<const Node*> leaves() const;
  std::vector<LeafData> leaf_data() const;

  friend bool operator==(const DecoratedTree& a, const DecoratedTree& b) { return a.key == b.key; }
  friend auto operator<=>(const DecoratedTree& a, const DecoratedTree& b) { return a.key <=> b.key; }
};

// Expected inner frequency from children per the Kirchhoff relation.
Frequency kirchhoff_frequency(const EdgeDecoration& decor, const std::vector<Node>& children,
                              std::size_t dim);

// Validating path. Leaves with leaf_id < 0 get ids in input DFS order first.
// Inner nodes with an empty freq get their frequency derived.
// The pairing, if given, is remapped to the canonical leaf ids.
DecoratedTree canonicalize(Node root, Pairing* pairing = nullptr);

// Model checks on top of canonicalize (wave conj bits etc.).
void validate_tree(const DecoratedTree& t, Model model);

struct PairedTree {
  DecoratedTree tree;
  Pairing pairing;

  auto operator<=>(const PairedTree&) const = default;
  bool operator==(const PairedTree&) const = default;
};

void validate_pairing(const PairedTree& t, Model model);

using TreePoly = std::map<PairedTree, ExactCoeff>;
void add_term(TreePoly& p, const PairedTree& t, const ExactCoeff& c);

DecoratedTree leaf_tree(const EdgeDecoration& decor, const Frequency& k);
DecoratedTree empty_tree(std::size_t dim);

// Annihilating path: zero polynomial on a Kirchhoff violation.
std::optional<DecoratedTree> graft_tree(const EdgeDecoration& decor, const Frequency& k,
                                        const DecoratedTree& children);
TreePoly graft(const EdgeDecoration& decor, const Frequency& k, const PairedTree& children);

DecoratedTree tree_product(const DecoratedTree& a, const DecoratedTree& b);
PairedTree tree_product(const PairedTree& a, const PairedTree& b);
TreePoly tree_product(const TreePoly& a, const TreePoly& b);

struct LinearExtensions {
  std::size_t count = 0;
  // each order lists inner-node preorder indices, earliest time first
  std::vector<std::vector<int>> orders;
};

// Inner nodes include the root, which is always last.
LinearExtensions linear_extensions(const DecoratedTree& t, int max_inner = 10);

}  // namespace arborify
