#pragma once

#include "arborify/tree.hpp"
#include "arborify/word.hpp"

#include <vector>

namespace arborify {

// One summand of the coproduct: left forest (tree list) tensor right tree.
struct CutTerm {
  std::vector<DecoratedTree> left;
  DecoratedTree right;
  ExactCoeff coeff;

  // true when every edge of the right tree ends in a leaf
  bool right_is_letter() const;
};

// Structural recursion. Letter tags come from node tags (root letter: root tag).
WordPoly arborify(const PairedTree& t, Model model);
WordPoly arborify(const TreePoly& p, Model model);
// Forest: shuffle of the factors.
WordPoly arborify_forest(const std::vector<PairedTree>& forest, Model model);

// Full expansion of the recursive coproduct.
std::vector<CutTerm> coproduct(const DecoratedTree& t, Model model);

// Concatenation of arborified left forests with the letter projection of the right side.
WordPoly arborify_cp(const PairedTree& t, Model model);

}  // namespace arborify
