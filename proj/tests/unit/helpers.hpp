#pragma once

#include "arborify/tree.hpp"
#include "arborify/word.hpp"

#include <string>
#include <vector>

namespace th {

using namespace arborify;

inline Node leaf(const Frequency& k, int conj = 0, bool hat = false) {
  Node n;
  n.decor = {EdgeKind::T1, conj, hat};
  n.freq = k;
  return n;
}

// frequency left empty: canonicalize derives it
inline Node inner(int conj, std::vector<Node> children, const std::string& tag = "") {
  Node n;
  n.decor = {EdgeKind::T2, conj, false};
  n.children = std::move(children);
  n.tag = tag;
  return n;
}

inline Node root(std::vector<Node> children, const std::string& tag = "") {
  Node n;
  n.children = std::move(children);
  n.tag = tag;
  return n;
}

inline PairedTree paired(Node r, std::vector<std::pair<int, int>> p1 = {}, std::vector<std::pair<int, int>> p2 = {}) {
  Pairing p;
  for (auto [a, b] : p1) p.add(a, b, 1);
  for (auto [a, b] : p2) p.add(a, b, 2);
  PairedTree t;
  t.tree = canonicalize(std::move(r), &p);
  t.pairing = p;
  return t;
}

inline Slot slot(const Frequency& k, int conj = 0, bool hat = false) { return Slot{conj, hat, k, -1}; }

inline Letter letter(std::vector<Slot> s, const std::string& tag, bool green_node = false) {
  return Letter{std::move(s), green_node, tag};
}

inline Word word(Model m, std::vector<Letter> ls, std::vector<std::pair<int, int>> p1 = {},
                 std::vector<std::pair<int, int>> p2 = {}) {
  Word w;
  w.model = m;
  w.letters = std::move(ls);
  for (auto [a, b] : p1) w.pairing.add(a, b, 1);
  for (auto [a, b] : p2) w.pairing.add(a, b, 2);
  return canonical_word(w);
}

// single-slot NLS letter, handy for pure shuffle combinatorics
inline Word tagged(const std::vector<std::string>& tags) {
  std::vector<Letter> ls;
  for (std::size_t i = 0; i < tags.size(); ++i) ls.push_back(letter({slot(Frequency{static_cast<std::int64_t>(i)})}, tags[i]));
  return word(Model::NLS, ls);
}

inline TagWord tags_of(const Word& w) {
  TagWord t;
  for (const auto& l : w.letters) t.push_back(l.tag);
  return t;
}

}  // namespace th
