#pragma once

#include "arborify/frequency.hpp"

#include <compare>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace arborify {

// Partial matching on leaf (or slot) ids. Class 1 holds the hat/green pairs.
struct Pairing {
  std::set<std::pair<int, int>> class1;
  std::set<std::pair<int, int>> class2;

  void add(int a, int b, int cls);
  bool empty() const { return class1.empty() && class2.empty(); }
  std::size_t size() const { return class1.size() + class2.size(); }

  struct Partner {
    int other;
    int cls;
  };
  std::optional<Partner> partner(int id) const;
  bool is_paired(int id) const { return partner(id).has_value(); }

  // ids mapped through old -> new
  Pairing remap(const std::vector<int>& old_to_new) const;

  // throws on overlapping pairs or ids outside [0, n)
  void check_disjoint(int n) const;

  auto operator<=>(const Pairing&) const = default;
  bool operator==(const Pairing&) const = default;
};

struct LeafData {
  Frequency freq;
  int conj = 0;
};

// NLS: same frequency, opposite conj. Wave: opposite frequencies.
bool pair_is_valid(const LeafData& a, const LeafData& b, Model model);

// All perfect (or, with partial, all) matchings, class 2, sorted lexicographically.
std::vector<Pairing> wick_pairings(const std::vector<LeafData>& leaves, Model model,
                                   bool filter = true, bool partial = false);

// (2n-1)!!
std::int64_t double_factorial_odd(int n);

}  // namespace arborify
