#include "arborify/pairing.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <string>

namespace arborify {

void Pairing::add(int a, int b, int cls) {
  if (a == b) throw std::invalid_argument("cannot pair an id with itself");
  auto p = std::minmax(a, b);
  (cls == 1 ? class1 : class2).insert({p.first, p.second});
}

std::optional<Pairing::Partner> Pairing::partner(int id) const {
  for (int cls : {1, 2}) {
    for (auto [a, b] : cls == 1 ? class1 : class2) {
      if (a == id) return Partner{b, cls};
      if (b == id) return Partner{a, cls};
    }
  }
  return std::nullopt;
}

Pairing Pairing::remap(const std::vector<int>& old_to_new) const {
  Pairing r;
  auto get = [&](int id) {
    if (id < 0 || id >= static_cast<int>(old_to_new.size()))
      throw std::out_of_range("pairing id " + std::to_string(id) + " out of range");
    return old_to_new[id];
  };
  for (auto [a, b] : class1) r.add(get(a), get(b), 1);
  for (auto [a, b] : class2) r.add(get(a), get(b), 2);
  return r;
}

void Pairing::check_disjoint(int n) const {
  std::vector<int> seen(std::max(n, 0), 0);
  for (const auto* s : {&class1, &class2}) {
    for (auto [a, b] : *s) {
      for (int id : {a, b}) {
        if (id < 0 || id >= n)
          throw std::invalid_argument("dangling pairing id " + std::to_string(id));
        if (seen[id]++) throw std::invalid_argument("id " + std::to_string(id) + " paired twice");
      }
    }
  }
}

bool pair_is_valid(const LeafData& a, const LeafData& b, Model model) {
  if (model == Model::NLS) return a.freq == b.freq && a.conj != b.conj;
  return (a.freq + b.freq).is_zero();
}

std::vector<Pairing> wick_pairings(const std::vector<LeafData>& leaves, Model model, bool filter,
                                   bool partial) {
  const int n = static_cast<int>(leaves.size());
  std::vector<Pairing> out;
  if (!partial && n % 2) return out;
  std::vector<char> used(n, 0);
  std::vector<std::pair<int, int>> cur;

  std::function<void(int)> rec = [&](int i) {
    while (i < n && used[i]) ++i;
    if (i == n) {
      Pairing p;
      for (auto [a, b] : cur) p.add(a, b, 2);
      out.push_back(std::move(p));
      return;
    }
    used[i] = 1;
    if (partial) rec(i + 1);
    for (int j = i + 1; j < n; ++j) {
      if (used[j]) continue;
      if (filter && !pair_is_valid(leaves[i], leaves[j], model)) continue;
      used[j] = 1;
      cur.emplace_back(i, j);
      rec(i + 1);
      cur.pop_back();
      used[j] = 0;
    }
    used[i] = 0;
  };
  rec(0);
  std::sort(out.begin(), out.end(),
            [](const Pairing& a, const Pairing& b) { return a.class2 < b.class2; });
  return out;
}

std::int64_t double_factorial_odd(int n) {
  std::int64_t r = 1;
  for (int k = 2 * n - 1; k > 1; k -= 2) r *= k;
  return r;
}

}  // namespace arborify
