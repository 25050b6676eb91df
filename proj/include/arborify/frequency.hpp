#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

namespace arborify {

enum class Model { NLS, Wave };

std::string to_string(Model m);
Model parse_model(const std::string& s);

// Integer lattice point. Physical scaling happens only at evaluation.
struct Frequency {
  std::vector<std::int64_t> c;

  Frequency() = default;
  explicit Frequency(std::vector<std::int64_t> v) : c(std::move(v)) {}
  Frequency(std::initializer_list<std::int64_t> v) : c(v) {}
  static Frequency zero(std::size_t d) { return Frequency(std::vector<std::int64_t>(d, 0)); }

  std::size_t dim() const { return c.size(); }
  bool is_zero() const;
  std::int64_t norm2() const;

  Frequency operator-() const;
  Frequency& operator+=(const Frequency& o);
  Frequency& operator-=(const Frequency& o);
  friend Frequency operator+(Frequency a, const Frequency& b) { return a += b; }
  friend Frequency operator-(Frequency a, const Frequency& b) { return a -= b; }

  // (-1)^bit * f
  Frequency signed_by(int bit) const { return bit ? -*this : *this; }

  auto operator<=>(const Frequency&) const = default;
  bool operator==(const Frequency&) const = default;

  std::string str() const;  // "(1,-2)"
};

}  // namespace arborify
