#include "arborify/frequency.hpp"

#include <stdexcept>

namespace arborify {

std::string to_string(Model m) { return m == Model::NLS ? "nls" : "wave"; }

Model parse_model(const std::string& s) {
  if (s == "nls") return Model::NLS;
  if (s == "wave") return Model::Wave;
  throw std::invalid_argument("unknown model '" + s + "'");
}

bool Frequency::is_zero() const {
  for (auto x : c)
    if (x != 0) return false;
  return true;
}

std::int64_t Frequency::norm2() const {
  std::int64_t s = 0;
  for (auto x : c) s += x * x;
  return s;
}

Frequency Frequency::operator-() const {
  Frequency r = *this;
  for (auto& x : r.c) x = -x;
  return r;
}

Frequency& Frequency::operator+=(const Frequency& o) {
  if (c.size() != o.c.size()) throw std::invalid_argument("frequency dimension mismatch");
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c[i];
  return *this;
}

Frequency& Frequency::operator-=(const Frequency& o) {
  if (c.size() != o.c.size()) throw std::invalid_argument("frequency dimension mismatch");
  for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c[i];
  return *this;
}

std::string Frequency::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += ",";
    s += std::to_string(c[i]);
  }
  return s + ")";
}

}  // namespace arborify
