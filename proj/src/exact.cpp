#include "arborify/exact.hpp"

#include <stdexcept>

namespace arborify {

std::string to_string(const Rational& q) {
  if (q.denominator() == 1) return std::to_string(q.numerator());
  return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  try {
    if (slash == std::string::npos) return Rational(std::stoll(s));
    auto num = std::stoll(s.substr(0, slash));
    auto den = std::stoll(s.substr(slash + 1));
    if (den == 0) throw std::invalid_argument("zero denominator");
    return Rational(num, den);
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad rational: '" + s + "'");
  }
}

ExactCoeff& ExactCoeff::operator+=(const ExactCoeff& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) {
    *this = o;
    return *this;
  }
  if (mu_exp != o.mu_exp)
    throw std::invalid_argument("adding coefficients with different mu powers");
  re += o.re;
  im += o.im;
  return *this;
}

ExactCoeff& ExactCoeff::operator*=(const ExactCoeff& o) {
  Rational r = re * o.re - im * o.im;
  Rational i = re * o.im + im * o.re;
  re = r;
  im = i;
  mu_exp += o.mu_exp;
  return *this;
}

std::string ExactCoeff::str() const {
  std::string s;
  if (im.numerator() == 0) {
    s = to_string(re);
  } else if (re.numerator() == 0) {
    if (im == Rational(1)) s = "i";
    else if (im == Rational(-1)) s = "-i";
    else s = to_string(im) + "i";
  } else {
    s = "{" + to_string(re) + "," + to_string(im) + "}";
  }
  if (mu_exp != 0) s += "mu^" + std::to_string(2 * mu_exp);
  return s;
}

ExactCoeff i_pow(int n) {
  switch (((n % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace arborify
