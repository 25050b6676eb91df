#pragma once

#include <boost/rational.hpp>

#include <compare>
#include <cstdint>
#include <string>

namespace arborify {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& q);
Rational parse_rational(const std::string& s);

// Gaussian rational times mu^(2*mu_exp).
struct ExactCoeff {
  Rational re{0};
  Rational im{0};
  int mu_exp = 0;

  ExactCoeff() = default;
  ExactCoeff(Rational r, Rational i = 0, int mu = 0) : re(r), im(i), mu_exp(mu) {}
  static ExactCoeff one() { return {1, 0}; }
  static ExactCoeff imag_unit() { return {0, 1}; }

  bool is_zero() const { return re.numerator() == 0 && im.numerator() == 0; }

  ExactCoeff operator-() const { return {-re, -im, mu_exp}; }
  ExactCoeff& operator+=(const ExactCoeff& o);
  ExactCoeff& operator-=(const ExactCoeff& o) { return *this += -o; }
  ExactCoeff& operator*=(const ExactCoeff& o);

  friend ExactCoeff operator+(ExactCoeff a, const ExactCoeff& b) { return a += b; }
  friend ExactCoeff operator-(ExactCoeff a, const ExactCoeff& b) { return a -= b; }
  friend ExactCoeff operator*(ExactCoeff a, const ExactCoeff& b) { return a *= b; }

  friend bool operator==(const ExactCoeff& a, const ExactCoeff& b) {
    if (a.is_zero() && b.is_zero()) return true;
    return a.re == b.re && a.im == b.im && a.mu_exp == b.mu_exp;
  }

  std::string str() const;
};

// i^n for any integer n
ExactCoeff i_pow(int n);

}  // namespace arborify
