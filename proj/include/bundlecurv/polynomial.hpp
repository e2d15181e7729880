#pragma once

// Sparse multivariate polynomials with exact rational coefficients, enough
// to expand and compare the identities of an elimination argument.

#include <array>
#include <cstddef>
#include <map>
#include <string>

#include <boost/rational.hpp>

namespace bundlecurv::poly {

using Rational = boost::rational<long long>;

constexpr std::size_t kVars = 4;
using Exponents = std::array<int, kVars>;
using Point = std::array<double, kVars>;

class Polynomial {
 public:
  Polynomial() = default;
  Polynomial(Rational constant);  // NOLINT(google-explicit-constructor)
  Polynomial(long long constant) : Polynomial(Rational(constant)) {}  // NOLINT

  static Polynomial variable(std::size_t index);

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(const Polynomial& o);
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, const Polynomial& b) { return a *= b; }
  friend Polynomial operator-(Polynomial a) { return a *= Polynomial(-1); }
  friend bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms_ == b.terms_;
  }

  bool is_zero() const noexcept { return terms_.empty(); }
  Polynomial pow(unsigned n) const;
  /// Replaces variable `index` by `value` and expands.
  Polynomial substitute(std::size_t index, const Polynomial& value) const;
  double evaluate(const Point& x) const;
  /// Human-readable form using the given variable names.
  std::string str(const std::array<std::string, kVars>& names) const;

 private:
  void add_term(const Exponents& e, const Rational& c);
  std::map<Exponents, Rational> terms_;
};

}  // namespace bundlecurv::poly
