#include "bundlecurv/polynomial.hpp"

#include <cmath>
#include <sstream>

namespace bundlecurv::poly {

Polynomial::Polynomial(Rational constant) {
  if (constant.numerator() != 0) terms_[Exponents{}] = constant;
}

Polynomial Polynomial::variable(std::size_t index) {
  Polynomial p;
  Exponents e{};
  e.at(index) = 1;
  p.terms_[e] = 1;
  return p;
}

void Polynomial::add_term(const Exponents& e, const Rational& c) {
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) it->second += c;
  if (it->second.numerator() == 0) terms_.erase(it);
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(const Polynomial& o) {
  Polynomial out;
  for (const auto& [ea, ca] : terms_) {
    for (const auto& [eb, cb] : o.terms_) {
      Exponents e{};
      for (std::size_t i = 0; i < kVars; ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  }
  *this = std::move(out);
  return *this;
}

Polynomial Polynomial::pow(unsigned n) const {
  Polynomial out(1);
  for (unsigned i = 0; i < n; ++i) out *= *this;
  return out;
}

Polynomial Polynomial::substitute(std::size_t index, const Polynomial& value) const {
  Polynomial out;
  for (const auto& [e, c] : terms_) {
    Exponents rest = e;
    rest.at(index) = 0;
    Polynomial term;
    term.terms_[rest] = c;
    out += term * value.pow(static_cast<unsigned>(e[index]));
  }
  return out;
}

double Polynomial::evaluate(const Point& x) const {
  double sum = 0.0;
  for (const auto& [e, c] : terms_) {
    double t = boost::rational_cast<double>(c);
    for (std::size_t i = 0; i < kVars; ++i) t *= std::pow(x[i], e[i]);
    sum += t;
  }
  return sum;
}

std::string Polynomial::str(const std::array<std::string, kVars>& names) const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  // Reverse lexicographic order of the exponent vectors.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [e, c] = *it;
    const bool negative = c.numerator() < 0;
    const Rational mag = negative ? -c : c;
    os << (first ? (negative ? "-" : "") : (negative ? " - " : " + "));
    first = false;
    bool has_var = false;
    for (std::size_t i = 0; i < kVars; ++i) has_var = has_var || e[i] != 0;
    if (mag != Rational(1) || !has_var) {
      os << mag.numerator();
      if (mag.denominator() != 1) os << "/" << mag.denominator();
      if (has_var) os << "*";
    }
    bool first_var = true;
    for (std::size_t i = 0; i < kVars; ++i) {
      if (e[i] == 0) continue;
      if (!first_var) os << "*";
      first_var = false;
      os << names[i];
      if (e[i] > 1) os << "^" << e[i];
    }
  }
  return os.str();
}

}  // namespace bundlecurv::poly
