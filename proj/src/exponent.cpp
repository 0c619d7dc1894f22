#include "sonc/exponent.hpp"

#include <algorithm>
#include <stdexcept>

namespace sonc {

Exponent Exponent::from_ints(const std::vector<long long>& values) {
  Exponent e(values.size());
  for (std::size_t i = 0; i < values.size(); ++i) e[i] = Rational(values[i]);
  return e;
}

bool Exponent::is_zero() const {
  for (const auto& c : coords_)
    if (!c.is_zero()) return false;
  return true;
}

bool Exponent::is_integer() const {
  for (const auto& c : coords_)
    if (!c.is_integer()) return false;
  return true;
}

bool Exponent::is_even_lattice() const {
  for (const auto& c : coords_)
    if (!c.is_integer() || c.num() % 2 != 0) return false;
  return true;
}

std::int64_t Exponent::denominator_lcm() const {
  std::int64_t l = 1;
  for (const auto& c : coords_) l = lcm64(l, c.den());
  return l;
}

Rational Exponent::degree() const {
  Rational d;
  for (const auto& c : coords_) d += c;
  return d;
}

std::vector<double> Exponent::to_doubles() const {
  std::vector<double> out;
  out.reserve(coords_.size());
  for (const auto& c : coords_) out.push_back(c.to_double());
  return out;
}

std::string Exponent::str() const {
  std::string s = "(";
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    if (i) s += ", ";
    s += coords_[i].str();
  }
  return s + ")";
}

Exponent& Exponent::operator+=(const Exponent& o) {
  if (o.dim() != dim()) throw std::invalid_argument("exponent dimension mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] += o.coords_[i];
  return *this;
}

Exponent& Exponent::operator-=(const Exponent& o) {
  if (o.dim() != dim()) throw std::invalid_argument("exponent dimension mismatch");
  for (std::size_t i = 0; i < coords_.size(); ++i) coords_[i] -= o.coords_[i];
  return *this;
}

Exponent& Exponent::operator*=(const Rational& s) {
  for (auto& c : coords_) c *= s;
  return *this;
}

std::strong_ordering operator<=>(const Exponent& a, const Exponent& b) {
  const std::size_t n = std::min(a.dim(), b.dim());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a.coords_[i] <=> b.coords_[i]; c != 0) return c;
  }
  return a.dim() <=> b.dim();
}

Exponent midpoint(const Exponent& v, const Exponent& w) { return (v + w) * Rational(1, 2); }

} // namespace sonc
