#pragma once

#include <compare>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include "sonc/rational.hpp"

namespace sonc {

/// A point of Q^n used as a monomial exponent.
///
/// Coordinates are normalized rationals, so componentwise equality is exact
/// equality and the type can be used directly as an ordered map key.
class Exponent {
public:
  Exponent() = default;
  explicit Exponent(std::size_t n) : coords_(n) {}
  explicit Exponent(std::vector<Rational> coords) : coords_(std::move(coords)) {}
  Exponent(std::initializer_list<Rational> coords) : coords_(coords) {}

  static Exponent from_ints(const std::vector<long long>& values);

  std::size_t dim() const { return coords_.size(); }
  const Rational& operator[](std::size_t i) const { return coords_[i]; }
  Rational& operator[](std::size_t i) { return coords_[i]; }
  const std::vector<Rational>& coords() const { return coords_; }

  bool is_zero() const;
  bool is_integer() const;
  /// All coordinates are even integers.
  bool is_even_lattice() const;
  /// lcm of the coordinate denominators.
  std::int64_t denominator_lcm() const;
  Rational degree() const;

  std::vector<double> to_doubles() const;
  /// "(a, b/c, ...)"
  std::string str() const;

  Exponent& operator+=(const Exponent& o);
  Exponent& operator-=(const Exponent& o);
  Exponent& operator*=(const Rational& s);

  friend Exponent operator+(Exponent a, const Exponent& b) { return a += b; }
  friend Exponent operator-(Exponent a, const Exponent& b) { return a -= b; }
  friend Exponent operator*(Exponent a, const Rational& s) { return a *= s; }
  friend Exponent operator*(const Rational& s, Exponent a) { return a *= s; }

  friend bool operator==(const Exponent& a, const Exponent& b) = default;
  /// Lexicographic order on the coordinates.
  friend std::strong_ordering operator<=>(const Exponent& a, const Exponent& b);

private:
  std::vector<Rational> coords_;
};

/// (v + w) / 2.
Exponent midpoint(const Exponent& v, const Exponent& w);

} // namespace sonc
