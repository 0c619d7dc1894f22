#pragma once

#include <compare>
#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <string_view>

namespace sonc {

/// Thrown when an exact computation leaves the 64-bit range.
class RationalOverflow : public std::overflow_error {
public:
  using std::overflow_error::overflow_error;
};

std::int64_t gcd64(std::int64_t a, std::int64_t b);
/// Least common multiple of two positive integers; throws RationalOverflow.
std::int64_t lcm64(std::int64_t a, std::int64_t b);

/// Exact rational number with 64-bit numerator and denominator.
///
/// Always normalized: den > 0 and gcd(|num|, den) == 1. Every arithmetic
/// operation is checked and throws RationalOverflow instead of wrapping.
class Rational {
public:
  constexpr Rational() = default;
  Rational(std::int64_t num); // NOLINT(google-explicit-constructor)
  Rational(std::int64_t num, std::int64_t den);

  std::int64_t num() const { return num_; }
  std::int64_t den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return (num_ > 0) - (num_ < 0); }
  double to_double() const { return static_cast<double>(num_) / static_cast<double>(den_); }

  /// "p/q", or "p" when the denominator is one.
  std::string str() const;
  /// Accepts "p", "-p", "p/q".
  static Rational parse(std::string_view text);

  Rational operator-() const;
  Rational& operator+=(const Rational& o);
  Rational& operator-=(const Rational& o);
  Rational& operator*=(const Rational& o);
  Rational& operator/=(const Rational& o);

  friend Rational operator+(Rational a, const Rational& b) { return a += b; }
  friend Rational operator-(Rational a, const Rational& b) { return a -= b; }
  friend Rational operator*(Rational a, const Rational& b) { return a *= b; }
  friend Rational operator/(Rational a, const Rational& b) { return a /= b; }

  friend bool operator==(const Rational& a, const Rational& b) = default;
  friend std::strong_ordering operator<=>(const Rational& a, const Rational& b);

private:
  std::int64_t num_ = 0;
  std::int64_t den_ = 1;
};

Rational abs(const Rational& r);

std::ostream& operator<<(std::ostream& os, const Rational& r);

} // namespace sonc
