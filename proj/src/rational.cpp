#include "sonc/rational.hpp"

#include <charconv>
#include <limits>
#include <numeric>
#include <ostream>

namespace sonc {

namespace {

using i128 = __int128;

std::int64_t narrow(i128 v) {
  if (v > std::numeric_limits<std::int64_t>::max() || v < -std::numeric_limits<std::int64_t>::max())
    throw RationalOverflow("rational arithmetic overflow");
  return static_cast<std::int64_t>(v);
}

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// Normalizes num/den held in 128 bits and narrows to 64 bits.
void assign_normalized(i128 num, i128 den, std::int64_t& out_num, std::int64_t& out_den) {
  if (den == 0) throw std::domain_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  i128 g = gcd128(num, den);
  if (g > 1) {
    num /= g;
    den /= g;
  }
  if (num == 0) den = 1;
  out_num = narrow(num);
  out_den = narrow(den);
}

} // namespace

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
  return static_cast<std::int64_t>(gcd128(a, b));
}

std::int64_t lcm64(std::int64_t a, std::int64_t b) {
  if (a == 0 || b == 0) return 0;
  i128 g = gcd128(a, b);
  i128 l = static_cast<i128>(a) / g * static_cast<i128>(b);
  if (l < 0) l = -l;
  return narrow(l);
}

Rational::Rational(std::int64_t num) : num_(num), den_(1) {
  if (num == std::numeric_limits<std::int64_t>::min()) throw RationalOverflow("rational arithmetic overflow");
}

Rational::Rational(std::int64_t num, std::int64_t den) {
  assign_normalized(num, den, num_, den_);
}

std::string Rational::str() const {
  if (den_ == 1) return std::to_string(num_);
  return std::to_string(num_) + "/" + std::to_string(den_);
}

Rational Rational::parse(std::string_view text) {
  auto parse_int = [&](std::string_view s) {
    std::int64_t v = 0;
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || ec != std::errc() || ptr != s.data() + s.size())
      throw std::invalid_argument("malformed rational '" + std::string(text) + "'");
    return v;
  };
  auto slash = text.find('/');
  if (slash == std::string_view::npos) return Rational(parse_int(text));
  return Rational(parse_int(text.substr(0, slash)), parse_int(text.substr(slash + 1)));
}

Rational Rational::operator-() const {
  Rational r;
  r.num_ = narrow(-static_cast<i128>(num_));
  r.den_ = den_;
  return r;
}

Rational& Rational::operator+=(const Rational& o) {
  assign_normalized(static_cast<i128>(num_) * o.den_ + static_cast<i128>(o.num_) * den_,
                    static_cast<i128>(den_) * o.den_, num_, den_);
  return *this;
}

Rational& Rational::operator-=(const Rational& o) {
  assign_normalized(static_cast<i128>(num_) * o.den_ - static_cast<i128>(o.num_) * den_,
                    static_cast<i128>(den_) * o.den_, num_, den_);
  return *this;
}

Rational& Rational::operator*=(const Rational& o) {
  assign_normalized(static_cast<i128>(num_) * o.num_, static_cast<i128>(den_) * o.den_, num_, den_);
  return *this;
}

Rational& Rational::operator/=(const Rational& o) {
  if (o.num_ == 0) throw std::domain_error("rational division by zero");
  assign_normalized(static_cast<i128>(num_) * o.den_, static_cast<i128>(den_) * o.num_, num_, den_);
  return *this;
}

std::strong_ordering operator<=>(const Rational& a, const Rational& b) {
  i128 lhs = static_cast<i128>(a.num_) * b.den_;
  i128 rhs = static_cast<i128>(b.num_) * a.den_;
  if (lhs < rhs) return std::strong_ordering::less;
  if (lhs > rhs) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

Rational abs(const Rational& r) { return r.sign() < 0 ? -r : r; }

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

} // namespace sonc
