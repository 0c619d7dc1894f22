#include "sonc/exact.hpp"

#include <cmath>
#include <limits>

#include <boost/multiprecision/cpp_int.hpp>

namespace sonc::exact {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;
using BigMatrix = std::vector<std::vector<BigRat>>;

BigRat widen(const Rational& r) { return BigRat(BigInt(r.num()), BigInt(r.den())); }

Rational narrow(const BigRat& r) {
  const BigInt num = boost::multiprecision::numerator(r);
  const BigInt den = boost::multiprecision::denominator(r);
  const BigInt lim(std::numeric_limits<std::int64_t>::max());
  if (num > lim || num < -lim || den > lim) throw RationalOverflow("exact result exceeds 64-bit rational range");
  return Rational(static_cast<std::int64_t>(num), static_cast<std::int64_t>(den));
}

BigMatrix widen(const Matrix& a) {
  BigMatrix out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    out[i].reserve(a[i].size());
    for (const auto& v : a[i]) out[i].push_back(widen(v));
  }
  return out;
}

// Reduced row echelon form in place; returns the pivot column of each pivot row.
std::vector<std::size_t> rref(BigMatrix& m, std::size_t cols) {
  std::vector<std::size_t> pivots;
  std::size_t row = 0;
  for (std::size_t col = 0; col < cols && row < m.size(); ++col) {
    std::size_t sel = row;
    while (sel < m.size() && m[sel][col] == 0) ++sel;
    if (sel == m.size()) continue;
    std::swap(m[sel], m[row]);
    const BigRat inv = 1 / m[row][col];
    for (auto& v : m[row]) v *= inv;
    for (std::size_t r = 0; r < m.size(); ++r) {
      if (r == row || m[r][col] == 0) continue;
      const BigRat f = m[r][col];
      for (std::size_t c = col; c < m[r].size(); ++c) m[r][c] -= f * m[row][c];
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

Matrix affine_system(const std::vector<Exponent>& pts) {
  // Columns are the points lifted by a leading 1.
  const std::size_t n = pts.empty() ? 0 : pts.front().dim();
  Matrix a(n + 1, std::vector<Rational>(pts.size()));
  for (std::size_t j = 0; j < pts.size(); ++j) {
    if (pts[j].dim() != n) throw std::invalid_argument("points of different dimension");
    a[0][j] = 1;
    for (std::size_t i = 0; i < n; ++i) a[i + 1][j] = pts[j][i];
  }
  return a;
}

} // namespace

std::size_t rank(const Matrix& a) {
  if (a.empty()) return 0;
  BigMatrix m = widen(a);
  return rref(m, a.front().size()).size();
}

std::optional<std::vector<Rational>> solve(const Matrix& a, const std::vector<Rational>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("solve: row count mismatch");
  const std::size_t cols = a.empty() ? 0 : a.front().size();
  BigMatrix m = widen(a);
  for (std::size_t i = 0; i < m.size(); ++i) m[i].push_back(widen(b[i]));
  const auto pivots = rref(m, cols);
  if (pivots.size() != cols) return std::nullopt;
  for (std::size_t r = cols; r < m.size(); ++r)
    if (m[r][cols] != 0) return std::nullopt;
  std::vector<Rational> x(cols);
  for (std::size_t r = 0; r < cols; ++r) x[pivots[r]] = narrow(m[r][cols]);
  return x;
}

std::size_t affine_rank(const std::vector<Exponent>& pts) {
  if (pts.empty()) return 0;
  return rank(affine_system(pts)) - 1;
}

bool affinely_independent(const std::vector<Exponent>& pts) {
  return pts.empty() || affine_rank(pts) + 1 == pts.size();
}

std::optional<std::vector<Rational>> barycentric(const std::vector<Exponent>& pts, const Exponent& target) {
  if (pts.empty()) return std::nullopt;
  if (target.dim() != pts.front().dim()) throw std::invalid_argument("barycentric: dimension mismatch");
  std::vector<Rational> rhs(target.dim() + 1);
  rhs[0] = 1;
  for (std::size_t i = 0; i < target.dim(); ++i) rhs[i + 1] = target[i];
  return solve(affine_system(pts), rhs);
}

std::optional<std::vector<Rational>> affine_dependency(const std::vector<Exponent>& pts) {
  if (pts.empty()) return std::nullopt;
  BigMatrix m = widen(affine_system(pts));
  const std::size_t cols = pts.size();
  const auto pivots = rref(m, cols);
  if (pivots.size() == cols) return std::nullopt;
  // Pick the first free column, set it to 1 and back-substitute.
  std::vector<bool> is_pivot(cols, false);
  for (auto p : pivots) is_pivot[p] = true;
  std::size_t free_col = 0;
  while (is_pivot[free_col]) ++free_col;
  std::vector<BigRat> mu(cols, BigRat(0));
  mu[free_col] = 1;
  for (std::size_t r = 0; r < pivots.size(); ++r) mu[pivots[r]] = -m[r][free_col];
  std::vector<Rational> out;
  out.reserve(cols);
  for (const auto& v : mu) out.push_back(narrow(v));
  return out;
}

std::optional<Rational> from_double(double x) {
  if (!std::isfinite(x)) return std::nullopt;
  if (x == 0.0) return Rational(0);
  int exp = 0;
  double mant = std::frexp(x, &exp); // x = mant * 2^exp, 0.5 <= |mant| < 1
  // Scale the mantissa to an integer.
  std::int64_t m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  while (m % 2 == 0 && exp < 0) {
    m /= 2;
    ++exp;
  }
  if (exp >= 0) {
    if (exp > 62) return std::nullopt;
    const __int128 v = static_cast<__int128>(m) << exp;
    if (v > std::numeric_limits<std::int64_t>::max() || v < -std::numeric_limits<std::int64_t>::max())
      return std::nullopt;
    return Rational(static_cast<std::int64_t>(v));
  }
  if (-exp > 62) return std::nullopt;
  return Rational(m, std::int64_t(1) << (-exp));
}

} // namespace sonc::exact
