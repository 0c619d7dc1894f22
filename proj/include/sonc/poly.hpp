#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "sonc/exponent.hpp"

namespace sonc {

/// Terms in canonical order: descending lexicographic exponent.
using TermMap = std::map<Exponent, double, std::greater<>>;

/// Sparse multivariate polynomial sum c_a x^a with rational exponents.
///
/// No stored coefficient is zero and every exponent has dimension n().
class SparsePoly {
public:
  SparsePoly() = default;
  explicit SparsePoly(std::size_t n) : n_(n) {}
  SparsePoly(std::size_t n, const std::vector<std::pair<Exponent, double>>& terms);

  std::size_t n() const { return n_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool empty() const { return terms_.empty(); }

  /// Adds c to the coefficient at e; the term disappears if it cancels.
  void add_term(const Exponent& e, double c);
  double coeff(const Exponent& e) const;
  bool has_term(const Exponent& e) const { return terms_.count(e) != 0; }

  bool has_integer_exponents() const;
  /// lcm of all exponent denominators (1 for integer exponents).
  std::int64_t exponent_denominator_lcm() const;
  double max_abs_coeff() const;

  friend bool operator==(const SparsePoly&, const SparsePoly&) = default;

private:
  std::size_t n_ = 0;
  TermMap terms_;
};

class PolyParseError : public std::runtime_error {
public:
  PolyParseError(const std::string& msg, std::size_t pos);
  std::size_t position() const { return pos_; }

private:
  std::size_t pos_;
};

/// Parses the text grammar. Variables are x1..xn; '*' between factors is
/// optional; exponents are integers or p/q, optionally parenthesised.
/// Throws PolyParseError on syntax errors and on variables beyond n.
SparsePoly parse_poly(std::string_view text, std::size_t n);
/// Same, with n taken as the largest variable index that occurs.
SparsePoly parse_poly(std::string_view text);
std::string to_string(const SparsePoly& f);

struct SupportPartition {
  std::size_t n = 0;
  /// Even lattice points with positive coefficient, in canonical term order.
  std::vector<Exponent> lambda;
  std::vector<double> lambda_coeff;
  /// Remaining support; d holds the negated stored coefficient.
  std::vector<Exponent> gamma;
  std::vector<double> gamma_d;
};

/// Throws std::invalid_argument on non-integer exponents.
SupportPartition partition_support(const SparsePoly& f);
SparsePoly reassemble(const SupportPartition& part);

struct SignMap {
  std::set<Exponent> flipped;
  bool empty() const { return flipped.empty(); }
};

/// Replaces every non-Lambda coefficient by -|c| and records the exponents
/// whose sign changed.
std::pair<SparsePoly, SignMap> to_pn(const SparsePoly& f);
/// Negates the coefficients at the flipped exponents.
SparsePoly apply_sign_map(const SparsePoly& f, const SignMap& sm);

SparsePoly substitute_power(const SparsePoly& f, std::int64_t r);

/// Throws std::domain_error for a negative base under a fractional power.
double eval(const SparsePoly& f, const std::vector<double>& x);
/// Gradient and value in one pass; integer exponents only.
double eval_gradient(const SparsePoly& f, const std::vector<double>& x, std::vector<double>& grad);

/// f = sum c_a x^a - d x^beta. A monomial square has no beta.
struct CircuitData {
  std::vector<Exponent> trellis;
  std::vector<double> coefficients;
  std::optional<Exponent> beta;
  double d = 0.0;
  std::vector<Rational> barycentric;

  bool is_monomial_square() const { return !beta.has_value(); }
};

std::optional<CircuitData> is_circuit(const SparsePoly& f);
/// Builds circuit data from an explicit trellis and inner point; nullopt if
/// beta is not in the relative interior of an affinely independent trellis.
std::optional<CircuitData> make_circuit(const std::vector<Exponent>& trellis, const std::vector<double>& coefficients,
                                        const Exponent& beta, double d);
double circuit_number(const CircuitData& c);
bool circuit_nonneg(const CircuitData& c, double rel_tol = 1e-9);

} // namespace sonc
