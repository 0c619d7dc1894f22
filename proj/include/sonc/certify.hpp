#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sonc/medseq.hpp"
#include "sonc/poly.hpp"
#include "sonc/socp_builder.hpp"

namespace sonc {

/// Raised on non-finite certificate data.
class VerificationError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ExactCheck {
  bool ok = false;
  double max_residual = 0.0;
  /// Common denominator of the substitution x -> x^r; 0 when it exceeds
  /// the bound and terms were grouped by rational exponent instead.
  std::int64_t r = 1;
};

struct VerifyReport {
  double exact_residual = 0.0;
  double numeric_residual = 0.0;
  std::int64_t r_used = 1;
  bool pass = false;
};

struct VerifyOptions {
  double tol = 1e-6;
  int samples = 200;
  std::uint64_t seed = 1;
  std::int64_t max_denominator = std::int64_t{1} << 40;
};

/// Max-abs coefficient of squares + monomials - (f - xi) after clearing
/// exponent denominators. Every double is converted exactly, so the residual
/// is the true one for the stored numbers. A certificate still in PN form is
/// compared against the PN form of f.
ExactCheck verify_exact(const Certificate& cert, const SparsePoly& f, double tol = 1e-6,
                        std::int64_t max_denominator = std::int64_t{1} << 40);

/// Max pointwise discrepancy at random points of (0, 2)^n.
double verify_numeric(const Certificate& cert, const SparsePoly& f, int samples, std::uint64_t seed);

VerifyReport verify(const Certificate& cert, const SparsePoly& f, const VerifyOptions& options = {});

/// Binomial-square decomposition of one nonnegative circuit along a mediated set.
struct CircuitDecomposition {
  std::vector<MediatedTriple> triples;
  /// Weight of (p x^{v/2} - q x^{w/2})^2, one per triple.
  std::vector<double> coefficients;
  /// Set when every weight and remainder is rational (minimizer at 1).
  bool exact = false;
  std::vector<Rational> exact_coefficients;
  std::vector<std::pair<Rational, Exponent>> exact_monomials;
  Certificate cert;
};

/// Solves the coefficient-matching system of a circuit on ms. Weights are
/// |d| x*^beta N_u / 2, where N_u is the expected number of visits to u of
/// the midpoint walk started at beta and x* the minimizer of the tight
/// circuit. Throws std::domain_error if the circuit is not nonnegative and
/// std::invalid_argument if ms is not built on its trellis and beta.
CircuitDecomposition verify_circuit_decomposition(const CircuitData& c, const MediatedSet& ms);

/// Residual of an exact decomposition against f, in rational arithmetic.
ExactCheck verify_exact(const CircuitDecomposition& dec, const SparsePoly& f, double tol = 0.0);

/// sum c_alpha x^alpha - d x^beta.
SparsePoly circuit_poly(const CircuitData& c);

} // namespace sonc
