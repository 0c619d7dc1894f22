#pragma once

#include <optional>
#include <vector>

#include "sonc/exponent.hpp"
#include "sonc/rational.hpp"

// Exact linear algebra over Q. Elimination runs on arbitrary-precision
// rationals internally; results are narrowed back to Rational and throw
// RationalOverflow if they do not fit.
namespace sonc::exact {

using Matrix = std::vector<std::vector<Rational>>;

/// Rank of a dense rational matrix.
std::size_t rank(const Matrix& a);

/// Unique solution of a x = b, or nullopt when a is singular or the system is
/// inconsistent. a may be rectangular (rows >= cols).
std::optional<std::vector<Rational>> solve(const Matrix& a, const std::vector<Rational>& b);

/// Dimension of the affine hull of the points, i.e. rank of {p_i - p_0}.
std::size_t affine_rank(const std::vector<Exponent>& pts);

bool affinely_independent(const std::vector<Exponent>& pts);

/// Affine coordinates of target with respect to pts: lambda with
/// sum lambda_i p_i = target and sum lambda_i = 1. nullopt unless pts are
/// affinely independent and target lies in their affine hull.
std::optional<std::vector<Rational>> barycentric(const std::vector<Exponent>& pts, const Exponent& target);

/// A nonzero mu with sum mu_i = 0 and sum mu_i p_i = 0, or nullopt when the
/// points are affinely independent.
std::optional<std::vector<Rational>> affine_dependency(const std::vector<Exponent>& pts);

/// Exact rational value of a finite double (every double is dyadic).
/// nullopt when it does not fit in 64-bit numerator/denominator.
std::optional<Rational> from_double(double x);

} // namespace sonc::exact
