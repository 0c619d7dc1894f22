#pragma once

#include <optional>
#include <vector>

#include "sonc/exponent.hpp"
#include "sonc/poly.hpp"

namespace sonc {

struct CoverEntry {
  std::vector<Exponent> trellis;
  Exponent beta;
  /// Exact barycentric weights, one per trellis vertex.
  std::vector<Rational> weights;
};

struct Cover {
  std::vector<CoverEntry> entries;
  /// Lambda points used by no entry.
  std::vector<Exponent> uncovered_lambda;
  /// Gamma points outside conv(Lambda): no certificate can exist.
  std::vector<Exponent> no_certificate;
  bool iteration_overflow = false;

  bool complete() const { return no_certificate.empty() && !iteration_overflow; }
};

/// Solves max lambda_{alpha0} s.t. sum lambda_a a = beta, sum lambda_a = 1,
/// lambda >= 0 and returns a basic optimal solution indexed like lambda_set.
/// nullopt when beta is outside conv(lambda_set).
std::optional<std::vector<double>> sim_sel(const Exponent& beta, const std::vector<Exponent>& lambda_set,
                                           const Exponent& alpha0);

/// Turns an approximate barycentric solution into an exact entry: support
/// above tol, exact weights, pruned to an affinely independent subset.
/// nullopt if the support does not contain beta exactly.
std::optional<CoverEntry> certify_entry(const Exponent& beta, const std::vector<Exponent>& lambda_set,
                                        const std::vector<double>& weights, double tol = 1e-9);

struct CoverOptions {
  /// Use the origin as alpha0 for the first simplex of each inner point when
  /// the origin is in Lambda; otherwise alpha0 is the smallest point of U.
  bool pin_origin = true;
};

/// Covers every Gamma point by a trellis drawn from Lambda. Selection picks
/// the lexicographically smallest remaining point on each side.
Cover simplex_cover(const SupportPartition& partition, const CoverOptions& options = {});

bool validate_cover(const Cover& cover, const SupportPartition& partition);

} // namespace sonc
