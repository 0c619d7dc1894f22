#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sonc/certify.hpp"
#include "sonc/conic.hpp"
#include "sonc/cover.hpp"
#include "sonc/poly.hpp"
#include "sonc/socp_builder.hpp"

namespace sonc {

struct PipelineConfig {
  conic::SolverSettings solver;
  CoverOptions cover;
  /// Absolute floor of the verification tolerance; the effective value is
  /// max(verify_tol, 10 * solver.tol * (1 + max|coeff|)).
  double verify_tol = 1e-6;
  int verify_samples = 200;
};

enum class BoundStatus { Optimal, NearOptimal, NearOptimalUnverified, NoCertificate, SolverFailure, StructuralError };

const char* to_string(BoundStatus s);

struct PipelineReport {
  BoundStatus status = BoundStatus::SolverFailure;
  std::string message;
  double time_total_s = 0.0;
  double time_solver_s = 0.0;
  int iterations = 0;
  std::size_t cover_entries = 0;
  std::size_t cone_blocks = 0;
  std::size_t rows = 0;
  /// False when signs could not be restored and the PN certificate is kept.
  bool signs_restored = true;
  double verify_tol = 0.0;
  VerifyReport verification;
};

struct BoundResult {
  /// -inf when no certificate can exist, NaN when the solver failed.
  double xi = 0.0;
  Certificate cert;
  PipelineReport report;
};

/// Everything up to the cone program.
struct PreparedProblem {
  SparsePoly pn{0};
  SignMap sign_map;
  SupportPartition partition;
  Cover cover;
  std::vector<MediatedSet> mediated;
  /// Empty when some inner point cannot be covered.
  std::optional<SocpInstance> socp;
};

/// PN form, support split with the origin forced into Lambda, cover and one
/// mediated set per cover entry.
PreparedProblem prepare(const SparsePoly& f, const PipelineConfig& config = {});

/// Certified lower bound on f over R^n.
BoundResult sonc_lower_bound(const SparsePoly& f, const PipelineConfig& config = {});

} // namespace sonc
