#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace sonc::conic {

enum class ConeKind { Free, NonNeg, RotatedSOC3 };

/// A contiguous block of variables. RotatedSOC3 blocks have width 3 and hold
/// (a, b, c) with 2ab >= c^2, a >= 0, b >= 0.
struct ConeSpec {
  ConeKind kind;
  std::size_t start;
  std::size_t width;
};

struct Triplet {
  std::size_t row, col;
  double value;
};

/// maximize c'x subject to A x = b, x in the product of the cone blocks.
class ConicProblem {
public:
  /// Each returns the index of the first new variable.
  std::size_t add_free(std::size_t count = 1);
  std::size_t add_nonneg(std::size_t count = 1);
  std::size_t add_rotated_cone();

  std::size_t add_row(double rhs = 0.0);
  /// Accumulates into A(row, col).
  void add_coeff(std::size_t row, std::size_t col, double value);
  void set_objective(std::size_t col, double value);
  void set_rhs(std::size_t row, double value);

  std::size_t num_vars() const { return objective_.size(); }
  std::size_t num_rows() const { return rhs_.size(); }
  const std::vector<ConeSpec>& blocks() const { return blocks_; }
  const std::vector<Triplet>& entries() const { return entries_; }
  const std::vector<double>& rhs() const { return rhs_; }
  const std::vector<double>& objective() const { return objective_; }
  bool has_rotated_cones() const;

  /// Throws std::invalid_argument when indices are out of range or blocks
  /// do not partition the variables.
  void validate() const;

private:
  std::size_t add_block(ConeKind kind, std::size_t width);

  std::vector<ConeSpec> blocks_;
  std::vector<Triplet> entries_;
  std::vector<double> rhs_;
  std::vector<double> objective_;
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, NearOptimal, IterLimit };

const char* to_string(SolveStatus s);

struct SolverSettings {
  double tol = 1e-8;
  int max_iter = 200;
  bool verbose = false;
};

struct SolveResult {
  SolveStatus status = SolveStatus::IterLimit;
  std::vector<double> primal;
  /// Multipliers of the equality rows.
  std::vector<double> dual;
  double objective = 0.0;
  double dual_objective = 0.0;
  double gap = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  double solve_time_s = 0.0;
};

/// Homogeneous self-dual interior-point method with Nesterov-Todd scaling
/// and Mehrotra predictor-corrector steps.
SolveResult solve(const ConicProblem& p, const SolverSettings& settings = {});
SolveResult solve(const ConicProblem& p, double tol, int max_iter);

/// Two-phase primal simplex with Bland's rule. Returns a basic optimal
/// solution. Throws std::invalid_argument if p contains rotated cones.
SolveResult solve_lp_basic(const ConicProblem& p, double tol = 1e-9);

/// Conic Benchmark Format, version 3.
std::string export_cbf(const ConicProblem& p);

} // namespace sonc::conic
