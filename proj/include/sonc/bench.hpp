#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sonc/pipeline.hpp"
#include "sonc/poly.hpp"

namespace sonc {

enum class BenchClass { StandardSimplex, GeneralSimplex, ArbitraryPolytope };

const char* to_string(BenchClass c);
/// Accepts "standard", "general", "arbitrary" or the enumerator names.
BenchClass parse_bench_class(const std::string& s);

struct BenchSpec {
  BenchClass cls = BenchClass::StandardSimplex;
  std::size_t n = 2;
  int d = 4;
  std::size_t t = 4;
  /// Minimum number of inner terms (ArbitraryPolytope only).
  std::size_t l = 0;
  std::uint64_t seed = 0;
  /// Literal polynomial that replaces the generator when set.
  std::optional<std::string> poly;
};

/// Random instance of the given class, deterministic per seed.
///
/// StandardSimplex: vertices 0 and d e_i with coefficients in [1, 2]; t-n-1
/// distinct interior lattice points drawn uniformly from positive
/// compositions of d.
/// GeneralSimplex: the origin plus n random even points of degree <= d,
/// affinely independent, coefficients in [1, 2]; t-n-1 distinct lattice
/// points drawn uniformly from the strict interior of the simplex (rounded
/// random convex combinations when there are too many lattice points to
/// enumerate).
/// ArbitraryPolytope: the origin plus at least n+1 further random even points,
/// max(n+2, t/2) Lambda terms in total, capped so that at least max(l, 1)
/// inner terms remain; inner points are rounded convex combinations inside
/// the hull.
/// Inner coefficients have magnitude in [0.1, 1]; even inner points are
/// negative, odd ones negative or positive with equal probability.
/// Throws std::invalid_argument if the spec cannot be met.
SparsePoly gen_bench(const BenchSpec& spec);

struct BenchRow {
  BenchSpec spec;
  double xi_socp = 0.0;
  double xi_min = 0.0;
  double gap = 0.0;
  double time_total_s = 0.0;
  double time_solver_s = 0.0;
  int iters = 0;
  std::string status;
  double residual = 0.0;
};

struct BenchOptions {
  PipelineConfig config;
  int starts = 32;
  /// 0 picks the hardware concurrency.
  unsigned threads = 0;
  /// Write zero times so the CSV is reproducible byte for byte.
  bool record_times = true;
};

/// |xi_min - xi_lb| / |xi_min|, or the absolute difference when xi_min is 0.
double relative_gap(double xi_min, double xi_lb);

BenchRow run_one(const BenchSpec& spec, const BenchOptions& options = {});

/// Rows in spec order. Failures are recorded in the status column.
std::vector<BenchRow> run_bench(const std::vector<BenchSpec>& specs, const BenchOptions& options = {});

std::string csv_header();
void write_csv(std::ostream& os, const std::vector<BenchRow>& rows);

} // namespace sonc
