#pragma once

#include <cstdint>
#include <vector>

#include "sonc/poly.hpp"

namespace sonc {

struct LocalMinResult {
  double value = 0.0;
  std::vector<double> x;
};

/// Gradient descent with Armijo backtracking from x0, then Newton steps with a
/// finite-difference Hessian. Descent stops once a coordinate exceeds 1e8;
/// value is f at the final point, or +inf if that is not finite.
LocalMinResult local_descent(const SparsePoly& f, std::vector<double> x0);

/// Best local minimum over the all-ones point and `starts` uniform points of
/// [-2, 2]^n. Integer exponents only. Always an upper bound on inf f.
LocalMinResult local_minimize(const SparsePoly& f, int starts = 32, std::uint64_t seed = 0);

double local_upper_bound(const SparsePoly& f, int starts = 32, std::uint64_t seed = 0);

} // namespace sonc
