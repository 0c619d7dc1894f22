#include "sonc/local_min.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace sonc {

namespace {

constexpr double kDiverged = 1e8;

bool finite_point(const std::vector<double>& x) {
  for (double v : x)
    if (!std::isfinite(v) || std::abs(v) > kDiverged) return false;
  return true;
}

double norm(const std::vector<double>& g) {
  double s = 0.0;
  for (double v : g) s += v * v;
  return std::sqrt(s);
}

} // namespace

LocalMinResult local_descent(const SparsePoly& f, std::vector<double> x) {
  const std::size_t n = f.n();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> g(n), trial(n), gt(n);
  double fx = eval_gradient(f, x, g);
  double step = 1.0;

  for (int it = 0; it < 2000 && norm(g) > 1e-6; ++it) {
    const double gg = norm(g) * norm(g);
    double ft = inf;
    step = std::min(step * 2.0, 1.0);
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] - step * g[i];
      ft = eval(f, trial);
      if (std::isfinite(ft) && ft <= fx - 1e-4 * step * gg) break;
      step *= 0.5;
    }
    if (!(ft < fx)) break;
    x = trial;
    fx = eval_gradient(f, x, g);
    // Escaping to infinity: f(x) is still a valid upper bound.
    if (!finite_point(x)) return {std::isfinite(fx) ? fx : inf, x};
  }

  // Newton polish.
  Eigen::MatrixXd h(n, n);
  Eigen::VectorXd grad(n);
  for (int it = 0; it < 50; ++it) {
    fx = eval_gradient(f, x, g);
    if (norm(g) < 1e-10) break;
    for (std::size_t j = 0; j < n; ++j) {
      const double hj = 1e-6 * std::max(1.0, std::abs(x[j]));
      trial = x;
      trial[j] += hj;
      eval_gradient(f, trial, gt);
      std::vector<double> gm(n);
      trial[j] = x[j] - hj;
      eval_gradient(f, trial, gm);
      for (std::size_t i = 0; i < n; ++i) h(i, j) = (gt[i] - gm[i]) / (2 * hj);
    }
    h = 0.5 * (h + h.transpose()).eval();
    for (std::size_t i = 0; i < n; ++i) grad(static_cast<Eigen::Index>(i)) = g[i];
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    Eigen::VectorXd dir = -grad;
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      const Eigen::VectorXd nd = ldlt.solve(-grad);
      if (nd.allFinite() && nd.dot(grad) < 0) dir = nd;
    }
    double t = 1.0, ft = inf;
    for (int ls = 0; ls < 60; ++ls) {
      for (std::size_t i = 0; i < n; ++i) trial[i] = x[i] + t * dir(static_cast<Eigen::Index>(i));
      ft = eval(f, trial);
      if (ft <= fx + 1e-4 * t * dir.dot(grad)) break;
      t *= 0.5;
    }
    if (!(ft <= fx)) break;
    x = trial;
  }
  fx = eval(f, x);
  if (!finite_point(x) || !std::isfinite(fx)) return {inf, x};
  return {fx, x};
}

LocalMinResult local_minimize(const SparsePoly& f, int starts, std::uint64_t seed) {
  if (!f.has_integer_exponents()) throw std::invalid_argument("local_minimize: integer exponents required");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  LocalMinResult best = local_descent(f, std::vector<double>(f.n(), 1.0));
  for (int s = 0; s < starts; ++s) {
    std::vector<double> x0(f.n());
    for (auto& v : x0) v = dist(rng);
    auto r = local_descent(f, std::move(x0));
    if (r.value < best.value) best = std::move(r);
  }
  return best;
}

double local_upper_bound(const SparsePoly& f, int starts, std::uint64_t seed) {
  return local_minimize(f, starts, seed).value;
}

} // namespace sonc
