#include "sonc/cover.hpp"

#include <algorithm>
#include <set>

#include "sonc/conic.hpp"
#include "sonc/exact.hpp"

namespace sonc {

std::optional<std::vector<double>> sim_sel(const Exponent& beta, const std::vector<Exponent>& lambda_set,
                                           const Exponent& alpha0) {
  auto it = std::find(lambda_set.begin(), lambda_set.end(), alpha0);
  if (it == lambda_set.end()) throw std::invalid_argument("sim_sel: alpha0 is not in the lambda set");
  const std::size_t n = beta.dim();
  conic::ConicProblem lp;
  const std::size_t x0 = lp.add_nonneg(lambda_set.size());
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = lp.add_row(beta[i].to_double());
    for (std::size_t j = 0; j < lambda_set.size(); ++j) lp.add_coeff(r, x0 + j, lambda_set[j][i].to_double());
  }
  const std::size_t sum_row = lp.add_row(1.0);
  for (std::size_t j = 0; j < lambda_set.size(); ++j) lp.add_coeff(sum_row, x0 + j, 1.0);
  lp.set_objective(x0 + static_cast<std::size_t>(it - lambda_set.begin()), 1.0);
  const auto res = conic::solve_lp_basic(lp);
  if (res.status != conic::SolveStatus::Optimal) return std::nullopt;
  return res.primal;
}

std::optional<CoverEntry> certify_entry(const Exponent& beta, const std::vector<Exponent>& lambda_set,
                                        const std::vector<double>& weights, double tol) {
  std::vector<std::size_t> support;
  std::vector<double> w;
  for (std::size_t j = 0; j < lambda_set.size(); ++j)
    if (weights[j] > tol) {
      support.push_back(j);
      w.push_back(weights[j]);
    }
  for (;;) {
    if (support.size() < 2) return std::nullopt;
    std::vector<Exponent> pts;
    for (auto j : support) pts.push_back(lambda_set[j]);
    if (auto dep = exact::affine_dependency(pts)) {
      // Move along the dependency until one weight vanishes, then drop it.
      std::size_t drop = support.size();
      double step = 0.0;
      for (std::size_t k = 0; k < support.size(); ++k) {
        const double mu = (*dep)[k].to_double();
        if (mu > 0 && (drop == support.size() || w[k] / mu < step)) {
          step = w[k] / mu;
          drop = k;
        }
      }
      for (std::size_t k = 0; k < support.size(); ++k) w[k] -= step * (*dep)[k].to_double();
      support.erase(support.begin() + static_cast<std::ptrdiff_t>(drop));
      w.erase(w.begin() + static_cast<std::ptrdiff_t>(drop));
      continue;
    }
    auto bary = exact::barycentric(pts, beta);
    if (!bary) return std::nullopt;
    bool negative = false, zero = false;
    for (const auto& l : *bary) {
      negative |= l.sign() < 0;
      zero |= l.is_zero();
    }
    if (negative) return std::nullopt;
    if (zero) {
      // beta sits on a face: keep the vertices that carry weight.
      std::vector<std::size_t> keep;
      std::vector<double> kw;
      for (std::size_t k = 0; k < support.size(); ++k)
        if (!(*bary)[k].is_zero()) {
          keep.push_back(support[k]);
          kw.push_back((*bary)[k].to_double());
        }
      support = std::move(keep);
      w = std::move(kw);
      continue;
    }
    return CoverEntry{std::move(pts), beta, std::move(*bary)};
  }
}

Cover simplex_cover(const SupportPartition& partition, const CoverOptions& options) {
  Cover cover;
  const auto& lambda = partition.lambda;
  const Exponent origin(partition.n);
  const bool origin_in_lambda = std::find(lambda.begin(), lambda.end(), origin) != lambda.end();

  std::set<Exponent> U(lambda.begin(), lambda.end());
  std::set<Exponent> V(partition.gamma.begin(), partition.gamma.end());
  std::set<Exponent> covered_beta, dead_beta;
  std::set<std::pair<std::vector<Exponent>, Exponent>> seen;
  const std::size_t max_iter = lambda.size() + partition.gamma.size();
  std::size_t iter = 0;

  auto step = [&]() {
    const Exponent beta = *V.begin();
    Exponent alpha0 = !U.empty() ? *U.begin() : (lambda.empty() ? origin : lambda.front());
    if (options.pin_origin && origin_in_lambda && !covered_beta.count(beta)) alpha0 = origin;
    U.erase(alpha0);
    V.erase(beta);
    ++iter;
    auto weights = lambda.empty() ? std::nullopt : sim_sel(beta, lambda, alpha0);
    std::optional<CoverEntry> entry;
    if (weights) entry = certify_entry(beta, lambda, *weights);
    if (!entry) {
      if (!covered_beta.count(beta) && dead_beta.insert(beta).second) cover.no_certificate.push_back(beta);
      return;
    }
    for (const auto& a : entry->trellis) U.erase(a);
    covered_beta.insert(beta);
    if (seen.emplace(entry->trellis, entry->beta).second) cover.entries.push_back(std::move(*entry));
  };
  auto overflow = [&]() {
    if (iter < max_iter) return false;
    cover.iteration_overflow = true;
    return true;
  };

  while (!U.empty() && !V.empty() && !overflow()) step();
  if (!V.empty()) {
    while (!V.empty() && !overflow()) {
      if (U.empty()) U.insert(lambda.begin(), lambda.end());
      if (U.empty()) {
        // No Lambda at all: nothing can be covered.
        for (const auto& b : V)
          if (dead_beta.insert(b).second) cover.no_certificate.push_back(b);
        V.clear();
        break;
      }
      step();
    }
  } else {
    while (!U.empty() && !overflow()) {
      if (V.empty())
        for (const auto& g : partition.gamma)
          if (!dead_beta.count(g)) V.insert(g);
      if (V.empty()) break;
      step();
    }
  }
  // An iteration cap hit with points left unvisited is reported as such.
  if (cover.iteration_overflow && V.empty() && U.empty()) cover.iteration_overflow = false;

  std::set<Exponent> used;
  for (const auto& e : cover.entries) used.insert(e.trellis.begin(), e.trellis.end());
  for (const auto& a : lambda)
    if (!used.count(a)) cover.uncovered_lambda.push_back(a);
  return cover;
}

bool validate_cover(const Cover& cover, const SupportPartition& partition) {
  const std::set<Exponent> lambda(partition.lambda.begin(), partition.lambda.end());
  std::set<Exponent> covered;
  std::set<Exponent> used;
  for (const auto& e : cover.entries) {
    if (e.trellis.size() < 2 || e.trellis.size() > partition.n + 1) return false;
    if (e.weights.size() != e.trellis.size()) return false;
    const std::set<Exponent> distinct(e.trellis.begin(), e.trellis.end());
    if (distinct.size() != e.trellis.size()) return false;
    for (const auto& a : e.trellis)
      if (!lambda.count(a)) return false;
    if (!exact::affinely_independent(e.trellis)) return false;
    Rational sum;
    Exponent comb(partition.n);
    for (std::size_t i = 0; i < e.trellis.size(); ++i) {
      if (e.weights[i].sign() <= 0) return false;
      sum += e.weights[i];
      comb += e.trellis[i] * e.weights[i];
    }
    if (sum != Rational(1) || comb != e.beta) return false;
    covered.insert(e.beta);
    used.insert(e.trellis.begin(), e.trellis.end());
  }
  const std::set<Exponent> dead(cover.no_certificate.begin(), cover.no_certificate.end());
  for (const auto& g : partition.gamma)
    if (!covered.count(g) && !dead.count(g)) return false;
  std::vector<Exponent> expect;
  for (const auto& a : partition.lambda)
    if (!used.count(a)) expect.push_back(a);
  return expect == cover.uncovered_lambda;
}

} // namespace sonc
