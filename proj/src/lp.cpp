// Dense two-phase primal simplex with Bland's rule. Meant for the small
// vertex-selection LPs of the cover step, where a basic solution matters
// more than speed.

#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>

#include <Eigen/Dense>

#include "sonc/conic.hpp"

namespace sonc::conic {

namespace {

class Tableau {
public:
  Tableau(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_((rows + 1) * (cols + 1), 0.0), basis_(rows) {}

  double& at(std::size_t r, std::size_t c) { return t_[r * (n_ + 1) + c]; }
  double at(std::size_t r, std::size_t c) const { return t_[r * (n_ + 1) + c]; }
  double& rhs(std::size_t r) { return at(r, n_); }
  // Row m_ holds the reduced costs; its rhs is minus the objective value.
  double& cost(std::size_t c) { return at(m_, c); }

  std::size_t rows() const { return m_; }
  std::size_t cols() const { return n_; }
  std::vector<std::size_t>& basis() { return basis_; }

  void pivot(std::size_t r, std::size_t c) {
    const double piv = at(r, c);
    for (std::size_t j = 0; j <= n_; ++j) at(r, j) /= piv;
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r) continue;
      const double f = at(i, c);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
      at(i, c) = 0.0;
    }
    basis_[r] = c;
  }

  // Minimizes over the columns allowed by `usable`. Returns false if unbounded.
  bool optimize(const std::vector<bool>& usable, double tol, int& iters) {
    for (;;) {
      std::size_t enter = n_;
      for (std::size_t j = 0; j < n_; ++j)
        if (usable[j] && cost(j) < -tol) {
          enter = j;
          break;
        }
      if (enter == n_) return true;
      std::size_t leave = m_;
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = at(i, enter);
        if (a <= tol) continue;
        const double ratio = rhs(i) / a;
        if (ratio < best - 1e-12 || (std::abs(ratio - best) <= 1e-12 && basis_[i] < basis_[leave])) {
          best = ratio;
          leave = i;
        }
      }
      if (leave == m_) return false;
      pivot(leave, enter);
      ++iters;
      if (iters > 100000) throw std::runtime_error("simplex iteration limit");
    }
  }

  void drop_row(std::size_t r) {
    // Swap with the last constraint row and shrink.
    const std::size_t last = m_ - 1;
    if (r != last) {
      for (std::size_t j = 0; j <= n_; ++j) std::swap(at(r, j), at(last, j));
      std::swap(basis_[r], basis_[last]);
    }
    for (std::size_t j = 0; j <= n_; ++j) {
      at(last, j) = at(m_, j);
    }
    t_.resize(m_ * (n_ + 1));
    basis_.pop_back();
    --m_;
  }

private:
  std::size_t m_, n_;
  std::vector<double> t_;
  std::vector<std::size_t> basis_;
};

} // namespace

SolveResult solve_lp_basic(const ConicProblem& p, double tol) {
  const auto t0 = std::chrono::steady_clock::now();
  p.validate();
  if (p.has_rotated_cones()) throw std::invalid_argument("solve_lp_basic: rotated cones are not supported");

  // Column layout: each nonnegative variable once, each free one as x+ - x-.
  struct Col {
    std::size_t var;
    double sign;
  };
  std::vector<Col> cols;
  for (const auto& b : p.blocks())
    for (std::size_t j = b.start; j < b.start + b.width; ++j) {
      cols.push_back({j, 1.0});
      if (b.kind == ConeKind::Free) cols.push_back({j, -1.0});
    }
  std::vector<std::vector<std::size_t>> var_cols(p.num_vars());
  for (std::size_t k = 0; k < cols.size(); ++k) var_cols[cols[k].var].push_back(k);

  const std::size_t m = p.num_rows(), nc = cols.size();
  Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(p.num_vars()));
  for (const auto& e : p.entries()) A(static_cast<Eigen::Index>(e.row), static_cast<Eigen::Index>(e.col)) += e.value;
  std::vector<double> row_sign(m, 1.0);
  for (std::size_t i = 0; i < m; ++i)
    if (p.rhs()[i] < 0) row_sign[i] = -1.0;

  // Phase one over [structural | artificial] columns.
  Tableau tab(m, nc + m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t k = 0; k < nc; ++k)
      tab.at(i, k) = row_sign[i] * cols[k].sign * A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(cols[k].var));
    tab.at(i, nc + i) = 1.0;
    tab.rhs(i) = row_sign[i] * p.rhs()[i];
    tab.basis()[i] = nc + i;
  }
  for (std::size_t k = 0; k < nc; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += tab.at(i, k);
    tab.cost(k) = -s;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < m; ++i) total += tab.rhs(i);
  tab.cost(nc + m) = -total;

  SolveResult res;
  int iters = 0;
  std::vector<bool> usable(nc + m, true);
  tab.optimize(usable, tol, iters);
  double bnorm = 0.0;
  for (double v : p.rhs()) bnorm = std::max(bnorm, std::abs(v));
  if (-tab.cost(nc + m) > tol * (1.0 + bnorm)) {
    res.status = SolveStatus::Infeasible;
    res.iterations = iters;
    res.primal.assign(p.num_vars(), 0.0);
    res.dual.assign(m, 0.0);
    return res;
  }
  // Drive artificials out of the basis; rows where that fails are redundant.
  std::vector<std::size_t> row_of(m);
  for (std::size_t i = 0; i < m; ++i) row_of[i] = i;
  for (std::size_t i = 0; i < tab.rows();) {
    if (tab.basis()[i] < nc) {
      ++i;
      continue;
    }
    std::size_t enter = nc;
    for (std::size_t k = 0; k < nc; ++k)
      if (std::abs(tab.at(i, k)) > tol) {
        enter = k;
        break;
      }
    if (enter < nc) {
      tab.pivot(i, enter);
      ++i;
    } else {
      tab.drop_row(i);
    }
  }

  // Phase two: minimize -c'x over the structural columns.
  for (std::size_t j = 0; j <= nc + m; ++j) tab.cost(j) = 0.0;
  for (std::size_t k = 0; k < nc; ++k) tab.cost(k) = -cols[k].sign * p.objective()[cols[k].var];
  for (std::size_t i = 0; i < tab.rows(); ++i) {
    const std::size_t bcol = tab.basis()[i];
    const double cb = tab.cost(bcol);
    if (cb == 0.0) continue;
    for (std::size_t j = 0; j <= nc + m; ++j) tab.cost(j) -= cb * tab.at(i, j);
  }
  for (std::size_t j = nc; j < nc + m; ++j) usable[j] = false;
  const bool bounded = tab.optimize(usable, tol, iters);

  res.iterations = iters;
  std::vector<double> colval(nc, 0.0);
  for (std::size_t i = 0; i < tab.rows(); ++i)
    if (tab.basis()[i] < nc) colval[tab.basis()[i]] = std::max(0.0, tab.rhs(i));
  res.primal.assign(p.num_vars(), 0.0);
  for (std::size_t k = 0; k < nc; ++k) res.primal[cols[k].var] += cols[k].sign * colval[k];
  res.status = bounded ? SolveStatus::Optimal : SolveStatus::Unbounded;
  res.objective = 0.0;
  for (std::size_t j = 0; j < p.num_vars(); ++j) res.objective += p.objective()[j] * res.primal[j];

  // Row multipliers from the final basis: B' u = c_B on the independent rows.
  res.dual.assign(m, 0.0);
  if (bounded && tab.rows() > 0) {
    std::vector<std::size_t> basic;
    for (std::size_t i = 0; i < tab.rows(); ++i) basic.push_back(tab.basis()[i]);
    Eigen::MatrixXd B(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(basic.size()));
    Eigen::VectorXd cb(static_cast<Eigen::Index>(basic.size()));
    for (std::size_t k = 0; k < basic.size(); ++k) {
      const auto& col = cols[basic[k]];
      B.col(static_cast<Eigen::Index>(k)) = col.sign * A.col(static_cast<Eigen::Index>(col.var));
      cb[static_cast<Eigen::Index>(k)] = col.sign * p.objective()[col.var];
    }
    Eigen::VectorXd u = B.transpose().completeOrthogonalDecomposition().solve(cb);
    for (std::size_t i = 0; i < m; ++i) res.dual[i] = u[static_cast<Eigen::Index>(i)];
    res.dual_objective = 0.0;
    for (std::size_t i = 0; i < m; ++i) res.dual_objective += p.rhs()[i] * res.dual[i];
    res.gap = std::abs(res.objective - res.dual_objective);
  }
  res.solve_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

} // namespace sonc::conic
