// Primal-dual interior-point method on the homogeneous self-dual embedding.
//
// Internally the problem is put in minimization form over free variables,
// the nonnegative orthant and standard 3-dimensional second-order cones
// {t >= ||(u, v)||}. A rotated block (a, b, c) is mapped to the standard cone
// by the orthogonal involution R(a, b, c) = ((a+b)/sqrt2, (a-b)/sqrt2, c),
// which carries 2ab >= c^2 onto t^2 >= u^2 + v^2.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include "sonc/conic.hpp"

namespace sonc::conic {

namespace {

using Vec = Eigen::VectorXd;
using SpMat = Eigen::SparseMatrix<double>;

const double kInvSqrt2 = 1.0 / std::sqrt(2.0);

struct Internal {
  std::size_t m = 0, nf = 0, nl = 0, nq = 0;
  SpMat A;
  Vec b, c;
  // Original column(s) behind each internal free/nonneg column; the first
  // receives the value.
  std::vector<std::vector<std::size_t>> lin_cols;
  // Original (a, b, c) columns of each cone.
  std::vector<std::array<std::size_t, 3>> cone_cols;
  std::vector<std::size_t> row_orig;
  std::vector<double> row_scale;
  bool trivially_infeasible = false;

  std::size_t n() const { return nf + nl + 3 * nq; }
  std::size_t cone_start() const { return nf + nl; }
};

Internal presolve(const ConicProblem& p) {
  Internal in;
  const std::size_t m0 = p.num_rows();

  // Column contents in original coordinates.
  std::vector<std::vector<std::pair<std::size_t, double>>> cols(p.num_vars());
  {
    std::map<std::pair<std::size_t, std::size_t>, double> acc;
    for (const auto& t : p.entries()) acc[{t.col, t.row}] += t.value;
    for (const auto& [key, v] : acc)
      if (v != 0.0) cols[key.first].emplace_back(key.second, v);
  }

  // Drop empty rows; a nonzero right-hand side there is infeasible.
  std::vector<bool> used(m0, false);
  for (const auto& col : cols)
    for (const auto& [r, v] : col) used[r] = true;
  std::vector<std::size_t> new_row(m0, 0);
  for (std::size_t r = 0; r < m0; ++r) {
    if (used[r]) {
      new_row[r] = in.row_orig.size();
      in.row_orig.push_back(r);
    } else if (p.rhs()[r] != 0.0) {
      in.trivially_infeasible = true;
    }
  }
  in.m = in.row_orig.size();

  // Row scaling to unit max-abs.
  std::vector<double> rmax(m0, 0.0);
  for (const auto& col : cols)
    for (const auto& [r, v] : col) rmax[r] = std::max(rmax[r], std::abs(v));
  in.row_scale.resize(in.m);
  for (std::size_t i = 0; i < in.m; ++i) in.row_scale[i] = 1.0 / rmax[in.row_orig[i]];

  // Classify columns, merging identical nonnegative ones.
  std::vector<std::size_t> free_cols, lin_cols;
  std::map<std::pair<double, std::vector<std::pair<std::size_t, double>>>, std::size_t> seen;
  for (const auto& blk : p.blocks()) {
    for (std::size_t j = blk.start; j < blk.start + blk.width; ++j) {
      if (blk.kind == ConeKind::Free) {
        in.lin_cols.push_back({j});
        free_cols.push_back(j);
      }
    }
  }
  in.nf = free_cols.size();
  for (const auto& blk : p.blocks()) {
    if (blk.kind != ConeKind::NonNeg) continue;
    for (std::size_t j = blk.start; j < blk.start + blk.width; ++j) {
      auto key = std::make_pair(p.objective()[j], cols[j]);
      auto it = seen.find(key);
      if (it != seen.end()) {
        in.lin_cols[it->second].push_back(j);
        continue;
      }
      seen.emplace(std::move(key), in.lin_cols.size());
      in.lin_cols.push_back({j});
    }
  }
  in.nl = in.lin_cols.size() - in.nf;
  for (const auto& blk : p.blocks())
    if (blk.kind == ConeKind::RotatedSOC3) in.cone_cols.push_back({blk.start, blk.start + 1, blk.start + 2});
  in.nq = in.cone_cols.size();

  // Assemble the minimization data.
  const std::size_t n = in.n();
  std::vector<Eigen::Triplet<double>> trip;
  in.c = Vec::Zero(static_cast<Eigen::Index>(n));
  auto push_col = [&](std::size_t internal, std::size_t orig, double scale) {
    for (const auto& [r, v] : cols[orig])
      trip.emplace_back(static_cast<int>(new_row[r]), static_cast<int>(internal),
                        scale * v * in.row_scale[new_row[r]]);
    in.c[static_cast<Eigen::Index>(internal)] += -scale * p.objective()[orig];
  };
  for (std::size_t j = 0; j < in.lin_cols.size(); ++j) push_col(j, in.lin_cols[j].front(), 1.0);
  for (std::size_t k = 0; k < in.nq; ++k) {
    const std::size_t base = in.cone_start() + 3 * k;
    const auto& oc = in.cone_cols[k];
    push_col(base, oc[0], kInvSqrt2);
    push_col(base, oc[1], kInvSqrt2);
    push_col(base + 1, oc[0], kInvSqrt2);
    push_col(base + 1, oc[1], -kInvSqrt2);
    push_col(base + 2, oc[2], 1.0);
  }
  in.A.resize(static_cast<Eigen::Index>(in.m), static_cast<Eigen::Index>(n));
  in.A.setFromTriplets(trip.begin(), trip.end());
  in.A.prune(0.0);
  in.b.resize(static_cast<Eigen::Index>(in.m));
  for (std::size_t i = 0; i < in.m; ++i) in.b[static_cast<Eigen::Index>(i)] = p.rhs()[in.row_orig[i]] * in.row_scale[i];
  return in;
}

// x0^2 - |x1|^2 in factored form, accurate near the cone boundary.
double soc_residual(const double* x) {
  const double r = std::hypot(x[1], x[2]);
  return (x[0] - r) * (x[0] + r);
}

// Nesterov-Todd scaling of one second-order cone block.
struct SocScaling {
  double eta = 1.0;
  double w0 = 1.0;
  double w1[2] = {0.0, 0.0};
  double W[3][3];
  double W2[3][3];

  bool update(const double* x, const double* s) {
    const double xr = soc_residual(x);
    const double sr = soc_residual(s);
    if (!(xr > 0) || !(sr > 0) || x[0] <= 0 || s[0] <= 0) return false;
    const double xn = std::sqrt(xr), sn = std::sqrt(sr);
    const double xb[3] = {x[0] / xn, x[1] / xn, x[2] / xn};
    const double sb[3] = {s[0] / sn, s[1] / sn, s[2] / sn};
    const double dot = xb[0] * sb[0] + xb[1] * sb[1] + xb[2] * sb[2];
    const double gamma = std::sqrt((1.0 + dot) / 2.0);
    w0 = (sb[0] + xb[0]) / (2 * gamma);
    w1[0] = (sb[1] - xb[1]) / (2 * gamma);
    w1[1] = (sb[2] - xb[2]) / (2 * gamma);
    eta = std::sqrt(sn / xn);
    const double f = 1.0 / (1.0 + w0);
    W[0][0] = eta * w0;
    W[0][1] = W[1][0] = eta * w1[0];
    W[0][2] = W[2][0] = eta * w1[1];
    W[1][1] = eta * (1.0 + w1[0] * w1[0] * f);
    W[2][2] = eta * (1.0 + w1[1] * w1[1] * f);
    W[1][2] = W[2][1] = eta * (w1[0] * w1[1] * f);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        W2[i][j] = 0.0;
        for (int k = 0; k < 3; ++k) W2[i][j] += W[i][k] * W[k][j];
      }
    return true;
  }

  void apply(const double* v, double* out) const {
    for (int i = 0; i < 3; ++i) out[i] = W[i][0] * v[0] + W[i][1] * v[1] + W[i][2] * v[2];
  }

  void apply_inverse(const double* v, double* out) const {
    // W^{-1} = (1/eta) [[w0, -w1'], [-w1, I + w1 w1'/(1+w0)]]
    const double f = 1.0 / (1.0 + w0);
    const double d = w1[0] * v[1] + w1[1] * v[2];
    out[0] = (w0 * v[0] - d) / eta;
    out[1] = (-w1[0] * v[0] + v[1] + w1[0] * d * f) / eta;
    out[2] = (-w1[1] * v[0] + v[2] + w1[1] * d * f) / eta;
  }
};

// Solves lambda o delta = r in the Jordan algebra of the cone.
void soc_div(const double* lam, const double* r, double* out) {
  const double rho = lam[0] * lam[0] - lam[1] * lam[1] - lam[2] * lam[2];
  const double d0 = (lam[0] * r[0] - lam[1] * r[1] - lam[2] * r[2]) / rho;
  out[0] = d0;
  out[1] = (r[1] - d0 * lam[1]) / lam[0];
  out[2] = (r[2] - d0 * lam[2]) / lam[0];
}

void soc_prod(const double* u, const double* v, double* out) {
  out[0] = u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
  out[1] = u[0] * v[1] + v[0] * u[1];
  out[2] = u[0] * v[2] + v[0] * u[2];
}

// Largest alpha with x + alpha dx in the second-order cone.
double soc_max_step(const double* x, const double* dx) {
  const double c = soc_residual(x);
  if (c <= 0) return 0.0;
  const double a = dx[0] * dx[0] - dx[1] * dx[1] - dx[2] * dx[2];
  const double b = 2.0 * (x[0] * dx[0] - x[1] * dx[1] - x[2] * dx[2]);
  double amax = std::numeric_limits<double>::infinity();
  if (a == 0.0) {
    if (b < 0) amax = -c / b;
  } else {
    const double disc = b * b - 4 * a * c;
    if (disc >= 0) {
      const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
      const double r1 = q / a;
      const double r2 = q != 0.0 ? c / q : std::numeric_limits<double>::infinity();
      if (r1 > 0) amax = std::min(amax, r1);
      if (r2 > 0) amax = std::min(amax, r2);
    }
  }
  if (dx[0] < 0) amax = std::min(amax, -x[0] / dx[0]);
  return amax;
}

class Solver {
public:
  Solver(const Internal& in, const SolverSettings& st) : in_(in), st_(st) {
    n_ = in.n();
    m_ = in.m;
    x_ = Vec::Zero(N());
    s_ = Vec::Zero(N());
    for (std::size_t j = in.nf; j < in.cone_start(); ++j) x_[I(j)] = s_[I(j)] = 1.0;
    for (std::size_t k = 0; k < in.nq; ++k) x_[I(cone(k))] = s_[I(cone(k))] = 1.0;
    y_ = Vec::Zero(M());
    tau_ = kappa_ = 1.0;
    soc_.resize(in.nq);
    At_ = in.A.transpose();
    bnorm_ = in.b.size() ? in.b.lpNorm<Eigen::Infinity>() : 0.0;
    cnorm_ = in.c.size() ? in.c.lpNorm<Eigen::Infinity>() : 0.0;
    build_kkt_pattern();
  }

  SolveResult run() {
    SolveResult res;
    const double nu = static_cast<double>(in_.nl + in_.nq);
    double best_merit = std::numeric_limits<double>::infinity();
    Snapshot best;
    int stalls = 0;
    for (int iter = 0;; ++iter) {
      res.iterations = iter;
      // Residuals.
      Vec rp = in_.A * x_ - in_.b * tau_;
      Vec rd = in_.c * tau_ - At_ * y_ - s_;
      const double cx = in_.c.dot(x_), by = in_.b.dot(y_);
      const double rg = cx - by + kappa_;
      const double mu = (x_.dot(s_) + tau_ * kappa_) / (nu + 1.0);

      const double pres = (rp.size() ? rp.lpNorm<Eigen::Infinity>() : 0.0) / tau_ / (1.0 + bnorm_);
      const double dres = (rd.size() ? rd.lpNorm<Eigen::Infinity>() : 0.0) / tau_ / (1.0 + cnorm_);
      const double pobj = cx / tau_, dobj = by / tau_;
      const double gap_abs = x_.dot(s_) / (tau_ * tau_);
      const double relgap = std::abs(pobj - dobj) / std::max(1.0, std::min(std::abs(pobj), std::abs(dobj)));
      const double gap = std::min(gap_abs, relgap);
      if (st_.verbose)
        std::fprintf(stderr, "%3d  pobj %+.9e  dobj %+.9e  pres %.2e  dres %.2e  gap %.2e  tau %.2e  kap %.2e\n", iter,
                     -pobj, -dobj, pres, dres, gap, tau_, kappa_);
      const double merit = std::max({pres, dres, gap});
      if (merit < best_merit) {
        best_merit = merit;
        best = snapshot();
      }
      if (pres <= st_.tol && dres <= st_.tol && gap <= st_.tol) {
        finish(res, SolveStatus::Optimal, pres, dres, gap);
        return res;
      }
      // Infeasibility certificates.
      if (by > 1e-12) {
        Vec ray = At_ * y_ + s_;
        if (ray.lpNorm<Eigen::Infinity>() / by <= st_.tol && tau_ < 1e-6 * kappa_ + 1e-8) {
          res.status = SolveStatus::Infeasible;
          fill_ray(res);
          return res;
        }
      }
      if (cx < -1e-12) {
        Vec ray = in_.A * x_;
        if ((ray.size() ? ray.lpNorm<Eigen::Infinity>() : 0.0) / (-cx) <= st_.tol && tau_ < 1e-6 * kappa_ + 1e-8) {
          res.status = SolveStatus::Unbounded;
          fill_ray(res);
          return res;
        }
      }
      if (iter >= st_.max_iter || stalls >= 8) break;

      if (!update_scaling() || !factor()) break;

      // Predictor.
      Vec lam = lambda();
      Vec rc = -jordan_square(lam);
      double rtau = -tau_ * kappa_;
      Direction aff;
      if (!direction(1.0, rp, rd, rg, lam, rc, rtau, aff)) break;
      const double alpha_aff = std::min(1.0, max_step(aff));
      double sigma = std::pow(1.0 - alpha_aff, 3);
      sigma = std::clamp(sigma, 0.0, 1.0);

      // Corrector.
      Vec corr = correction(aff);
      rc = -jordan_square(lam) - corr + sigma * mu * identity();
      rtau = -tau_ * kappa_ - aff.dtau * aff.dkappa + sigma * mu;
      Direction dir;
      if (!direction(1.0 - sigma, rp, rd, rg, lam, rc, rtau, dir)) break;
      const double alpha = std::min(1.0, 0.99 * max_step(dir));
      if (!(alpha > 1e-12)) break;
      x_ += alpha * dir.dx;
      y_ += alpha * dir.dy;
      s_ += alpha * dir.ds;
      tau_ += alpha * dir.dtau;
      kappa_ += alpha * dir.dkappa;
      stalls = alpha < 1e-6 ? stalls + 1 : 0;
      if (!x_.allFinite() || !s_.allFinite() || !y_.allFinite() || !std::isfinite(tau_)) break;
    }
    restore(best);
    Vec rp = in_.A * x_ - in_.b * tau_;
    Vec rd = in_.c * tau_ - At_ * y_ - s_;
    const double pres = (rp.size() ? rp.lpNorm<Eigen::Infinity>() : 0.0) / tau_ / (1.0 + bnorm_);
    const double dres = (rd.size() ? rd.lpNorm<Eigen::Infinity>() : 0.0) / tau_ / (1.0 + cnorm_);
    const double pobj = in_.c.dot(x_) / tau_, dobj = in_.b.dot(y_) / tau_;
    const double relgap = std::abs(pobj - dobj) / std::max(1.0, std::min(std::abs(pobj), std::abs(dobj)));
    const double gap = std::min(x_.dot(s_) / (tau_ * tau_), relgap);
    const double loose = std::max(1e3 * st_.tol, 1e-6);
    finish(res, (pres <= loose && dres <= loose && gap <= loose) ? SolveStatus::NearOptimal : SolveStatus::IterLimit,
           pres, dres, gap);
    return res;
  }

private:
  struct Direction {
    Vec dx, dy, ds;
    double dtau = 0, dkappa = 0;
  };
  struct Snapshot {
    Vec x, y, s;
    double tau = 1, kappa = 1;
  };

  Eigen::Index N() const { return static_cast<Eigen::Index>(n_); }
  Eigen::Index M() const { return static_cast<Eigen::Index>(m_); }
  static Eigen::Index I(std::size_t j) { return static_cast<Eigen::Index>(j); }
  std::size_t cone(std::size_t k) const { return in_.cone_start() + 3 * k; }

  Snapshot snapshot() const { return {x_, y_, s_, tau_, kappa_}; }
  void restore(const Snapshot& sn) {
    if (sn.x.size() != N()) return;
    x_ = sn.x;
    y_ = sn.y;
    s_ = sn.s;
    tau_ = sn.tau;
    kappa_ = sn.kappa;
  }

  Vec identity() const {
    Vec e = Vec::Zero(N());
    for (std::size_t j = in_.nf; j < in_.cone_start(); ++j) e[I(j)] = 1.0;
    for (std::size_t k = 0; k < in_.nq; ++k) e[I(cone(k))] = 1.0;
    return e;
  }

  bool update_scaling() {
    for (std::size_t j = in_.nf; j < in_.cone_start(); ++j)
      if (!(x_[I(j)] > 0) || !(s_[I(j)] > 0)) return false;
    for (std::size_t k = 0; k < in_.nq; ++k)
      if (!soc_[k].update(x_.data() + cone(k), s_.data() + cone(k))) return false;
    return tau_ > 0 && kappa_ > 0;
  }

  Vec lambda() const {
    Vec lam = Vec::Zero(N());
    for (std::size_t j = in_.nf; j < in_.cone_start(); ++j) lam[I(j)] = std::sqrt(x_[I(j)] * s_[I(j)]);
    for (std::size_t k = 0; k < in_.nq; ++k) soc_[k].apply(x_.data() + cone(k), lam.data() + cone(k));
    return lam;
  }

  Vec jordan_square(const Vec& v) const {
    Vec out = Vec::Zero(N());
    for (std::size_t j = in_.nf; j < in_.cone_start(); ++j) out[I(j)] = v[I(j)] * v[I(j)];
    for (std::size_t k = 0; k < in_.nq; ++k) soc_prod(v.data() + cone(k), v.data() + cone(k), out.data() + cone(k));
    return out;
  }

  // (W dx) o (W^{-1} ds) for the second-order correction.
  Vec correction(const Direction& d) const {
    Vec out = Vec::Zero(N());
    for (std::size_t j = in_.nf; j < in_.cone_start(); ++j) out[I(j)] = d.dx[I(j)] * d.ds[I(j)];
    for (std::size_t k = 0; k < in_.nq; ++k) {
      double a[3], b[3];
      soc_[k].apply(d.dx.data() + cone(k), a);
      soc_[k].apply_inverse(d.ds.data() + cone(k), b);
      soc_prod(a, b, out.data() + cone(k));
    }
    return out;
  }

  void build_kkt_pattern() {
    const Eigen::Index dim = N() + M();
    std::vector<Eigen::Triplet<double>> trip;
    for (std::size_t j = 0; j < n_; ++j) trip.emplace_back(I(j), I(j), 1.0);
    for (std::size_t k = 0; k < in_.nq; ++k)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
          if (a != b) trip.emplace_back(I(cone(k) + a), I(cone(k) + b), 0.0);
    for (int col = 0; col < in_.A.outerSize(); ++col)
      for (SpMat::InnerIterator it(in_.A, col); it; ++it) {
        trip.emplace_back(N() + it.row(), col, it.value());
        trip.emplace_back(col, N() + it.row(), it.value());
      }
    for (std::size_t i = 0; i < m_; ++i) trip.emplace_back(N() + I(i), N() + I(i), 0.0);
    kkt_.resize(dim, dim);
    kkt_.setFromTriplets(trip.begin(), trip.end());
    kkt_.makeCompressed();
    // Cache value slots of the scaling block.
    diag_slot_.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) diag_slot_[j] = &kkt_.coeffRef(I(j), I(j));
    cone_slot_.resize(in_.nq);
    for (std::size_t k = 0; k < in_.nq; ++k)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) cone_slot_[k][a][b] = &kkt_.coeffRef(I(cone(k) + a), I(cone(k) + b));
    kkt_reg_ = kkt_;
    ldlt_.analyzePattern(kkt_reg_);
  }

  bool factor() {
    for (std::size_t j = 0; j < in_.nf; ++j) *diag_slot_[j] = 0.0;
    for (std::size_t j = in_.nf; j < in_.cone_start(); ++j) *diag_slot_[j] = s_[I(j)] / x_[I(j)];
    for (std::size_t k = 0; k < in_.nq; ++k)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) *cone_slot_[k][a][b] = soc_[k].W2[a][b];

    double* dst = kkt_reg_.valuePtr();
    for (Eigen::Index col = 0; col < kkt_.outerSize(); ++col)
      for (SpMat::InnerIterator it(kkt_, col); it; ++it) {
        double v = it.value();
        if (it.row() == col) v += col < N() ? reg_ : -reg_;
        *dst++ = v;
      }
    ldlt_.factorize(kkt_reg_);
    rhs2_ready_ = false;
    return ldlt_.info() == Eigen::Success;
  }

  // Unregularized KKT product, used for iterative refinement.
  Vec kkt_apply(const Vec& z) const {
    Vec out = Vec::Zero(N() + M());
    const Vec zx = z.head(N()), zy = z.tail(M());
    Vec top = Vec::Zero(N());
    for (std::size_t j = in_.nf; j < in_.cone_start(); ++j) top[I(j)] = s_[I(j)] / x_[I(j)] * zx[I(j)];
    for (std::size_t k = 0; k < in_.nq; ++k)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) top[I(cone(k) + a)] += soc_[k].W2[a][b] * zx[I(cone(k) + b)];
    out.head(N()) = top + in_.A.transpose() * zy;
    out.tail(M()) = in_.A * zx;
    return out;
  }

  // Regularized solve plus iterative refinement. Returns false when the
  // refined residual stays large, which happens once the scaling blocks lose
  // their small eigenvalues to rounding.
  bool kkt_solve(const Vec& rhs, Vec& z) const {
    z = ldlt_.solve(rhs);
    const double rn = rhs.lpNorm<Eigen::Infinity>();
    double rr = 0.0;
    for (int k = 0; k <= 8; ++k) {
      const Vec r = rhs - kkt_apply(z);
      rr = r.lpNorm<Eigen::Infinity>();
      if (rr <= 1e-14 * (1.0 + rn) || k == 8) break;
      z += ldlt_.solve(r);
    }
    return std::isfinite(rr) && rr <= 1e-3 * (1.0 + rn);
  }

  // Scaled product W * v over all cones (zero on free variables).
  Vec apply_w(const Vec& v) const {
    Vec out = Vec::Zero(N());
    for (std::size_t j = in_.nf; j < in_.cone_start(); ++j) out[I(j)] = std::sqrt(s_[I(j)] / x_[I(j)]) * v[I(j)];
    for (std::size_t k = 0; k < in_.nq; ++k) soc_[k].apply(v.data() + cone(k), out.data() + cone(k));
    return out;
  }

  Vec apply_w2(const Vec& v) const {
    Vec out = Vec::Zero(N());
    for (std::size_t j = in_.nf; j < in_.cone_start(); ++j) out[I(j)] = s_[I(j)] / x_[I(j)] * v[I(j)];
    for (std::size_t k = 0; k < in_.nq; ++k)
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) out[I(cone(k) + a)] += soc_[k].W2[a][b] * v[I(cone(k) + b)];
    return out;
  }

  bool direction(double eta, const Vec& rp, const Vec& rd, double rg, const Vec& lam, const Vec& rc, double rtau,
                 Direction& d) {
    // Delta solves lam o Delta = rc.
    Vec delta = Vec::Zero(N());
    for (std::size_t j = in_.nf; j < in_.cone_start(); ++j) delta[I(j)] = rc[I(j)] / lam[I(j)];
    for (std::size_t k = 0; k < in_.nq; ++k) soc_div(lam.data() + cone(k), rc.data() + cone(k), delta.data() + cone(k));
    const Vec wdelta = apply_w(delta);

    if (!rhs2_ready_) {
      Vec r2(N() + M());
      r2.head(N()) = -in_.c;
      r2.tail(M()) = in_.b;
      if (!kkt_solve(r2, z2_)) return false;
      rhs2_ready_ = true;
    }
    Vec r1(N() + M());
    r1.head(N()) = -eta * rd + wdelta;
    r1.tail(M()) = -eta * rp;
    Vec z1;
    if (!kkt_solve(r1, z1)) return false;
    const Vec dx1 = z1.head(N()), dy1 = -z1.tail(M());
    const Vec dx2 = z2_.head(N()), dy2 = -z2_.tail(M());
    const double denom = in_.c.dot(dx2) - in_.b.dot(dy2) - kappa_ / tau_;
    if (!(std::abs(denom) > 0)) return false;
    d.dtau = (-eta * rg - in_.c.dot(dx1) + in_.b.dot(dy1) - rtau / tau_) / denom;
    d.dx = dx1 + d.dtau * dx2;
    d.dy = dy1 + d.dtau * dy2;
    d.dkappa = (rtau - kappa_ * d.dtau) / tau_;
    d.ds = wdelta - apply_w2(d.dx);
    for (std::size_t j = 0; j < in_.nf; ++j) d.ds[I(j)] = 0.0;
    return d.dx.allFinite() && d.dy.allFinite() && std::isfinite(d.dtau);
  }

  double max_step(const Direction& d) const {
    double a = std::numeric_limits<double>::infinity();
    for (std::size_t j = in_.nf; j < in_.cone_start(); ++j) {
      if (d.dx[I(j)] < 0) a = std::min(a, -x_[I(j)] / d.dx[I(j)]);
      if (d.ds[I(j)] < 0) a = std::min(a, -s_[I(j)] / d.ds[I(j)]);
    }
    for (std::size_t k = 0; k < in_.nq; ++k) {
      a = std::min(a, soc_max_step(x_.data() + cone(k), d.dx.data() + cone(k)));
      a = std::min(a, soc_max_step(s_.data() + cone(k), d.ds.data() + cone(k)));
    }
    if (d.dtau < 0) a = std::min(a, -tau_ / d.dtau);
    if (d.dkappa < 0) a = std::min(a, -kappa_ / d.dkappa);
    return a;
  }

  void fill_ray(SolveResult& res) const { map_back(res, x_, y_, 1.0); }

  void finish(SolveResult& res, SolveStatus status, double pres, double dres, double gap) const {
    res.status = status;
    res.primal_residual = pres;
    res.dual_residual = dres;
    res.gap = gap;
    map_back(res, x_, y_, tau_);
  }

  void map_back(SolveResult& res, const Vec& x, const Vec& y, double tau) const {
    res.primal.assign(total_vars_, 0.0);
    for (std::size_t j = 0; j < in_.lin_cols.size(); ++j) res.primal[in_.lin_cols[j].front()] = x[I(j)] / tau;
    for (std::size_t k = 0; k < in_.nq; ++k) {
      const double* v = x.data() + cone(k);
      const auto& oc = in_.cone_cols[k];
      res.primal[oc[0]] = kInvSqrt2 * (v[0] + v[1]) / tau;
      res.primal[oc[1]] = kInvSqrt2 * (v[0] - v[1]) / tau;
      res.primal[oc[2]] = v[2] / tau;
    }
    res.dual.assign(total_rows_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) res.dual[in_.row_orig[i]] = -y[I(i)] * in_.row_scale[i] / tau;
  }

public:
  std::size_t total_vars_ = 0;
  std::size_t total_rows_ = 0;

private:
  const Internal& in_;
  SolverSettings st_;
  std::size_t n_ = 0, m_ = 0;
  Vec x_, s_, y_;
  double tau_ = 1, kappa_ = 1;
  std::vector<SocScaling> soc_;
  SpMat At_;
  double bnorm_ = 0, cnorm_ = 0;
  SpMat kkt_;
  SpMat kkt_reg_;
  std::vector<double*> diag_slot_;
  std::vector<std::array<std::array<double*, 3>, 3>> cone_slot_;
  Eigen::SimplicialLDLT<SpMat, Eigen::Lower> ldlt_;
  double reg_ = 1e-9;
  Vec z2_;
  bool rhs2_ready_ = false;
};

} // namespace

SolveResult solve(const ConicProblem& p, const SolverSettings& settings) {
  const auto t0 = std::chrono::steady_clock::now();
  p.validate();
  if (!(settings.tol > 0)) throw std::invalid_argument("solve: tolerance must be positive");
  Internal in = presolve(p);
  SolveResult res;
  if (in.trivially_infeasible) {
    res.status = SolveStatus::Infeasible;
    res.primal.assign(p.num_vars(), 0.0);
    res.dual.assign(p.num_rows(), 0.0);
  } else {
    Solver s(in, settings);
    s.total_vars_ = p.num_vars();
    s.total_rows_ = p.num_rows();
    res = s.run();
  }
  res.objective = 0.0;
  for (std::size_t j = 0; j < p.num_vars(); ++j) res.objective += p.objective()[j] * res.primal[j];
  res.dual_objective = 0.0;
  for (std::size_t i = 0; i < p.num_rows(); ++i) res.dual_objective += p.rhs()[i] * res.dual[i];
  res.solve_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return res;
}

SolveResult solve(const ConicProblem& p, double tol, int max_iter) {
  SolverSettings st;
  st.tol = tol;
  st.max_iter = max_iter;
  return solve(p, st);
}

} // namespace sonc::conic
