#include "sonc/bench.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <random>
#include <set>
#include <stdexcept>
#include <thread>

#include <Eigen/Dense>

#include "sonc/cover.hpp"
#include "sonc/exact.hpp"
#include "sonc/local_min.hpp"

namespace sonc {

namespace {

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

// Uniform weak composition of k into parts parts (stars and bars).
std::vector<long long> weak_composition(Rng& rng, long long k, std::size_t parts) {
  std::vector<long long> bars;
  std::vector<long long> pool(static_cast<std::size_t>(k) + parts - 1);
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<long long>(i);
  std::shuffle(pool.begin(), pool.end(), rng);
  bars.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(parts - 1));
  std::sort(bars.begin(), bars.end());
  std::vector<long long> out;
  long long prev = -1;
  for (auto b : bars) {
    out.push_back(b - prev - 1);
    prev = b;
  }
  out.push_back(static_cast<long long>(pool.size()) - prev - 1);
  return out;
}

// Random even point of degree <= d.
Exponent random_even_point(Rng& rng, std::size_t n, int d) {
  auto parts = weak_composition(rng, d / 2, n + 1);
  parts.pop_back();
  for (auto& p : parts) p *= 2;
  return Exponent::from_ints(parts);
}

double inner_coefficient(Rng& rng, const Exponent& e) {
  const double mag = uniform(rng, 0.1, 1.0);
  if (e.is_even_lattice()) return -mag;
  return std::bernoulli_distribution(0.5)(rng) ? mag : -mag;
}

// Rounded random convex combination of pts.
Exponent random_combination(Rng& rng, const std::vector<Exponent>& pts) {
  std::exponential_distribution<double> ex(1.0);
  const std::size_t n = pts.front().dim();
  std::vector<double> w(pts.size());
  double s = 0.0;
  for (auto& v : w) s += (v = ex(rng));
  std::vector<long long> c(n);
  for (std::size_t i = 0; i < n; ++i) {
    double x = 0.0;
    for (std::size_t j = 0; j < pts.size(); ++j) x += w[j] / s * pts[j][i].to_double();
    c[i] = std::llround(x);
  }
  return Exponent::from_ints(c);
}

double binomial_capped(long long n, long long k, double cap) {
  if (k < 0 || k > n) return 0.0;
  double r = 1.0;
  for (long long i = 1; i <= k; ++i) {
    r = r * static_cast<double>(n - k + i) / static_cast<double>(i);
    if (r > cap) return cap;
  }
  return r;
}

SparsePoly gen_standard(const BenchSpec& s, Rng& rng) {
  const std::size_t inner = s.t - s.n - 1;
  if (binomial_capped(s.d - 1, static_cast<long long>(s.n), 1e18) < static_cast<double>(inner))
    throw std::invalid_argument("gen_bench: not enough interior lattice points");
  SparsePoly f(s.n);
  f.add_term(Exponent(s.n), uniform(rng, 1.0, 2.0));
  for (std::size_t i = 0; i < s.n; ++i) {
    std::vector<long long> e(s.n, 0);
    e[i] = s.d;
    f.add_term(Exponent::from_ints(e), uniform(rng, 1.0, 2.0));
  }
  std::set<Exponent> used;
  std::vector<long long> pool(static_cast<std::size_t>(s.d - 1));
  for (std::size_t i = 0; i < pool.size(); ++i) pool[i] = static_cast<long long>(i) + 1;
  for (std::size_t attempt = 0; used.size() < inner; ++attempt) {
    if (attempt > 1000 * (inner + 10)) throw std::invalid_argument("gen_bench: interior sampling failed");
    // n distinct cut points of {1..d-1} give a composition of d into n+1 positive parts.
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<long long> cuts(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(s.n));
    std::sort(cuts.begin(), cuts.end());
    std::vector<long long> e(s.n);
    long long prev = 0;
    for (std::size_t i = 0; i < s.n; ++i) {
      e[i] = cuts[i] - prev;
      prev = cuts[i];
    }
    Exponent b = Exponent::from_ints(e);
    if (used.insert(b).second) f.add_term(b, inner_coefficient(rng, b));
  }
  return f;
}

// Lattice points of the nonnegative orthant with degree <= d, in
// lexicographic order.
void lattice_points(std::size_t n, int d, std::vector<long long>& cur, std::vector<Exponent>& out) {
  if (cur.size() == n) {
    out.push_back(Exponent::from_ints(cur));
    return;
  }
  long long used = 0;
  for (auto c : cur) used += c;
  for (long long k = 0; used + k <= d; ++k) {
    cur.push_back(k);
    lattice_points(n, d, cur, out);
    cur.pop_back();
  }
}

// Lattice points strictly inside the simplex with vertex 0 and columns of
// verts[1..n]. Doubles screen, exact arithmetic decides near the boundary.
std::vector<Exponent> strict_interior(const std::vector<Exponent>& verts, int d) {
  const std::size_t n = verts.front().dim();
  Eigen::MatrixXd m(n, n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) m(i, j) = verts[j + 1][i].to_double();
  const Eigen::MatrixXd inv = m.fullPivLu().inverse();
  std::vector<Exponent> all, out;
  std::vector<long long> cur;
  lattice_points(n, d, cur, all);
  Eigen::VectorXd b(n);
  for (const auto& p : all) {
    for (std::size_t i = 0; i < n; ++i) b[i] = p[i].to_double();
    const Eigen::VectorXd l = inv * b;
    const double lmin = std::min(l.minCoeff(), 1.0 - l.sum());
    if (lmin < -1e-9) continue;
    if (lmin < 1e-9) {
      auto bary = exact::barycentric(verts, p);
      if (!bary) continue;
      bool strict = true;
      for (const auto& w : *bary) strict &= w.sign() > 0;
      if (!strict) continue;
    }
    out.push_back(p);
  }
  return out;
}

// Rejection sampling of rounded convex combinations, for simplices too
// large to enumerate.
std::vector<Exponent> sampled_interior(Rng& rng, const std::vector<Exponent>& verts, std::size_t count) {
  std::set<Exponent> used;
  std::vector<Exponent> out;
  for (std::size_t attempt = 0; attempt < 200 * (count + 5) && out.size() < count; ++attempt) {
    Exponent b = random_combination(rng, verts);
    if (used.count(b)) continue;
    auto bary = exact::barycentric(verts, b);
    if (!bary) continue;
    bool strict = true;
    for (const auto& l : *bary) strict &= l.sign() > 0;
    if (!strict) continue;
    used.insert(b);
    out.push_back(b);
  }
  return out;
}

constexpr double kMaxEnumerated = 2e5;

SparsePoly gen_general(const BenchSpec& s, Rng& rng) {
  const std::size_t inner = s.t - s.n - 1;
  for (int round = 0; round < 200; ++round) {
    std::vector<Exponent> verts{Exponent(s.n)};
    for (std::size_t i = 0; i < s.n; ++i) verts.push_back(random_even_point(rng, s.n, s.d));
    if (!exact::affinely_independent(verts)) continue;
    std::vector<Exponent> pool;
    if (binomial_capped(s.d + static_cast<long long>(s.n), static_cast<long long>(s.n), 1e18) <= kMaxEnumerated) {
      pool = strict_interior(verts, s.d);
      std::shuffle(pool.begin(), pool.end(), rng);
    } else {
      pool = sampled_interior(rng, verts, inner);
    }
    if (pool.size() < inner) continue;
    SparsePoly f(s.n);
    for (const auto& v : verts) f.add_term(v, uniform(rng, 1.0, 2.0));
    for (std::size_t k = 0; k < inner; ++k) f.add_term(pool[k], inner_coefficient(rng, pool[k]));
    return f;
  }
  throw std::invalid_argument("gen_bench: could not place interior points in a random simplex");
}

SparsePoly gen_arbitrary(const BenchSpec& s, Rng& rng) {
  std::size_t n_lambda = std::max(s.n + 2, s.t / 2);
  const std::size_t min_inner = std::max<std::size_t>(s.l, 1);
  if (s.t < min_inner) throw std::invalid_argument("gen_bench: t smaller than l");
  n_lambda = std::min(n_lambda, s.t - min_inner);
  if (n_lambda < s.n + 2) throw std::invalid_argument("gen_bench: t too small for n+2 vertices and l inner terms");
  const std::size_t inner = s.t - n_lambda;
  for (int round = 0; round < 200; ++round) {
    std::set<Exponent> lam{Exponent(s.n)};
    for (std::size_t attempt = 0; lam.size() < n_lambda && attempt < 100 * n_lambda; ++attempt)
      lam.insert(random_even_point(rng, s.n, s.d));
    if (lam.size() < n_lambda) continue;
    std::vector<Exponent> pts(lam.begin(), lam.end());
    if (exact::affine_rank(pts) != s.n) continue;
    std::set<Exponent> used;
    std::vector<Exponent> picked;
    const Exponent origin(s.n);
    for (std::size_t attempt = 0; attempt < 200 * (inner + 5) && picked.size() < inner; ++attempt) {
      Exponent b = random_combination(rng, pts);
      if (lam.count(b) || used.count(b)) continue;
      if (!sim_sel(b, pts, origin)) continue;
      used.insert(b);
      picked.push_back(b);
    }
    if (picked.size() < inner) continue;
    SparsePoly f(s.n);
    for (const auto& v : pts) f.add_term(v, uniform(rng, 1.0, 2.0));
    for (const auto& b : picked) f.add_term(b, inner_coefficient(rng, b));
    return f;
  }
  throw std::invalid_argument("gen_bench: could not build a polytope instance");
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

} // namespace

const char* to_string(BenchClass c) {
  switch (c) {
    case BenchClass::StandardSimplex: return "standard";
    case BenchClass::GeneralSimplex: return "general";
    case BenchClass::ArbitraryPolytope: return "arbitrary";
  }
  return "unknown";
}

BenchClass parse_bench_class(const std::string& s) {
  if (s == "standard" || s == "StandardSimplex") return BenchClass::StandardSimplex;
  if (s == "general" || s == "GeneralSimplex") return BenchClass::GeneralSimplex;
  if (s == "arbitrary" || s == "ArbitraryPolytope") return BenchClass::ArbitraryPolytope;
  throw std::invalid_argument("unknown bench class '" + s + "'");
}

SparsePoly gen_bench(const BenchSpec& spec) {
  if (spec.poly) return parse_poly(*spec.poly);
  if (spec.n == 0) throw std::invalid_argument("gen_bench: n must be positive");
  if (spec.d < 2 || spec.d % 2 != 0) throw std::invalid_argument("gen_bench: d must be even and positive");
  if (spec.t < spec.n + 2) throw std::invalid_argument("gen_bench: t must be at least n+2");
  Rng rng(spec.seed);
  switch (spec.cls) {
    case BenchClass::StandardSimplex: return gen_standard(spec, rng);
    case BenchClass::GeneralSimplex: return gen_general(spec, rng);
    case BenchClass::ArbitraryPolytope: return gen_arbitrary(spec, rng);
  }
  throw std::invalid_argument("gen_bench: unknown class");
}

double relative_gap(double xi_min, double xi_lb) {
  if (!std::isfinite(xi_lb) || !std::isfinite(xi_min)) return std::numeric_limits<double>::infinity();
  const double diff = std::abs(xi_min - xi_lb);
  return xi_min != 0.0 ? diff / std::abs(xi_min) : diff;
}

BenchRow run_one(const BenchSpec& spec, const BenchOptions& options) {
  BenchRow row;
  row.spec = spec;
  try {
    const SparsePoly f = gen_bench(spec);
    if (spec.poly) {
      row.spec.n = f.n();
      row.spec.t = f.size();
      Rational deg;
      for (const auto& [e, c] : f.terms()) deg = std::max(deg, e.degree());
      row.spec.d = static_cast<int>(std::ceil(deg.to_double()));
    }
    const auto res = sonc_lower_bound(f, options.config);
    row.xi_socp = res.xi;
    row.status = to_string(res.report.status);
    row.iters = res.report.iterations;
    row.residual = res.report.verification.exact_residual;
    if (options.record_times) {
      row.time_total_s = res.report.time_total_s;
      row.time_solver_s = res.report.time_solver_s;
    }
    row.xi_min = local_upper_bound(f, options.starts, spec.seed);
    row.gap = relative_gap(row.xi_min, row.xi_socp);
  } catch (const std::exception&) {
    row.status = "error";
    row.xi_socp = std::numeric_limits<double>::quiet_NaN();
    row.xi_min = std::numeric_limits<double>::quiet_NaN();
    row.gap = std::numeric_limits<double>::quiet_NaN();
  }
  return row;
}

std::vector<BenchRow> run_bench(const std::vector<BenchSpec>& specs, const BenchOptions& options) {
  std::vector<BenchRow> rows(specs.size());
  unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(specs.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i; (i = next.fetch_add(1)) < specs.size();) rows[i] = run_one(specs[i], options);
  };
  if (threads <= 1) {
    worker();
    return rows;
  }
  std::vector<std::thread> pool;
  for (unsigned k = 0; k < threads; ++k) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  return rows;
}

std::string csv_header() {
  return "class,n,d,t,l,seed,xi_socp,xi_min,gap,time_total_s,time_solver_s,iters,status";
}

void write_csv(std::ostream& os, const std::vector<BenchRow>& rows) {
  os << csv_header() << '\n';
  for (const auto& r : rows) {
    const auto& s = r.spec;
    os << (s.poly ? "custom" : to_string(s.cls)) << ',' << s.n << ',' << s.d << ',' << s.t << ',' << s.l << ','
       << s.seed << ',' << fmt(r.xi_socp) << ',' << fmt(r.xi_min) << ',' << fmt(r.gap) << ','
       << fmt(r.time_total_s) << ',' << fmt(r.time_solver_s) << ',' << r.iters << ',' << r.status << '\n';
  }
}

} // namespace sonc
