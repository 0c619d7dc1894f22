#include "sonc/certify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include <Eigen/Dense>
#include <boost/multiprecision/cpp_int.hpp>

#include "sonc/exact.hpp"

namespace sonc {

namespace {

using BigInt = boost::multiprecision::cpp_int;
using BigRat = boost::multiprecision::cpp_rational;

BigRat big(const Rational& r) { return BigRat(BigInt(r.num()), BigInt(r.den())); }

BigRat big(double x) {
  if (!std::isfinite(x)) throw VerificationError("non-finite coefficient");
  if (x == 0.0) return BigRat(0);
  int e = 0;
  const double m = std::frexp(x, &e);
  const auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
  e -= 53;
  BigInt num(mant);
  if (e >= 0) return BigRat(num << e);
  return BigRat(num, BigInt(1) << -e);
}

double to_double(const BigRat& r) { return r.convert_to<double>(); }

// Terms keyed by exact rational exponent. Substituting x -> x^r with r the
// common denominator maps these keys one-to-one onto integer exponents, so
// the grouping is the same as in the integral expansion.
class Expansion {
public:
  void add(const Exponent& e, const BigRat& c) {
    if (c != 0) terms_[e] += c;
  }

  double max_abs() const {
    BigRat best = 0;
    for (const auto& [k, c] : terms_) {
      BigRat a = boost::multiprecision::abs(c);
      if (a > best) best = a;
    }
    return to_double(best);
  }

private:
  std::map<Exponent, BigRat> terms_;
};

// Common denominator of all exponents, or 0 when it overflows or exceeds
// max_den.
std::int64_t common_denominator(const std::vector<Exponent>& exps, std::int64_t max_den) {
  std::int64_t r = 1;
  try {
    for (const auto& e : exps) r = lcm64(r, e.denominator_lcm());
  } catch (const RationalOverflow&) {
    return 0;
  }
  return r > max_den ? 0 : r;
}

SparsePoly reference_poly(const Certificate& cert, const SparsePoly& f) {
  return cert.pn_form ? to_pn(f).first : f;
}

double power(const std::vector<double>& x, const Exponent& e) {
  double v = 1.0;
  for (std::size_t i = 0; i < e.dim(); ++i)
    if (!e[i].is_zero()) v *= std::pow(x[i], e[i].to_double());
  return v;
}

} // namespace

ExactCheck verify_exact(const Certificate& cert, const SparsePoly& f, double tol, std::int64_t max_denominator) {
  const SparsePoly ref = reference_poly(cert, f);
  std::vector<Exponent> exps;
  for (const auto& s : cert.squares) {
    exps.push_back(s.half_v * Rational(2));
    exps.push_back(s.half_w * Rational(2));
    exps.push_back(s.half_v + s.half_w);
  }
  for (const auto& m : cert.monomials) exps.push_back(m.exponent);
  for (const auto& [e, c] : ref.terms()) exps.push_back(e);

  ExactCheck out;
  out.r = common_denominator(exps, max_denominator);
  Expansion ex;
  for (const auto& s : cert.squares) {
    const BigRat w = big(s.weight), p = big(s.p), q = big(s.q);
    ex.add(s.half_v * Rational(2), w * p * p);
    ex.add(s.half_w * Rational(2), w * q * q);
    ex.add(s.half_v + s.half_w, -2 * w * p * q);
  }
  for (const auto& m : cert.monomials) ex.add(m.exponent, big(m.coeff));
  for (const auto& [e, c] : ref.terms()) ex.add(e, -big(c));
  ex.add(Exponent(ref.n()), big(cert.xi));
  out.max_residual = ex.max_abs();
  out.ok = out.max_residual <= tol;
  return out;
}

double verify_numeric(const Certificate& cert, const SparsePoly& f, int samples, std::uint64_t seed) {
  const SparsePoly ref = reference_poly(cert, f);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(1e-3, 2.0);
  std::vector<double> x(ref.n());
  double worst = 0.0;
  for (int s = 0; s < std::max(samples, 1); ++s) {
    for (auto& xi : x) xi = dist(rng);
    double lhs = 0.0;
    for (const auto& sq : cert.squares) {
      const double t = sq.p * power(x, sq.half_v) - sq.q * power(x, sq.half_w);
      lhs += sq.weight * t * t;
    }
    for (const auto& m : cert.monomials) lhs += m.coeff * power(x, m.exponent);
    const double rhs = eval(ref, x) - cert.xi;
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

VerifyReport verify(const Certificate& cert, const SparsePoly& f, const VerifyOptions& options) {
  VerifyReport rep;
  const auto ex = verify_exact(cert, f, options.tol, options.max_denominator);
  rep.exact_residual = ex.max_residual;
  rep.r_used = ex.r;
  rep.numeric_residual = verify_numeric(cert, f, options.samples, options.seed);
  rep.pass = ex.ok;
  return rep;
}

SparsePoly circuit_poly(const CircuitData& c) {
  const std::size_t n = c.trellis.front().dim();
  SparsePoly f(n);
  for (std::size_t i = 0; i < c.trellis.size(); ++i) f.add_term(c.trellis[i], c.coefficients[i]);
  if (c.beta) f.add_term(*c.beta, -c.d);
  return f;
}

CircuitDecomposition verify_circuit_decomposition(const CircuitData& c, const MediatedSet& ms) {
  CircuitDecomposition out;
  const std::size_t n = c.trellis.front().dim();
  auto& cert = out.cert;
  cert.n = n;

  auto monomials_only = [&](double extra_coeff) {
    for (std::size_t i = 0; i < c.trellis.size(); ++i) cert.monomials.push_back({c.coefficients[i], c.trellis[i]});
    if (extra_coeff != 0.0) cert.monomials.push_back({extra_coeff, *c.beta});
    out.exact = true;
    for (const auto& m : cert.monomials) {
      auto r = exact::from_double(m.coeff);
      if (!r) {
        out.exact = false;
        out.exact_monomials.clear();
        break;
      }
      out.exact_monomials.emplace_back(*r, m.exponent);
    }
    return out;
  };
  if (c.is_monomial_square()) return monomials_only(0.0);

  const Exponent& beta = *c.beta;
  const std::set<Exponent> tr_a(c.trellis.begin(), c.trellis.end()), tr_b(ms.trellis.begin(), ms.trellis.end());
  if (tr_a != tr_b || ms.beta != beta) throw std::invalid_argument("mediated set is not built on the circuit");
  if (!circuit_nonneg(c)) throw std::domain_error("circuit is not nonnegative");
  if (c.d == 0.0) return monomials_only(0.0);
  if (c.d < 0 && beta.is_even_lattice()) return monomials_only(-c.d);
  const bool flip = c.d < 0;
  const double dabs = std::abs(c.d);

  // Expected visit counts of the walk that moves from u to v or w with
  // probability 1/2 each and stops on the trellis.
  std::map<Exponent, std::size_t> idx;
  for (const auto& t : ms.triples)
    if (!idx.emplace(t.u, idx.size()).second) throw std::invalid_argument("mediated set repeats a midpoint");
  if (!idx.count(beta)) throw std::invalid_argument("beta is not a midpoint of the mediated set");
  const std::size_t m = ms.triples.size();
  exact::Matrix a(m, std::vector<Rational>(m));
  std::vector<Rational> rhs(m);
  for (std::size_t j = 0; j < m; ++j) a[j][j] = Rational(1);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& t = ms.triples[j];
    for (const Exponent* e : {&t.v, &t.w}) {
      auto it = idx.find(*e);
      if (it != idx.end()) a[it->second][j] -= Rational(1, 2);
      else if (!tr_a.count(*e)) throw std::invalid_argument("mediated set point " + e->str() + " is unsupported");
    }
  }
  rhs[idx.at(beta)] = Rational(1);
  const auto visits = exact::solve(a, rhs);
  if (!visits) throw std::invalid_argument("mediated set walk does not terminate");

  if (flip) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto& t = ms.triples[j];
      if ((t.v == beta || t.w == beta) && !(*visits)[j].is_zero())
        throw std::invalid_argument("inner point is a square endpoint; sign cannot be flipped");
    }
  }

  // Exact path: every c_alpha / lambda_alpha equal, so the tight circuit
  // vanishes at the all-ones point.
  const auto d_exact = exact::from_double(dabs);
  std::vector<std::optional<Rational>> c_exact;
  for (double v : c.coefficients) c_exact.push_back(exact::from_double(v));
  bool tight_at_one = d_exact.has_value();
  for (const auto& ce : c_exact) tight_at_one &= ce.has_value();
  if (tight_at_one) {
    const BigRat ratio0 = big(*c_exact[0]) / big(c.barycentric[0]);
    for (std::size_t i = 1; i < c.trellis.size() && tight_at_one; ++i)
      tight_at_one = big(*c_exact[i]) / big(c.barycentric[i]) == ratio0;
  }

  out.triples = ms.triples;
  if (tight_at_one) {
    try {
      std::vector<Rational> w;
      for (std::size_t j = 0; j < m; ++j) w.push_back(*d_exact * (*visits)[j] * Rational(1, 2));
      std::vector<std::pair<Rational, Exponent>> mono;
      for (std::size_t i = 0; i < c.trellis.size(); ++i) {
        const Rational rem = *c_exact[i] - *d_exact * c.barycentric[i];
        if (!rem.is_zero()) mono.emplace_back(rem, c.trellis[i]);
      }
      out.exact = true;
      out.exact_coefficients = std::move(w);
      out.exact_monomials = std::move(mono);
    } catch (const RationalOverflow&) {
      out.exact = false;
    }
  }

  std::vector<double> xstar(n, 1.0);
  if (!tight_at_one) {
    // c_alpha x*^alpha = lambda_alpha Theta x*^beta, in logarithms.
    const double theta = circuit_number(c);
    Eigen::MatrixXd lhs(c.trellis.size(), n);
    Eigen::VectorXd b(c.trellis.size());
    for (std::size_t i = 0; i < c.trellis.size(); ++i) {
      for (std::size_t k = 0; k < n; ++k) lhs(i, k) = (c.trellis[i][k] - beta[k]).to_double();
      b(i) = std::log(c.barycentric[i].to_double() * theta / c.coefficients[i]);
    }
    const Eigen::VectorXd z = lhs.completeOrthogonalDecomposition().solve(b);
    if ((lhs * z - b).norm() > 1e-8 * (1.0 + b.norm())) throw std::domain_error("circuit minimizer not found");
    for (std::size_t k = 0; k < n; ++k) xstar[k] = std::exp(z(k));
  }
  const double theta = tight_at_one ? c.coefficients[0] / c.barycentric[0].to_double() : circuit_number(c);
  const double scale = dabs * power(xstar, beta);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& t = ms.triples[j];
    const double w = out.exact ? out.exact_coefficients[j].to_double() : scale * (*visits)[j].to_double() / 2;
    out.coefficients.push_back(w);
    BinomialSquare sq;
    sq.half_v = t.v * Rational(1, 2);
    sq.half_w = t.w * Rational(1, 2);
    sq.p = tight_at_one ? 1.0 : 1.0 / power(xstar, sq.half_v);
    sq.q = tight_at_one ? 1.0 : 1.0 / power(xstar, sq.half_w);
    if (flip && t.u == beta) sq.q = -sq.q;
    sq.weight = w;
    cert.squares.push_back(sq);
  }
  if (out.exact) {
    for (const auto& [r, e] : out.exact_monomials) cert.monomials.push_back({r.to_double(), e});
  } else {
    for (std::size_t i = 0; i < c.trellis.size(); ++i) {
      const double rem = std::max(0.0, (1.0 - dabs / theta) * c.coefficients[i]);
      if (rem > 0) cert.monomials.push_back({rem, c.trellis[i]});
    }
  }
  return out;
}

ExactCheck verify_exact(const CircuitDecomposition& dec, const SparsePoly& f, double tol) {
  if (!dec.exact) throw std::invalid_argument("decomposition has no exact coefficients");
  std::vector<Exponent> exps;
  for (const auto& t : dec.triples) exps.insert(exps.end(), {t.u, t.v, t.w});
  for (const auto& [r, e] : dec.exact_monomials) exps.push_back(e);
  for (const auto& [e, c] : f.terms()) exps.push_back(e);
  ExactCheck out;
  out.r = common_denominator(exps, std::numeric_limits<std::int64_t>::max());
  Expansion ex;
  for (std::size_t j = 0; j < dec.triples.size() && j < dec.exact_coefficients.size(); ++j) {
    const auto& t = dec.triples[j];
    const BigRat w = big(dec.exact_coefficients[j]);
    const double sign_q = dec.cert.squares.at(j).q < 0 ? -1.0 : 1.0;
    ex.add(t.v, w);
    ex.add(t.w, w);
    ex.add(t.u, -2 * w * BigRat(static_cast<int>(sign_q)));
  }
  for (const auto& [r, e] : dec.exact_monomials) ex.add(e, big(r));
  for (const auto& [e, c] : f.terms()) ex.add(e, -big(c));
  out.max_residual = ex.max_abs();
  out.ok = out.max_residual <= tol;
  return out;
}

} // namespace sonc
