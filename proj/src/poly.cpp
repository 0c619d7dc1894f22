#include "sonc/poly.hpp"

#include <cmath>

#include "sonc/exact.hpp"

namespace sonc {

SparsePoly::SparsePoly(std::size_t n, const std::vector<std::pair<Exponent, double>>& terms) : n_(n) {
  for (const auto& [e, c] : terms) add_term(e, c);
}

void SparsePoly::add_term(const Exponent& e, double c) {
  if (e.dim() != n_)
    throw std::invalid_argument("exponent " + e.str() + " has dimension " + std::to_string(e.dim()) +
                                ", polynomial has " + std::to_string(n_));
  if (c == 0.0) return;
  auto [it, inserted] = terms_.emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0.0) terms_.erase(it);
  }
}

double SparsePoly::coeff(const Exponent& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? 0.0 : it->second;
}

bool SparsePoly::has_integer_exponents() const {
  for (const auto& [e, c] : terms_)
    if (!e.is_integer()) return false;
  return true;
}

std::int64_t SparsePoly::exponent_denominator_lcm() const {
  std::int64_t l = 1;
  for (const auto& [e, c] : terms_) l = lcm64(l, e.denominator_lcm());
  return l;
}

double SparsePoly::max_abs_coeff() const {
  double m = 0.0;
  for (const auto& [e, c] : terms_) m = std::max(m, std::abs(c));
  return m;
}

SupportPartition partition_support(const SparsePoly& f) {
  SupportPartition part;
  part.n = f.n();
  for (const auto& [e, c] : f.terms()) {
    if (!e.is_integer()) throw std::invalid_argument("partition_support: non-integer exponent " + e.str());
    if (e.is_even_lattice() && c > 0) {
      part.lambda.push_back(e);
      part.lambda_coeff.push_back(c);
    } else {
      part.gamma.push_back(e);
      part.gamma_d.push_back(-c);
    }
  }
  return part;
}

SparsePoly reassemble(const SupportPartition& part) {
  SparsePoly f(part.n);
  for (std::size_t i = 0; i < part.lambda.size(); ++i) f.add_term(part.lambda[i], part.lambda_coeff[i]);
  for (std::size_t i = 0; i < part.gamma.size(); ++i) f.add_term(part.gamma[i], -part.gamma_d[i]);
  return f;
}

std::pair<SparsePoly, SignMap> to_pn(const SparsePoly& f) {
  SparsePoly pn(f.n());
  SignMap sm;
  for (const auto& [e, c] : f.terms()) {
    if (c > 0 && !e.is_even_lattice()) {
      pn.add_term(e, -c);
      sm.flipped.insert(e);
    } else {
      pn.add_term(e, c);
    }
  }
  return {std::move(pn), std::move(sm)};
}

SparsePoly apply_sign_map(const SparsePoly& f, const SignMap& sm) {
  SparsePoly g(f.n());
  for (const auto& [e, c] : f.terms()) g.add_term(e, sm.flipped.count(e) ? -c : c);
  return g;
}

SparsePoly substitute_power(const SparsePoly& f, std::int64_t r) {
  if (r < 1) throw std::invalid_argument("substitute_power: r must be positive");
  SparsePoly g(f.n());
  for (const auto& [e, c] : f.terms()) g.add_term(e * Rational(r), c);
  return g;
}

namespace {

double power(double base, const Rational& e) {
  if (e.is_integer()) {
    if (e.num() >= 0 && e.num() <= 64) {
      // Repeated squaring keeps small integer powers exact where possible.
      double result = 1.0, b = base;
      for (std::int64_t k = e.num(); k > 0; k >>= 1) {
        if (k & 1) result *= b;
        b *= b;
      }
      return result;
    }
    return std::pow(base, static_cast<double>(e.num()));
  }
  if (base < 0) throw std::domain_error("negative base under a fractional exponent");
  return std::pow(base, e.to_double());
}

} // namespace

double eval(const SparsePoly& f, const std::vector<double>& x) {
  if (x.size() != f.n()) throw std::invalid_argument("eval: point has wrong dimension");
  double sum = 0.0;
  for (const auto& [e, c] : f.terms()) {
    double t = c;
    for (std::size_t i = 0; i < x.size(); ++i)
      if (!e[i].is_zero()) t *= power(x[i], e[i]);
    sum += t;
  }
  return sum;
}

double eval_gradient(const SparsePoly& f, const std::vector<double>& x, std::vector<double>& grad) {
  const std::size_t n = f.n();
  if (x.size() != n) throw std::invalid_argument("eval_gradient: point has wrong dimension");
  grad.assign(n, 0.0);
  double sum = 0.0;
  std::vector<double> pw(n);
  for (const auto& [e, c] : f.terms()) {
    double t = c;
    for (std::size_t i = 0; i < n; ++i) {
      pw[i] = e[i].is_zero() ? 1.0 : power(x[i], e[i]);
      t *= pw[i];
    }
    sum += t;
    for (std::size_t i = 0; i < n; ++i) {
      if (e[i].is_zero()) continue;
      double g = c * e[i].to_double() * power(x[i], e[i] - Rational(1));
      for (std::size_t j = 0; j < n; ++j)
        if (j != i) g *= pw[j];
      grad[i] += g;
    }
  }
  return sum;
}

std::optional<CircuitData> make_circuit(const std::vector<Exponent>& trellis, const std::vector<double>& coefficients,
                                        const Exponent& beta, double d) {
  if (trellis.size() < 2 || trellis.size() != coefficients.size()) return std::nullopt;
  for (std::size_t i = 0; i < trellis.size(); ++i)
    if (!trellis[i].is_even_lattice() || !(coefficients[i] > 0)) return std::nullopt;
  if (!beta.is_integer()) return std::nullopt;
  auto lambda = exact::barycentric(trellis, beta);
  if (!lambda) return std::nullopt;
  for (const auto& l : *lambda)
    if (l.sign() <= 0) return std::nullopt;
  CircuitData c;
  c.trellis = trellis;
  c.coefficients = coefficients;
  c.beta = beta;
  c.d = d;
  c.barycentric = std::move(*lambda);
  return c;
}

std::optional<CircuitData> is_circuit(const SparsePoly& f) {
  if (f.empty() || !f.has_integer_exponents()) return std::nullopt;
  std::vector<Exponent> pos;
  std::vector<double> pos_c;
  std::vector<std::pair<Exponent, double>> other;
  for (const auto& [e, c] : f.terms()) {
    if (e.is_even_lattice() && c > 0) {
      pos.push_back(e);
      pos_c.push_back(c);
    } else {
      other.emplace_back(e, c);
    }
  }
  if (other.size() > 1) return std::nullopt;
  if (other.size() == 1) return make_circuit(pos, pos_c, other[0].first, -other[0].second);
  if (pos.size() == 1) {
    CircuitData c;
    c.trellis = pos;
    c.coefficients = pos_c;
    c.barycentric = {Rational(1)};
    return c;
  }
  // All terms are positive even: some term may still be an inner point with d < 0.
  for (std::size_t k = 0; k < pos.size(); ++k) {
    std::vector<Exponent> tr;
    std::vector<double> co;
    for (std::size_t i = 0; i < pos.size(); ++i)
      if (i != k) {
        tr.push_back(pos[i]);
        co.push_back(pos_c[i]);
      }
    if (auto c = make_circuit(tr, co, pos[k], -pos_c[k])) return c;
  }
  return std::nullopt;
}

double circuit_number(const CircuitData& c) {
  if (c.is_monomial_square()) throw std::invalid_argument("circuit_number: monomial square has no inner term");
  double log_theta = 0.0;
  for (std::size_t i = 0; i < c.trellis.size(); ++i) {
    const double l = c.barycentric[i].to_double();
    log_theta += l * std::log(c.coefficients[i] / l);
  }
  return std::exp(log_theta);
}

bool circuit_nonneg(const CircuitData& c, double rel_tol) {
  if (c.is_monomial_square()) return c.coefficients.front() >= 0;
  const double theta = circuit_number(c);
  const double limit = theta * (1.0 + rel_tol);
  if (c.beta->is_even_lattice()) return c.d <= limit;
  return std::abs(c.d) <= limit;
}

} // namespace sonc
