#include "sonc/socp_builder.hpp"

#include <cmath>

namespace sonc {

SocpInstance build_socp(const SparsePoly& pn, const Cover& cover, const std::vector<MediatedSet>& mediated) {
  if (!cover.no_certificate.empty())
    throw StructuralError("inner point " + cover.no_certificate.front().str() + " is not covered by any trellis");
  if (mediated.size() != cover.entries.size())
    throw StructuralError("expected one mediated set per cover entry");
  for (std::size_t k = 0; k < mediated.size(); ++k) {
    if (mediated[k].beta != cover.entries[k].beta || mediated[k].trellis != cover.entries[k].trellis)
      throw StructuralError("mediated set " + std::to_string(k) + " is not built on its cover entry");
  }

  SocpInstance inst;
  auto& prob = inst.problem;
  auto& map = inst.map;
  const Exponent origin(pn.n());
  auto row_of = [&](const Exponent& e) {
    auto it = map.rows.find(e);
    if (it != map.rows.end()) return it->second;
    const std::size_t r = prob.add_row(pn.coeff(e));
    map.rows.emplace(e, r);
    return r;
  };
  std::vector<bool> touched;
  auto add = [&](const Exponent& e, std::size_t col, double v) {
    const std::size_t r = row_of(e);
    if (touched.size() <= r) touched.resize(r + 1, false);
    touched[r] = true;
    prob.add_coeff(r, col, v);
  };

  // The constant row always exists and carries xi.
  map.xi = prob.add_free();
  prob.set_objective(map.xi, 1.0);
  add(origin, map.xi, 1.0);
  for (const auto& [e, c] : pn.terms()) row_of(e);

  std::vector<Exponent> slack_exps;
  for (const auto& [e, c] : pn.terms())
    if (e.is_even_lattice() && c > 0) slack_exps.push_back(e);
  if (!pn.has_term(origin) || pn.coeff(origin) <= 0) slack_exps.push_back(origin);
  for (const auto& e : slack_exps) {
    const std::size_t s = prob.add_nonneg();
    map.slacks.emplace_back(e, s);
    add(e, s, 1.0);
  }

  for (std::size_t k = 0; k < mediated.size(); ++k) {
    for (const auto& t : mediated[k].triples) {
      const std::size_t a = prob.add_rotated_cone();
      map.cones.push_back({k, t, a, a + 1, a + 2});
      add(t.v, a, 2.0);
      add(t.w, a + 1, 1.0);
      add(t.u, a + 2, -2.0);
    }
  }

  touched.resize(prob.num_rows(), false);
  for (const auto& [e, r] : map.rows)
    if (!touched[r]) throw StructuralError("exponent " + e.str() + " is not representable by any square");
  return inst;
}

Certificate extract_certificate(const conic::SolveResult& result, const VariableIndexMap& map, const SparsePoly& pn) {
  constexpr double eps = 1e-10;
  Certificate cert;
  cert.n = pn.n();
  if (result.primal.empty()) throw StructuralError("solver returned no primal point");
  cert.xi = result.primal.at(map.xi);
  cert.solver.status = conic::to_string(result.status);
  cert.solver.iterations = result.iterations;
  cert.solver.solve_time_s = result.solve_time_s;
  cert.solver.primal_residual = result.primal_residual;
  cert.solver.dual_residual = result.dual_residual;
  cert.solver.gap = result.gap;

  std::map<Exponent, double, std::greater<>> mono;
  for (const auto& [e, s] : map.slacks) {
    const double v = result.primal.at(s);
    if (v > 0) mono[e] += v;
  }
  for (const auto& cv : map.cones) {
    double a = result.primal.at(cv.a), b = result.primal.at(cv.b), c = result.primal.at(cv.c);
    const double scale = 1.0 + std::abs(a) + std::abs(b) + std::abs(c);
    const double viol_tol = 1e-6 * scale;
    if (a < -viol_tol || b < -viol_tol || 2 * a * b - c * c < -viol_tol * scale)
      throw StructuralError("cone block violates 2ab >= c^2 beyond tolerance");
    a = std::max(a, 0.0);
    b = std::max(b, 0.0);
    BinomialSquare sq;
    sq.half_v = cv.triple.v * Rational(1, 2);
    sq.half_w = cv.triple.w * Rational(1, 2);
    if (b > eps) {
      sq.q = std::sqrt(b);
      sq.p = c / sq.q;
      const double rem = 2 * a - sq.p * sq.p;
      if (rem > 0) mono[cv.triple.v] += rem;
    } else if (a > eps) {
      sq.p = std::sqrt(2 * a);
      sq.q = c / sq.p;
      const double rem = b - sq.q * sq.q;
      if (rem > 0) mono[cv.triple.w] += rem;
    } else {
      continue;
    }
    if (sq.p < 0) {
      sq.p = -sq.p;
      sq.q = -sq.q;
    }
    cert.squares.push_back(std::move(sq));
  }
  for (const auto& [e, v] : mono) cert.monomials.push_back({v, e});
  cert.pn_form = true;
  return cert;
}

Certificate restore_signs(const Certificate& cert, const SignMap& sign_map) {
  Certificate out = cert;
  out.sign_map = sign_map;
  out.pn_form = false;
  if (sign_map.empty()) return out;
  for (const auto& sq : cert.squares) {
    const Exponent v = sq.half_v * Rational(2), w = sq.half_w * Rational(2);
    if ((sq.p != 0 && sign_map.flipped.count(v)) || (sq.q != 0 && sign_map.flipped.count(w)))
      throw StructuralError("flipped exponent appears as a square term");
  }
  for (const auto& m : cert.monomials)
    if (sign_map.flipped.count(m.exponent)) throw StructuralError("flipped exponent appears as a monomial square");
  for (auto& sq : out.squares)
    if (sign_map.flipped.count(sq.half_v + sq.half_w)) sq.q = -sq.q;
  return out;
}

} // namespace sonc
