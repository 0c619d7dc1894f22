#include "sonc/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <set>

namespace sonc {

const char* to_string(BoundStatus s) {
  switch (s) {
    case BoundStatus::Optimal: return "optimal";
    case BoundStatus::NearOptimal: return "near_optimal";
    case BoundStatus::NearOptimalUnverified: return "near_optimal_unverified";
    case BoundStatus::NoCertificate: return "no_certificate";
    case BoundStatus::SolverFailure: return "solver_failure";
    case BoundStatus::StructuralError: return "structural_error";
  }
  return "unknown";
}

PreparedProblem prepare(const SparsePoly& f, const PipelineConfig& config) {
  PreparedProblem prep;
  auto [pn, sm] = to_pn(f);
  prep.pn = std::move(pn);
  prep.sign_map = std::move(sm);
  prep.partition = partition_support(prep.pn);

  // The constant is absorbed by xi, so the origin is always available as a vertex.
  auto& part = prep.partition;
  const Exponent origin(f.n());
  if (auto it = std::find(part.gamma.begin(), part.gamma.end(), origin); it != part.gamma.end()) {
    part.gamma_d.erase(part.gamma_d.begin() + (it - part.gamma.begin()));
    part.gamma.erase(it);
  }
  if (std::find(part.lambda.begin(), part.lambda.end(), origin) == part.lambda.end()) {
    part.lambda.push_back(origin);
    part.lambda_coeff.push_back(0.0);
  }

  prep.cover = simplex_cover(part, config.cover);
  std::set<Exponent> covered;
  for (const auto& e : prep.cover.entries) covered.insert(e.beta);
  for (const auto& g : part.gamma)
    if (!covered.count(g)) return prep;

  for (const auto& e : prep.cover.entries) prep.mediated.push_back(med_set(e.trellis, e.beta, e.weights));
  prep.socp = build_socp(prep.pn, prep.cover, prep.mediated);
  return prep;
}

BoundResult sonc_lower_bound(const SparsePoly& f, const PipelineConfig& config) {
  if (f.empty()) throw std::invalid_argument("sonc_lower_bound: zero polynomial");
  const auto t0 = std::chrono::steady_clock::now();
  BoundResult out;
  auto& rep = out.report;
  auto finish = [&]() {
    rep.time_total_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
  };

  PreparedProblem prep;
  try {
    prep = prepare(f, config);
  } catch (const StructuralError& e) {
    rep.status = BoundStatus::StructuralError;
    rep.message = e.what();
    out.xi = std::numeric_limits<double>::quiet_NaN();
    return finish();
  } catch (const RationalOverflow& e) {
    rep.status = BoundStatus::StructuralError;
    rep.message = e.what();
    out.xi = std::numeric_limits<double>::quiet_NaN();
    return finish();
  }
  out.cert.n = f.n();
  out.cert.cover = prep.cover;
  out.cert.mediated = prep.mediated;
  out.cert.sign_map = prep.sign_map;
  rep.cover_entries = prep.cover.entries.size();
  if (!prep.socp) {
    rep.status = BoundStatus::NoCertificate;
    rep.message = "some inner term lies outside the hull of the positive even terms";
    out.xi = -std::numeric_limits<double>::infinity();
    out.cert.xi = out.xi;
    return finish();
  }

  const auto& inst = *prep.socp;
  rep.cone_blocks = inst.map.cones.size();
  rep.rows = inst.problem.num_rows();
  const auto res = conic::solve(inst.problem, config.solver);
  rep.time_solver_s = res.solve_time_s;
  rep.iterations = res.iterations;
  if (res.status != conic::SolveStatus::Optimal && res.status != conic::SolveStatus::NearOptimal) {
    rep.status = BoundStatus::SolverFailure;
    rep.message = std::string("solver status ") + conic::to_string(res.status);
    out.xi = std::numeric_limits<double>::quiet_NaN();
    return finish();
  }

  Certificate pn_cert;
  try {
    pn_cert = extract_certificate(res, inst.map, prep.pn);
  } catch (const StructuralError& e) {
    rep.status = BoundStatus::StructuralError;
    rep.message = e.what();
    out.xi = std::numeric_limits<double>::quiet_NaN();
    return finish();
  }
  pn_cert.cover = prep.cover;
  pn_cert.mediated = prep.mediated;
  pn_cert.sign_map = prep.sign_map;
  try {
    out.cert = restore_signs(pn_cert, prep.sign_map);
  } catch (const StructuralError& e) {
    out.cert = pn_cert;
    rep.signs_restored = false;
    rep.message = e.what();
  }
  out.xi = out.cert.xi;

  rep.verify_tol = std::max(config.verify_tol, 10 * config.solver.tol * (1 + f.max_abs_coeff()));
  VerifyOptions vo;
  vo.tol = rep.verify_tol;
  vo.samples = config.verify_samples;
  try {
    rep.verification = verify(out.cert, f, vo);
  } catch (const VerificationError& e) {
    rep.verification.pass = false;
    rep.message = e.what();
  }
  if (!rep.verification.pass) rep.status = BoundStatus::NearOptimalUnverified;
  else rep.status = res.status == conic::SolveStatus::Optimal ? BoundStatus::Optimal : BoundStatus::NearOptimal;
  return finish();
}

} // namespace sonc
