#include <cmath>
#include <random>

#include <doctest.h>

#include "sonc/conic.hpp"
#include "sonc/pipeline.hpp"

using namespace sonc;
using namespace sonc::conic;

namespace {

// max c s.t. a = 1, b = 1, (a, b, c) rotated cone.
ConicProblem sqrt2_problem(double scale = 1.0) {
  ConicProblem p;
  const auto k = p.add_rotated_cone();
  const auto r0 = p.add_row(scale), r1 = p.add_row(scale);
  p.add_coeff(r0, k, scale);
  p.add_coeff(r1, k + 1, scale);
  p.set_objective(k + 2, 1.0);
  return p;
}

// Random feasible bounded LP: max c'x, A x = b, x >= 0, with b = A x0.
ConicProblem random_lp(std::mt19937_64& rng, std::size_t m, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.1, 1.0);
  ConicProblem p;
  p.add_nonneg(n);
  std::vector<double> x0(n);
  for (auto& v : x0) v = pos(rng);
  for (std::size_t i = 0; i < m; ++i) {
    double b = 0.0;
    const auto r = p.add_row();
    for (std::size_t j = 0; j < n; ++j) {
      const double a = u(rng);
      p.add_coeff(r, j, a);
      b += a * x0[j];
    }
    p.set_rhs(r, b);
  }
  // Budget row keeps the problem bounded.
  const auto r = p.add_row();
  double b = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    p.add_coeff(r, j, 1.0);
    b += x0[j];
  }
  p.set_rhs(r, b + 1.0);
  const auto s = p.add_nonneg();
  p.add_coeff(r, s, 1.0);
  for (std::size_t j = 0; j < n; ++j) p.set_objective(j, u(rng));
  return p;
}

} // namespace

TEST_CASE("single rotated cone gives sqrt 2") {
  const auto r = solve(sqrt2_problem());
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(std::abs(r.objective - std::sqrt(2.0)) <= 1e-8);
  CHECK(std::abs(r.dual_objective - std::sqrt(2.0)) <= 1e-7);
  // Scaling the rows leaves the optimum unchanged.
  const auto scaled = solve(sqrt2_problem(1e3));
  CHECK(std::abs(scaled.objective - std::sqrt(2.0)) <= 1e-7);
}

TEST_CASE("tiny LP") {
  ConicProblem p;
  const auto x = p.add_nonneg(2);
  const auto r = p.add_row(1.0);
  p.add_coeff(r, x, 1.0);
  p.add_coeff(r, x + 1, 1.0);
  p.set_objective(x, 1.0);
  const auto res = solve(p);
  REQUIRE(res.status == SolveStatus::Optimal);
  CHECK(res.objective == doctest::Approx(1.0).epsilon(1e-8));
  const auto lp = solve_lp_basic(p);
  REQUIRE(lp.status == SolveStatus::Optimal);
  CHECK(lp.primal[0] == doctest::Approx(1.0));
  CHECK(lp.primal[1] == doctest::Approx(0.0));
}

TEST_CASE("infeasible and unbounded detection") {
  ConicProblem inf;
  const auto x = inf.add_nonneg();
  const auto r = inf.add_row(-1.0);
  inf.add_coeff(r, x, 1.0);
  CHECK(solve(inf).status == SolveStatus::Infeasible);
  CHECK(solve_lp_basic(inf).status == SolveStatus::Infeasible);

  ConicProblem unb;
  const auto y = unb.add_nonneg(2);
  const auto r2 = unb.add_row(1.0);
  unb.add_coeff(r2, y, 1.0);
  unb.add_coeff(r2, y + 1, -1.0);
  unb.set_objective(y, 1.0);
  CHECK(solve(unb).status == SolveStatus::Unbounded);
  CHECK(solve_lp_basic(unb).status == SolveStatus::Unbounded);
}

TEST_CASE("interior point agrees with simplex on random LPs") {
  std::mt19937_64 rng(3);
  for (int k = 0; k < 25; ++k) {
    const auto p = random_lp(rng, 3 + k % 4, 6 + k % 5);
    const auto a = solve(p);
    const auto b = solve_lp_basic(p);
    REQUIRE(b.status == SolveStatus::Optimal);
    REQUIRE(a.status == SolveStatus::Optimal);
    CHECK(a.objective == doctest::Approx(b.objective).epsilon(1e-6));
  }
}

TEST_CASE("simplex keeps a basic support with duplicated columns") {
  ConicProblem p;
  const auto x = p.add_nonneg(4);
  const auto r0 = p.add_row(1.0), r1 = p.add_row(0.5);
  for (std::size_t j = 0; j < 4; ++j) p.add_coeff(r0, x + j, 1.0);
  p.add_coeff(r1, x + 1, 1.0);
  p.add_coeff(r1, x + 2, 1.0);
  p.add_coeff(r1, x + 3, 0.5);
  const auto res = solve_lp_basic(p);
  REQUIRE(res.status == SolveStatus::Optimal);
  int nonzero = 0;
  for (double v : res.primal) nonzero += v > 1e-12;
  CHECK(nonzero <= 2);
}

TEST_CASE("Motzkin cone program") {
  const auto prep = prepare(parse_poly("x1^4*x2^2 + x1^2*x2^4 + 1 - 3*x1^2*x2^2", 2));
  REQUIRE(prep.socp);
  const auto r = solve(prep.socp->problem);
  REQUIRE(r.status == SolveStatus::Optimal);
  CHECK(std::abs(r.objective) <= 1e-6);
}

TEST_CASE("CBF export") {
  const auto text = export_cbf(sqrt2_problem());
  CHECK(text.rfind("VER\n3\n", 0) == 0);
  CHECK(text.find("QR 3") != std::string::npos);
  CHECK(text.find("OBJSENSE\nMAX") != std::string::npos);
  CHECK(text.find("L= 2") != std::string::npos);
  const auto empty = export_cbf(ConicProblem{});
  CHECK(empty.rfind("VER\n3\n", 0) == 0);
}

TEST_CASE("validate rejects bad indices") {
  ConicProblem p;
  p.add_nonneg();
  p.add_row();
  CHECK_THROWS_AS(p.add_coeff(0, 5, 1.0), std::out_of_range);
  CHECK_THROWS_AS(p.add_coeff(3, 0, 1.0), std::out_of_range);
}
