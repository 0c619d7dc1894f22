#include <cmath>
#include <set>

#include <doctest.h>

#include "sonc/certify.hpp"
#include "sonc/pipeline.hpp"

using namespace sonc;

namespace {

Exponent E(std::initializer_list<long long> v) { return Exponent::from_ints(std::vector<long long>(v)); }

SparsePoly motzkin() { return parse_poly("x1^4*x2^2 + x1^2*x2^4 + 1 - 3*x1^2*x2^2", 2); }

// (1 - x y^2)^2 + 2 (x^{1/2} y - x^{3/2} y)^2 + (x y - x^2 y)^2
Certificate motzkin_by_hand() {
  Certificate c;
  c.n = 2;
  const Rational h(1, 2);
  c.squares.push_back({1.0, 1.0, E({0, 0}), E({1, 2})});
  c.squares.push_back({1.0, 1.0, Exponent{h, 1}, Exponent{Rational(3, 2), 1}, 2.0});
  c.squares.push_back({1.0, 1.0, E({1, 1}), E({2, 1})});
  return c;
}

} // namespace

TEST_CASE("build_socp on the Motzkin polynomial") {
  const auto prep = prepare(motzkin());
  REQUIRE(prep.socp);
  const auto& map = prep.socp->map;
  CHECK(map.cones.size() == 3);
  std::set<Exponent> rows;
  for (const auto& [e, r] : map.rows) rows.insert(e);
  CHECK(rows == std::set<Exponent>{E({0, 0}), E({4, 2}), E({2, 4}), E({2, 2}), E({1, 2}), E({3, 2})});
}

TEST_CASE("constant polynomial is its own bound") {
  const auto res = sonc_lower_bound(parse_poly("7", 1));
  CHECK(res.report.status == BoundStatus::Optimal);
  CHECK(res.xi == doctest::Approx(7.0).epsilon(1e-8));
  CHECK(res.cert.squares.empty());
}

TEST_CASE("extracted Motzkin certificate") {
  const auto res = sonc_lower_bound(motzkin());
  REQUIRE(res.report.status == BoundStatus::Optimal);
  CHECK(std::abs(res.xi) <= 1e-6);
  const auto ex = verify_exact(res.cert, motzkin(), 1e-6);
  CHECK(ex.ok);
  CHECK(verify_numeric(res.cert, motzkin(), 1000, 4) <= 1e-6);
  // Remainders may land on mediated points; only their sign matters.
  for (const auto& m : res.cert.monomials) CHECK(m.coeff >= 0.0);
}

TEST_CASE("verify_exact on hand-made certificates") {
  const auto cert = motzkin_by_hand();
  const auto ex = verify_exact(cert, motzkin(), 0.0);
  CHECK(ex.ok);
  CHECK(ex.max_residual == 0.0);
  CHECK(ex.r == 1);

  auto bad = cert;
  bad.squares[0].weight = 1.0 + 1e-3;
  const auto ex_bad = verify_exact(bad, motzkin(), 1e-6);
  CHECK_FALSE(ex_bad.ok);
  // The cross term x y^2 carries twice the weight change.
  CHECK(ex_bad.max_residual == doctest::Approx(2e-3).epsilon(1e-6));

  CHECK(verify_numeric(cert, motzkin(), 1000, 1) <= 1e-9);

  Certificate empty;
  empty.n = 2;
  CHECK(verify_numeric(empty, motzkin(), 50, 1) > 0.1);

  Certificate constant;
  constant.n = 1;
  constant.xi = 5.0;
  CHECK(verify_numeric(constant, parse_poly("5", 1), 20, 1) == 0.0);
}

TEST_CASE("circuit decomposition with integer mediated set") {
  const auto c = is_circuit(motzkin());
  REQUIRE(c);
  const auto ms = med_set(c->trellis, *c->beta, c->barycentric);
  const auto dec = verify_circuit_decomposition(*c, ms);
  REQUIRE(dec.exact);
  std::multiset<Rational> got(dec.exact_coefficients.begin(), dec.exact_coefficients.end());
  CHECK(got == std::multiset<Rational>{Rational(1), Rational(2), Rational(1)});
  const auto ex = verify_exact(dec, motzkin());
  CHECK(ex.ok);
  CHECK(ex.max_residual == 0.0);
  CHECK(verify_exact(dec.cert, motzkin(), 1e-12).ok);
}

TEST_CASE("circuit decomposition along the odd mediated set") {
  const auto c = is_circuit(motzkin());
  REQUIRE(c);
  const auto ms = med_set_odd(c->trellis, *c->beta, c->barycentric);
  const auto dec = verify_circuit_decomposition(*c, ms);
  REQUIRE(dec.exact);
  const Rational h(1, 2);
  const std::map<Exponent, Rational> expect{{E({2, 2}), Rational(3, 2)},
                                            {Exponent{Rational(4, 3), Rational(8, 3)}, Rational(1)},
                                            {Exponent{Rational(2, 3), Rational(4, 3)}, h},
                                            {Exponent{Rational(8, 3), Rational(4, 3)}, Rational(1)},
                                            {Exponent{Rational(4, 3), Rational(2, 3)}, h}};
  REQUIRE(dec.triples.size() == expect.size());
  for (std::size_t i = 0; i < dec.triples.size(); ++i) CHECK(dec.exact_coefficients[i] == expect.at(dec.triples[i].u));
  const auto ex = verify_exact(dec, motzkin());
  CHECK(ex.max_residual == 0.0);
  CHECK(ex.r == 3);
}

TEST_CASE("decomposition edge cases") {
  const auto none = make_circuit({E({0, 0}), E({4, 0}), E({0, 4})}, {1.0, 1.0, 1.0}, E({2, 1}), 0.0);
  REQUIRE(none);
  const auto ms = med_set(none->trellis, *none->beta, none->barycentric);
  const auto dec = verify_circuit_decomposition(*none, ms);
  CHECK(dec.cert.squares.empty());
  CHECK(dec.cert.monomials.size() == 3);

  auto too_big = *is_circuit(motzkin());
  too_big.d = 3.5;
  const auto ms2 = med_set(too_big.trellis, *too_big.beta, too_big.barycentric);
  CHECK_THROWS_AS(verify_circuit_decomposition(too_big, ms2), std::domain_error);
}

TEST_CASE("restore_signs") {
  const auto f = parse_poly("1 + x1^4 + x2^4 - x1*x2^2 - x1^2*x2 + 5*x1*x2", 2);
  const auto res = sonc_lower_bound(f);
  REQUIRE((res.report.status == BoundStatus::Optimal || res.report.status == BoundStatus::NearOptimal));
  CHECK(verify_exact(res.cert, f, res.report.verify_tol).ok);

  Certificate plain = motzkin_by_hand();
  const auto same = restore_signs(plain, SignMap{});
  CHECK(verify_exact(same, motzkin(), 0.0).max_residual == 0.0);
}
