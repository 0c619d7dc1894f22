#include <cmath>
#include <set>

#include <doctest.h>

#include "sonc/poly.hpp"

using namespace sonc;

namespace {

Exponent E(std::initializer_list<long long> v) { return Exponent::from_ints(std::vector<long long>(v)); }

SparsePoly motzkin() { return parse_poly("x1^4*x2^2 + x1^2*x2^4 + 1 - 3*x1^2*x2^2", 2); }

std::set<Exponent> as_set(const std::vector<Exponent>& v) { return {v.begin(), v.end()}; }

} // namespace

TEST_CASE("rational arithmetic") {
  const Rational a(1, 3), b(1, 6);
  CHECK(a + b == Rational(1, 2));
  CHECK(a - b == Rational(1, 6));
  CHECK(a * b == Rational(1, 18));
  CHECK(a / b == Rational(2));
  CHECK(Rational(4, -6) == Rational(-2, 3));
  CHECK(Rational::parse("-10/4") == Rational(-5, 2));
  CHECK(Rational::parse("7").is_integer());
  CHECK(Rational(2, 3) < Rational(3, 4));
  CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
  CHECK_THROWS_AS(Rational(INT64_MAX) + Rational(1), RationalOverflow);
}

TEST_CASE("parse_poly") {
  const auto m = motzkin();
  CHECK(m.size() == 4);
  CHECK(m.coeff(E({2, 2})) == -3.0);
  CHECK(parse_poly("0", 3).empty());
  const auto merged = parse_poly("2*x1 + 3*x1", 1);
  CHECK(merged.size() == 1);
  CHECK(merged.coeff(E({1})) == 5.0);
  const auto frac = parse_poly("x1^(1/2)*x2^3/2", 2);
  CHECK(frac.has_term(Exponent{Rational(1, 2), Rational(3, 2)}));
  CHECK_THROWS_AS(parse_poly("1 + x1^^2", 1), PolyParseError);
  CHECK_THROWS_AS(parse_poly("x3", 2), PolyParseError);
}

TEST_CASE("partition_support") {
  const auto p = partition_support(motzkin());
  CHECK(as_set(p.lambda) == std::set<Exponent>{E({4, 2}), E({2, 4}), E({0, 0})});
  CHECK(as_set(p.gamma) == std::set<Exponent>{E({2, 2})});
  CHECK(p.gamma_d.at(0) == 3.0);

  const auto neg = partition_support(parse_poly("-x1^2", 1));
  CHECK(neg.lambda.empty());
  CHECK(as_set(neg.gamma) == std::set<Exponent>{E({2})});

  const auto c = partition_support(parse_poly("50*x1^4*x2^4 + x1^4 + 3*x2^4 + 800 - 100*x1*x2^2 - 100*x1^2*x2", 2));
  CHECK(c.lambda.size() == 4);
  CHECK(as_set(c.gamma) == std::set<Exponent>{E({2, 1}), E({1, 2})});
  CHECK(reassemble(c) == parse_poly("50*x1^4*x2^4 + x1^4 + 3*x2^4 + 800 - 100*x1*x2^2 - 100*x1^2*x2", 2));
}

TEST_CASE("to_pn") {
  const auto f = parse_poly("1 + x1^4 + x2^4 - x1*x2^2 - x1^2*x2 + 5*x1*x2", 2);
  const auto [pn, sm] = to_pn(f);
  CHECK(pn == parse_poly("1 + x1^4 + x2^4 - x1*x2^2 - x1^2*x2 - 5*x1*x2", 2));
  CHECK(sm.flipped == std::set<Exponent>{E({1, 1})});
  CHECK(apply_sign_map(pn, sm) == f);

  const auto [same, none] = to_pn(motzkin());
  CHECK(same == motzkin());
  CHECK(none.empty());

  const auto sq = parse_poly("x1^2 - 2*x1*x2 + x2^2", 2);
  CHECK(to_pn(sq).first == sq);
  CHECK(to_pn(sq).second.empty());
}

TEST_CASE("substitute_power and eval") {
  CHECK(substitute_power(motzkin(), 3) == parse_poly("x1^12*x2^6 + x1^6*x2^12 + 1 - 3*x1^6*x2^6", 2));
  CHECK(substitute_power(motzkin(), 1) == motzkin());
  SparsePoly g(2);
  g.add_term(Exponent{Rational(2, 3), Rational(4, 3)}, 1.0);
  CHECK(substitute_power(g, 3).has_term(E({2, 4})));

  CHECK(eval(motzkin(), {1.0, 1.0}) == doctest::Approx(0.0));
  CHECK(eval(motzkin(), {0.0, 0.0}) == 1.0);
  CHECK(eval(parse_poly("x1^(1/2)", 1), {4.0}) == doctest::Approx(2.0));
  // Odd powers keep their sign for negative arguments.
  CHECK(eval(parse_poly("x1^3", 1), {-2.0}) == doctest::Approx(-8.0));

  std::vector<double> grad;
  const double v = eval_gradient(motzkin(), {2.0, 1.0}, grad);
  CHECK(v == doctest::Approx(16 + 4 + 1 - 12));
  CHECK(grad[0] == doctest::Approx(4 * 8 + 2 * 2 - 6 * 2));
  CHECK(grad[1] == doctest::Approx(2 * 16 + 4 * 4 - 6 * 4));
}

TEST_CASE("circuits") {
  const auto c = is_circuit(motzkin());
  REQUIRE(c);
  CHECK(c->barycentric == std::vector<Rational>{Rational(1, 3), Rational(1, 3), Rational(1, 3)});
  CHECK(c->d == 3.0);
  CHECK(circuit_number(*c) == doctest::Approx(3.0));
  CHECK(circuit_nonneg(*c));

  auto worse = *c;
  worse.d = 3.001;
  CHECK_FALSE(circuit_nonneg(worse));

  const auto mono = is_circuit(parse_poly("x1^2*x2^2", 2));
  REQUIRE(mono);
  CHECK(mono->is_monomial_square());

  CHECK_FALSE(is_circuit(parse_poly("x1^4 + x2^4 - x1^2*x2^2 - 1", 2)));

  // Theta = prod (c/lambda)^lambda, evaluated directly.
  const auto g1 = is_circuit(parse_poly("20*x1^4*x2^4 + x1^4 + 400 - 100*x1^2*x2", 2));
  REQUIRE(g1);
  const double theta = std::pow(80.0, 0.25) * std::pow(4.0, 0.25) * std::sqrt(800.0);
  CHECK(circuit_number(*g1) == doctest::Approx(theta).epsilon(1e-12));
  CHECK(theta == doctest::Approx(119.628).epsilon(1e-4));

  // c_alpha = lambda_alpha gives Theta = 1.
  const auto unit = make_circuit({E({0, 0}), E({4, 0}), E({0, 4})}, {0.5, 0.25, 0.25}, E({1, 1}), 1.0);
  REQUIRE(unit);
  CHECK(circuit_number(*unit) == doctest::Approx(1.0));

  // Odd beta: nonnegative iff |d| <= Theta.
  const auto odd = make_circuit({E({0}), E({2})}, {1.0, 1.0}, E({1}), -2.0);
  REQUIRE(odd);
  CHECK(circuit_nonneg(*odd));
  auto odd_bad = *odd;
  odd_bad.d = -2.01;
  CHECK_FALSE(circuit_nonneg(odd_bad));
}
