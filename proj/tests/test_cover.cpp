#include <set>

#include <doctest.h>

#include "sonc/cover.hpp"

using namespace sonc;

namespace {

Exponent E(std::initializer_list<long long> v) { return Exponent::from_ints(std::vector<long long>(v)); }

std::set<Exponent> support(const std::vector<Exponent>& pts, const std::vector<double>& w) {
  std::set<Exponent> s;
  for (std::size_t i = 0; i < pts.size(); ++i)
    if (w[i] > 1e-9) s.insert(pts[i]);
  return s;
}

const char* kCoverExample = "50*x1^4*x2^4 + x1^4 + 3*x2^4 + 800 - 100*x1*x2^2 - 100*x1^2*x2";

} // namespace

TEST_CASE("sim_sel") {
  const std::vector<Exponent> motzkin{E({4, 2}), E({2, 4}), E({0, 0})};
  const auto w = sim_sel(E({2, 2}), motzkin, E({0, 0}));
  REQUIRE(w);
  for (double v : *w) CHECK(v == doctest::Approx(1.0 / 3));

  const std::vector<Exponent> square{E({0, 0}), E({4, 0}), E({0, 4}), E({4, 4})};
  const auto w2 = sim_sel(E({1, 2}), square, E({4, 4}));
  REQUIRE(w2);
  CHECK(support(square, *w2) == std::set<Exponent>{E({0, 0}), E({0, 4}), E({4, 4})});

  CHECK_FALSE(sim_sel(E({5, 5}), {E({0, 0}), E({2, 0}), E({0, 2})}, E({0, 0})));
}

TEST_CASE("simplex_cover on the two-circuit example") {
  const auto part = partition_support(parse_poly(kCoverExample, 2));
  const auto cover = simplex_cover(part);
  REQUIRE(cover.complete());
  REQUIRE(cover.entries.size() == 2);
  std::set<Exponent> betas;
  const std::set<Exponent> lam{E({0, 0}), E({4, 0}), E({0, 4}), E({4, 4})};
  for (const auto& e : cover.entries) {
    betas.insert(e.beta);
    for (const auto& v : e.trellis) CHECK(lam.count(v));
    Rational sum;
    for (const auto& w : e.weights) sum += w;
    CHECK(sum == Rational(1));
  }
  CHECK(betas == std::set<Exponent>{E({2, 1}), E({1, 2})});
  CHECK(validate_cover(cover, part));
}

TEST_CASE("simplex_cover edge cases") {
  const auto part = partition_support(parse_poly("1 + x1^2 + x2^2", 2));
  const auto cover = simplex_cover(part);
  CHECK(cover.entries.empty());
  CHECK(cover.uncovered_lambda.size() == 3);

  const auto m = partition_support(parse_poly("x1^4*x2^2 + x1^2*x2^4 + 1 - 3*x1^2*x2^2", 2));
  const auto mc = simplex_cover(m);
  REQUIRE(mc.entries.size() == 1);
  CHECK(mc.entries[0].trellis.size() == 3);

  const auto outside = partition_support(parse_poly("x1^2 + x1*x2", 2));
  CHECK_FALSE(simplex_cover(outside).complete());
  CHECK(simplex_cover(outside).no_certificate.size() == 1);
}

TEST_CASE("validate_cover rejects bad entries") {
  const auto part = partition_support(parse_poly(kCoverExample, 2));
  const auto good = simplex_cover(part);

  auto dup = good;
  dup.entries[0].trellis[1] = dup.entries[0].trellis[0];
  CHECK_FALSE(validate_cover(dup, part));

  auto off = good;
  off.entries[0].weights[0] -= Rational(1, 1000);
  CHECK_FALSE(validate_cover(off, part));

  auto missing = good;
  missing.entries.pop_back();
  CHECK_FALSE(validate_cover(missing, part));
}

TEST_CASE("certify_entry returns exact weights") {
  const std::vector<Exponent> motzkin{E({4, 2}), E({2, 4}), E({0, 0})};
  const auto e = certify_entry(E({2, 2}), motzkin, {0.3333333333, 0.3333333334, 0.3333333333});
  REQUIRE(e);
  CHECK(e->weights == std::vector<Rational>(3, Rational(1, 3)));
  CHECK_FALSE(certify_entry(E({1, 1}), {E({4, 2}), E({2, 4})}, {0.5, 0.5}));
}
