#include <cmath>
#include <set>
#include <sstream>

#include <doctest.h>

#include "sonc/bench.hpp"
#include "sonc/cover.hpp"
#include "sonc/exact.hpp"
#include "sonc/json_io.hpp"
#include "sonc/local_min.hpp"
#include "sonc/pipeline.hpp"

using namespace sonc;

namespace {

const char* kMotzkin = "x1^4*x2^2 + x1^2*x2^4 + 1 - 3*x1^2*x2^2";
const char* kQuartic = "1 + x1^4 + x2^4 - x1*x2^2 - x1^2*x2 + 5*x1*x2";

Exponent E(std::initializer_list<long long> v) { return Exponent::from_ints(std::vector<long long>(v)); }

bool good(BoundStatus s) { return s == BoundStatus::Optimal || s == BoundStatus::NearOptimal; }

} // namespace

TEST_CASE("sonc_lower_bound examples") {
  const auto m = sonc_lower_bound(parse_poly(kMotzkin, 2));
  CHECK(m.report.status == BoundStatus::Optimal);
  CHECK(std::abs(m.xi) <= 1e-6);

  const auto q = sonc_lower_bound(parse_poly(kQuartic, 2));
  CHECK(good(q.report.status));
  CHECK(q.xi == doctest::Approx(-6.916501).epsilon(1e-6));

  const auto none = sonc_lower_bound(parse_poly("x1^2 + x1*x2", 2));
  CHECK(none.report.status == BoundStatus::NoCertificate);
  CHECK(std::isinf(none.xi));
  CHECK(none.xi < 0);
}

TEST_CASE("lower bound stays below sampled values") {
  const auto f = parse_poly(kQuartic, 2);
  const auto r = sonc_lower_bound(f);
  for (double x = -2; x <= 2; x += 0.25)
    for (double y = -2; y <= 2; y += 0.25) CHECK(eval(f, {x, y}) >= r.xi - 1e-6);
}

TEST_CASE("local_upper_bound") {
  CHECK(std::abs(local_upper_bound(parse_poly(kMotzkin, 2))) <= 1e-6);
  CHECK(local_upper_bound(parse_poly(kQuartic, 2)) == doctest::Approx(-2.203372).epsilon(1e-6));
  const auto sq = local_minimize(parse_poly("x1^2 - 2*x1 + 1", 1));
  CHECK(std::abs(sq.value) <= 1e-10);
  CHECK(sq.x[0] == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_THROWS(local_minimize(parse_poly("x1^(1/2)", 1)));
}

TEST_CASE("gen_bench") {
  BenchSpec s;
  s.n = 2;
  s.d = 4;
  s.t = 4;
  s.seed = 7;
  const auto f = gen_bench(s);
  const auto part = partition_support(f);
  CHECK(std::set<Exponent>(part.lambda.begin(), part.lambda.end()) ==
        std::set<Exponent>{E({0, 0}), E({4, 0}), E({0, 4})});
  CHECK(f.size() == 4);
  CHECK(gen_bench(s) == f);

  BenchSpec g;
  g.cls = BenchClass::GeneralSimplex;
  g.n = 10;
  g.d = 40;
  g.t = 20;
  g.seed = 1;
  const auto gf = gen_bench(g);
  CHECK(gf.size() == 20);
  const auto gp = partition_support(gf);
  CHECK(gp.lambda.size() == 11);
  CHECK(exact::affinely_independent(gp.lambda));

  BenchSpec a;
  a.cls = BenchClass::ArbitraryPolytope;
  a.n = 3;
  a.d = 6;
  a.t = 12;
  a.l = 3;
  a.seed = 2;
  const auto af = gen_bench(a);
  CHECK(af.size() == 12);
  CHECK(simplex_cover(partition_support(af)).complete());

  BenchSpec bad = s;
  bad.d = 5;
  CHECK_THROWS_AS(gen_bench(bad), std::invalid_argument);
  bad = s;
  bad.t = 30;
  CHECK_THROWS_AS(gen_bench(bad), std::invalid_argument);
}

TEST_CASE("run_bench rows and CSV") {
  std::vector<BenchSpec> specs(3);
  specs[0].seed = 1;
  specs[1].cls = BenchClass::GeneralSimplex;
  specs[1].t = 5;
  specs[2].poly = "x1^2 + x1*x2";
  BenchOptions opt;
  opt.starts = 4;
  opt.threads = 2;
  opt.record_times = false;
  const auto rows = run_bench(specs, opt);
  REQUIRE(rows.size() == 3);
  CHECK(rows[2].status == "no_certificate");
  CHECK(std::isinf(rows[2].xi_socp));
  std::ostringstream a, b;
  write_csv(a, rows);
  write_csv(b, run_bench(specs, opt));
  CHECK(a.str() == b.str());
  std::istringstream in(a.str());
  std::string line;
  int count = 0;
  std::getline(in, line);
  CHECK(line == csv_header());
  while (std::getline(in, line)) ++count;
  CHECK(count == 3);

  BenchSpec mot;
  mot.poly = kMotzkin;
  const auto row = run_one(mot, opt);
  CHECK(row.gap <= 1e-4);
}

TEST_CASE("relative_gap") {
  CHECK(relative_gap(2.0, 1.0) == doctest::Approx(0.5));
  CHECK(relative_gap(0.0, -1e-7) == doctest::Approx(1e-7));
  CHECK(std::isinf(relative_gap(1.0, -INFINITY)));
}

TEST_CASE("certificate JSON round trip") {
  const auto f = parse_poly(kQuartic, 2);
  const auto r = sonc_lower_bound(f);
  const auto j = io::to_json(r.cert);
  const auto back = io::certificate_from_json(nlohmann::json::parse(j.dump()));
  CHECK(back.xi == r.cert.xi);
  CHECK(back.squares.size() == r.cert.squares.size());
  CHECK(back.sign_map.flipped == r.cert.sign_map.flipped);
  CHECK(verify_exact(back, f, r.report.verify_tol).max_residual ==
        verify_exact(r.cert, f, r.report.verify_tol).max_residual);
  CHECK_THROWS_AS(io::certificate_from_json(nlohmann::json::parse("{\"xi\": 1}")), std::invalid_argument);

  const auto specs = io::bench_specs_from_json(nlohmann::json::parse(R"({"specs": [{"class": "general", "n": 3}]})"));
  REQUIRE(specs.size() == 1);
  CHECK(specs[0].cls == BenchClass::GeneralSimplex);
  CHECK(specs[0].n == 3);
  CHECK_THROWS_AS(io::bench_specs_from_json(nlohmann::json::parse(R"([{"class": "weird"}])")), std::invalid_argument);
}
