#include "sonc/json_io.hpp"

#include <cmath>
#include <stdexcept>

namespace sonc::io {

namespace {

// JSON has no infinities; they travel as strings.
json number(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

double read_number(const json& j) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf") return INFINITY;
    if (s == "-inf") return -INFINITY;
    if (s == "nan") return NAN;
  }
  throw std::invalid_argument("expected a number, got " + j.dump());
}

json exps_to_json(const std::vector<Exponent>& v) {
  json a = json::array();
  for (const auto& e : v) a.push_back(to_json(e));
  return a;
}

std::vector<Exponent> exps_from_json(const json& j) {
  std::vector<Exponent> out;
  for (const auto& e : j) out.push_back(exponent_from_json(e));
  return out;
}

} // namespace

json to_json(const Exponent& e) {
  json a = json::array();
  for (const auto& c : e.coords()) a.push_back(c.str());
  return a;
}

Exponent exponent_from_json(const json& j) {
  if (!j.is_array()) throw std::invalid_argument("exponent must be an array");
  std::vector<Rational> c;
  for (const auto& v : j) {
    if (v.is_string()) c.push_back(Rational::parse(v.get<std::string>()));
    else if (v.is_number_integer()) c.emplace_back(v.get<std::int64_t>());
    else throw std::invalid_argument("exponent coordinate must be a string or integer");
  }
  return Exponent(std::move(c));
}

json to_json(const Certificate& cert) {
  json j;
  j["n"] = cert.n;
  j["xi"] = number(cert.xi);
  j["pn_form"] = cert.pn_form;
  j["squares"] = json::array();
  for (const auto& s : cert.squares) {
    json q{{"p", s.p}, {"q", s.q}, {"half_v", to_json(s.half_v)}, {"half_w", to_json(s.half_w)}};
    if (s.weight != 1.0) q["weight"] = s.weight;
    j["squares"].push_back(std::move(q));
  }
  j["monomials"] = json::array();
  for (const auto& m : cert.monomials) j["monomials"].push_back({{"coeff", m.coeff}, {"exponent", to_json(m.exponent)}});
  j["sign_map"] = exps_to_json({cert.sign_map.flipped.begin(), cert.sign_map.flipped.end()});

  json cover = json::array();
  for (const auto& e : cert.cover.entries) {
    json w = json::array();
    for (const auto& r : e.weights) w.push_back(r.str());
    cover.push_back({{"trellis", exps_to_json(e.trellis)}, {"beta", to_json(e.beta)}, {"weights", w}});
  }
  json mediated = json::array();
  for (const auto& ms : cert.mediated) {
    json triples = json::array();
    for (const auto& t : ms.triples)
      triples.push_back({{"u", to_json(t.u)}, {"v", to_json(t.v)}, {"w", to_json(t.w)}});
    mediated.push_back({{"trellis", exps_to_json(ms.trellis)}, {"beta", to_json(ms.beta)}, {"triples", triples}});
  }
  const auto& st = cert.solver;
  j["meta"] = {{"cover", cover},
               {"mediated", mediated},
               {"solver",
                {{"status", st.status},
                 {"iterations", st.iterations},
                 {"solve_time_s", st.solve_time_s},
                 {"primal_residual", st.primal_residual},
                 {"dual_residual", st.dual_residual},
                 {"gap", st.gap}}}};
  return j;
}

Certificate certificate_from_json(const json& j) {
  try {
    Certificate cert;
    cert.xi = read_number(j.at("xi"));
    cert.pn_form = j.value("pn_form", false);
    for (const auto& s : j.at("squares")) {
      BinomialSquare b;
      b.p = s.at("p").get<double>();
      b.q = s.at("q").get<double>();
      b.half_v = exponent_from_json(s.at("half_v"));
      b.half_w = exponent_from_json(s.at("half_w"));
      b.weight = s.value("weight", 1.0);
      cert.squares.push_back(std::move(b));
    }
    for (const auto& m : j.at("monomials"))
      cert.monomials.push_back({m.at("coeff").get<double>(), exponent_from_json(m.at("exponent"))});
    if (j.contains("sign_map"))
      for (const auto& e : j.at("sign_map")) cert.sign_map.flipped.insert(exponent_from_json(e));
    if (j.contains("n")) {
      cert.n = j.at("n").get<std::size_t>();
    } else if (!cert.squares.empty()) {
      cert.n = cert.squares.front().half_v.dim();
    } else if (!cert.monomials.empty()) {
      cert.n = cert.monomials.front().exponent.dim();
    }
    if (j.contains("meta")) {
      const auto& meta = j.at("meta");
      for (const auto& e : meta.value("cover", json::array())) {
        CoverEntry ce;
        ce.trellis = exps_from_json(e.at("trellis"));
        ce.beta = exponent_from_json(e.at("beta"));
        for (const auto& w : e.at("weights")) ce.weights.push_back(Rational::parse(w.get<std::string>()));
        cert.cover.entries.push_back(std::move(ce));
      }
      for (const auto& m : meta.value("mediated", json::array())) {
        MediatedSet ms;
        ms.trellis = exps_from_json(m.at("trellis"));
        ms.beta = exponent_from_json(m.at("beta"));
        for (const auto& t : m.at("triples"))
          ms.triples.push_back(
              {exponent_from_json(t.at("u")), exponent_from_json(t.at("v")), exponent_from_json(t.at("w"))});
        cert.mediated.push_back(std::move(ms));
      }
      if (meta.contains("solver")) {
        const auto& s = meta.at("solver");
        cert.solver.status = s.value("status", "");
        cert.solver.iterations = s.value("iterations", 0);
        cert.solver.solve_time_s = s.value("solve_time_s", 0.0);
        cert.solver.primal_residual = s.value("primal_residual", 0.0);
        cert.solver.dual_residual = s.value("dual_residual", 0.0);
        cert.solver.gap = s.value("gap", 0.0);
      }
    }
    for (const auto& s : cert.squares)
      if (s.half_v.dim() != cert.n || s.half_w.dim() != cert.n)
        throw std::invalid_argument("square exponent has the wrong dimension");
    for (const auto& m : cert.monomials)
      if (m.exponent.dim() != cert.n) throw std::invalid_argument("monomial exponent has the wrong dimension");
    return cert;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed certificate: ") + e.what());
  }
}

json to_json(const VerifyReport& r) {
  return {{"exact_residual", number(r.exact_residual)},
          {"numeric_residual", number(r.numeric_residual)},
          {"r_used", r.r_used},
          {"pass", r.pass}};
}

json to_json(const PipelineReport& r) {
  return {{"status", to_string(r.status)},
          {"message", r.message},
          {"time_total_s", r.time_total_s},
          {"time_solver_s", r.time_solver_s},
          {"iterations", r.iterations},
          {"cover_entries", r.cover_entries},
          {"cone_blocks", r.cone_blocks},
          {"rows", r.rows},
          {"signs_restored", r.signs_restored},
          {"verify_tol", r.verify_tol},
          {"verification", to_json(r.verification)}};
}

json to_json(const BenchSpec& s) {
  json j{{"class", to_string(s.cls)}, {"n", s.n}, {"d", s.d}, {"t", s.t}, {"l", s.l}, {"seed", s.seed}};
  if (s.poly) j["poly"] = *s.poly;
  return j;
}

BenchSpec bench_spec_from_json(const json& j) {
  try {
    BenchSpec s;
    if (j.contains("poly")) s.poly = j.at("poly").get<std::string>();
    s.cls = parse_bench_class(j.value("class", std::string("standard")));
    s.n = j.value("n", s.n);
    s.d = j.value("d", s.d);
    s.t = j.value("t", s.t);
    s.l = j.value("l", s.l);
    s.seed = j.value("seed", s.seed);
    return s;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed bench spec: ") + e.what());
  }
}

std::vector<BenchSpec> bench_specs_from_json(const json& j) {
  const json& arr = j.is_object() ? j.at("specs") : j;
  if (!arr.is_array()) throw std::invalid_argument("bench spec document must be an array");
  std::vector<BenchSpec> out;
  for (const auto& s : arr) out.push_back(bench_spec_from_json(s));
  return out;
}

} // namespace sonc::io
