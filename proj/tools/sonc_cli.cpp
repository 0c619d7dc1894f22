#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "sonc/bench.hpp"
#include "sonc/certify.hpp"
#include "sonc/exact.hpp"
#include "sonc/json_io.hpp"
#include "sonc/local_min.hpp"
#include "sonc/medseq.hpp"
#include "sonc/pipeline.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

constexpr const char* kGrammar =
    "polynomial grammar: terms separated by + or -, e.g.\n"
    "  1 + x1^4 + x2^4 - x1*x2^2 - x1^2*x2 + 5*x1*x2\n"
    "  coefficient: decimal number; variable: x<index>, indices from 1;\n"
    "  exponent: integer, p/q or (p/q); lines starting with # are ignored.\n";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

sonc::SparsePoly read_poly(const std::string& path) {
  std::istringstream in(read_file(path));
  std::string line, text;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    text += line + ' ';
  }
  try {
    return sonc::parse_poly(text);
  } catch (const sonc::PolyParseError& e) {
    throw UsageError(std::string(path) + ": " + e.what() + "\n" + kGrammar);
  }
}

std::string fixed6(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  std::string s = buf;
  if (s.find_first_not_of("-0.") == std::string::npos) s = "0.000000";
  return s;
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
}

sonc::Exponent parse_point(const std::string& text) {
  std::vector<sonc::Rational> c;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto a = tok.find_first_not_of(" ()"), b = tok.find_last_not_of(" ()");
    if (a == std::string::npos) throw UsageError("empty coordinate in '" + text + "'");
    c.push_back(sonc::Rational::parse(tok.substr(a, b - a + 1)));
  }
  return sonc::Exponent(std::move(c));
}

// Points separated by ';' or whitespace.
std::vector<sonc::Exponent> parse_points(std::string text) {
  std::replace(text.begin(), text.end(), ';', ' ');
  std::vector<sonc::Exponent> out;
  std::stringstream ss(text);
  std::string tok;
  while (ss >> tok) out.push_back(parse_point(tok));
  return out;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Lower bounds for sparse polynomials via sums of nonnegative circuits"};
  app.footer(kGrammar);
  app.require_subcommand(1);

  std::string poly_file, cert_file, spec_file, out_file;
  double tol = 1e-8, verify_tol = 1e-6;
  int max_iter = 200, starts = 32, samples = 200;
  unsigned threads = 0;
  std::uint64_t seed = 0;
  bool verbose = false, with_local = false, json_out = false, literal_cover = false, no_timing = false, odd = false;
  std::string trellis_text, beta_text;

  auto* bound = app.add_subcommand("bound", "Certified lower bound of a polynomial");
  bound->add_option("polyfile", poly_file, "Polynomial file")->required();
  bound->add_option("--tol", tol, "Solver tolerance")->capture_default_str();
  bound->add_option("--max-iter", max_iter, "Solver iteration limit")->capture_default_str();
  bound->add_option("--out", out_file, "Write the certificate as JSON");
  bound->add_flag("--local", with_local, "Also report a local upper bound");
  bound->add_option("--starts", starts, "Local search starts")->capture_default_str();
  bound->add_option("--seed", seed, "Local search seed")->capture_default_str();
  bound->add_flag("--literal-cover", literal_cover, "Do not pin the origin as first cover vertex");
  bound->add_flag("--json", json_out, "Print the report as JSON");
  bound->add_flag("--verbose", verbose, "Print solver iterations");

  auto* certify = app.add_subcommand("certify", "Verify a certificate against a polynomial");
  certify->add_option("polyfile", poly_file, "Polynomial file")->required();
  certify->add_option("certfile", cert_file, "Certificate JSON")->required();
  certify->add_option("--tol", verify_tol, "Coefficient tolerance")->capture_default_str();
  certify->add_option("--samples", samples, "Numeric sample points")->capture_default_str();

  auto* bench = app.add_subcommand("bench", "Run a benchmark batch");
  bench->add_option("specfile", spec_file, "Bench spec JSON")->required();
  bench->add_option("--out", out_file, "CSV output")->required();
  bench->add_option("--threads", threads, "Worker threads, 0 for all cores")->capture_default_str();
  bench->add_option("--starts", starts, "Local search starts")->capture_default_str();
  bench->add_option("--tol", tol, "Solver tolerance")->capture_default_str();
  bench->add_flag("--no-timing", no_timing, "Write zero times for reproducible output");

  auto* cbf = app.add_subcommand("export-cbf", "Write the cone program in CBF");
  cbf->add_option("polyfile", poly_file, "Polynomial file")->required();
  cbf->add_option("--out", out_file, "CBF output")->required();

  auto* medset = app.add_subcommand("medset", "Print a mediated set");
  medset->add_option("--trellis", trellis_text, "Vertices separated by ';' or spaces, e.g. \"0,0;4,2;2,4\"")->required();
  medset->add_option("--beta", beta_text, "Inner point, e.g. \"2,2\"")->required();
  medset->add_flag("--odd", odd, "Odd-denominator variant");

  auto* local = app.add_subcommand("local", "Local upper bound by multi-start descent");
  local->add_option("polyfile", poly_file, "Polynomial file")->required();
  local->add_option("--starts", starts, "Starts")->capture_default_str();
  local->add_option("--seed", seed, "Seed")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*bound) {
      const auto f = read_poly(poly_file);
      sonc::PipelineConfig cfg;
      cfg.solver.tol = tol;
      cfg.solver.max_iter = max_iter;
      cfg.solver.verbose = verbose;
      cfg.cover.pin_origin = !literal_cover;
      const auto res = sonc::sonc_lower_bound(f, cfg);
      if (!out_file.empty()) write_file(out_file, sonc::io::to_json(res.cert).dump(2) + "\n");
      double xi_min = NAN;
      if (with_local) xi_min = sonc::local_upper_bound(f, starts, seed);
      if (json_out) {
        auto j = sonc::io::to_json(res.report);
        j["xi_socp"] = std::isfinite(res.xi) ? nlohmann::json(res.xi) : nlohmann::json(fixed6(res.xi));
        if (with_local) j["xi_min"] = xi_min;
        std::cout << j.dump(2) << "\n";
      } else {
        std::cout << "xi_socp = " << fixed6(res.xi) << "\n";
        if (with_local) std::cout << "xi_min = " << fixed6(xi_min) << "\n";
        std::cout << "status = " << sonc::to_string(res.report.status) << "\n";
        if (!res.report.message.empty()) std::cout << "message = " << res.report.message << "\n";
        std::printf("exact_residual = %.3e\niterations = %d\ntime_total_s = %.4f\n",
                    res.report.verification.exact_residual, res.report.iterations, res.report.time_total_s);
      }
      const auto st = res.report.status;
      return st == sonc::BoundStatus::Optimal || st == sonc::BoundStatus::NearOptimal ? kOk : kFailed;
    }
    if (*certify) {
      const auto f = read_poly(poly_file);
      sonc::Certificate cert;
      try {
        cert = sonc::io::certificate_from_json(nlohmann::json::parse(read_file(cert_file)));
      } catch (const nlohmann::json::exception& e) {
        throw UsageError(cert_file + ": " + e.what());
      } catch (const std::invalid_argument& e) {
        throw UsageError(cert_file + ": " + e.what());
      }
      if (cert.n != f.n()) throw UsageError("certificate and polynomial have different numbers of variables");
      sonc::VerifyOptions vo;
      vo.tol = verify_tol;
      vo.samples = samples;
      const auto rep = sonc::verify(cert, f, vo);
      std::cout << sonc::io::to_json(rep).dump(2) << "\n";
      return rep.pass ? kOk : kFailed;
    }
    if (*bench) {
      std::vector<sonc::BenchSpec> specs;
      try {
        specs = sonc::io::bench_specs_from_json(nlohmann::json::parse(read_file(spec_file)));
      } catch (const nlohmann::json::exception& e) {
        throw UsageError(spec_file + ": " + e.what());
      } catch (const std::invalid_argument& e) {
        throw UsageError(spec_file + ": " + e.what());
      }
      sonc::BenchOptions opt;
      opt.config.solver.tol = tol;
      opt.starts = starts;
      opt.threads = threads;
      opt.record_times = !no_timing;
      const auto rows = sonc::run_bench(specs, opt);
      std::ofstream out(out_file);
      if (!out) throw UsageError("cannot write '" + out_file + "'");
      sonc::write_csv(out, rows);
      std::cout << rows.size() << " rows written to " << out_file << "\n";
      return kOk;
    }
    if (*cbf) {
      const auto f = read_poly(poly_file);
      const auto prep = sonc::prepare(f);
      if (!prep.socp) {
        std::cerr << "no certificate: some inner term is not covered\n";
        return kFailed;
      }
      write_file(out_file, sonc::conic::export_cbf(prep.socp->problem));
      std::cout << "wrote " << out_file << " (" << prep.socp->problem.num_vars() << " variables, "
                << prep.socp->problem.num_rows() << " rows)\n";
      return kOk;
    }
    if (*medset) {
      const auto trellis = parse_points(trellis_text);
      const auto beta = parse_point(beta_text);
      auto weights = sonc::exact::barycentric(trellis, beta);
      if (!weights) throw UsageError("beta is not in the affine hull of an affinely independent trellis");
      for (const auto& w : *weights)
        if (w.sign() <= 0) throw UsageError("beta is not in the relative interior of the trellis");
      const auto ms = odd ? sonc::med_set_odd(trellis, beta, *weights) : sonc::med_set(trellis, beta, *weights);
      for (const auto& t : ms.triples)
        std::cout << "u = " << t.u.str() << "  v = " << t.v.str() << "  w = " << t.w.str() << "\n";
      std::cout << ms.triples.size() << " midpoints, " << ms.points().size() << " points\n";
      return kOk;
    }
    if (*local) {
      const auto f = read_poly(poly_file);
      const auto r = sonc::local_minimize(f, starts, seed);
      std::cout << "xi_min = " << fixed6(r.value) << "\n";
      return kOk;
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}
