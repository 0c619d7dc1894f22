#pragma once

#include <map>
#include <stdexcept>
#include <vector>

#include "sonc/conic.hpp"
#include "sonc/cover.hpp"
#include "sonc/medseq.hpp"
#include "sonc/poly.hpp"

namespace sonc {

/// weight * (p x^half_v - q x^half_w)^2. Solver output always has weight 1;
/// exact decompositions keep rational weights separate from p and q.
struct BinomialSquare {
  double p = 0.0;
  double q = 0.0;
  Exponent half_v;
  Exponent half_w;
  double weight = 1.0;
};

/// coeff * x^exponent with coeff >= 0. Extraction remainders may sit on
/// mediated points, which is sound for PN forms on the positive orthant.
struct MonomialSquare {
  double coeff = 0.0;
  Exponent exponent;
};

struct SolverStats {
  std::string status;
  int iterations = 0;
  double solve_time_s = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
};

struct Certificate {
  std::size_t n = 0;
  double xi = 0.0;
  std::vector<BinomialSquare> squares;
  std::vector<MonomialSquare> monomials;
  SignMap sign_map;
  /// True while the certificate still refers to the PN form of f.
  bool pn_form = false;
  Cover cover;
  std::vector<MediatedSet> mediated;
  SolverStats solver;
};

/// Thrown when the problem cannot be assembled or a solution cannot be read
/// back as squares.
class StructuralError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct ConeVars {
  std::size_t entry;
  MediatedTriple triple;
  std::size_t a, b, c;
};

struct VariableIndexMap {
  std::size_t xi = 0;
  std::vector<ConeVars> cones;
  /// Nonnegative slack per Lambda exponent (monomial square).
  std::vector<std::pair<Exponent, std::size_t>> slacks;
  std::map<Exponent, std::size_t, std::greater<>> rows;
};

struct SocpInstance {
  conic::ConicProblem problem;
  VariableIndexMap map;
};

/// Assembles the cone program for pn - xi: one rotated cone per mediated
/// triple contributing 2a x^v + b x^w - 2c x^u, one nonnegative slack per
/// even positive exponent (and the origin), and one equality row per exponent.
SocpInstance build_socp(const SparsePoly& pn, const Cover& cover, const std::vector<MediatedSet>& mediated);

/// Reads cone values back as binomial squares plus monomial remainders.
Certificate extract_certificate(const conic::SolveResult& result, const VariableIndexMap& map, const SparsePoly& pn);

/// Flips the cross-term sign of squares centred on a flipped exponent so the
/// certificate refers to the original polynomial.
Certificate restore_signs(const Certificate& cert, const SignMap& sign_map);

} // namespace sonc
