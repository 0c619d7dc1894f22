#include <cstdio>
#include <map>
#include <sstream>

#include "sonc/conic.hpp"

namespace sonc::conic {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

} // namespace

std::string export_cbf(const ConicProblem& p) {
  p.validate();
  std::ostringstream os;
  os << "VER\n3\n\n";
  os << "OBJSENSE\nMAX\n\n";
  if (p.num_vars() == 0 && p.num_rows() == 0) return os.str();

  os << "VAR\n" << p.num_vars() << ' ' << p.blocks().size() << '\n';
  for (const auto& b : p.blocks()) {
    const char* dom = b.kind == ConeKind::Free ? "F" : b.kind == ConeKind::NonNeg ? "L+" : "QR";
    os << dom << ' ' << b.width << '\n';
  }
  os << '\n';

  if (p.num_rows() > 0) os << "CON\n" << p.num_rows() << " 1\nL= " << p.num_rows() << "\n\n";

  std::size_t nobj = 0;
  for (double c : p.objective()) nobj += c != 0.0;
  if (nobj) {
    os << "OBJACOORD\n" << nobj << '\n';
    for (std::size_t j = 0; j < p.num_vars(); ++j)
      if (p.objective()[j] != 0.0) os << j << ' ' << num(p.objective()[j]) << '\n';
    os << '\n';
  }

  std::map<std::pair<std::size_t, std::size_t>, double> a;
  for (const auto& t : p.entries()) a[{t.row, t.col}] += t.value;
  std::size_t nnz = 0;
  for (const auto& [k, v] : a) nnz += v != 0.0;
  if (nnz) {
    os << "ACOORD\n" << nnz << '\n';
    for (const auto& [k, v] : a)
      if (v != 0.0) os << k.first << ' ' << k.second << ' ' << num(v) << '\n';
    os << '\n';
  }

  // Rows read A x + b = 0, so b carries the negated right-hand side.
  std::size_t nb = 0;
  for (double b : p.rhs()) nb += b != 0.0;
  if (nb) {
    os << "BCOORD\n" << nb << '\n';
    for (std::size_t i = 0; i < p.num_rows(); ++i)
      if (p.rhs()[i] != 0.0) os << i << ' ' << num(-p.rhs()[i]) << '\n';
    os << '\n';
  }
  return os.str();
}

} // namespace sonc::conic
