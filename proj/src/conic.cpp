#include "sonc/conic.hpp"

#include <stdexcept>

namespace sonc::conic {

std::size_t ConicProblem::add_block(ConeKind kind, std::size_t width) {
  const std::size_t start = objective_.size();
  if (width == 0) return start;
  if (kind != ConeKind::RotatedSOC3 && !blocks_.empty() && blocks_.back().kind == kind) {
    blocks_.back().width += width;
  } else {
    blocks_.push_back({kind, start, width});
  }
  objective_.resize(start + width, 0.0);
  return start;
}

std::size_t ConicProblem::add_free(std::size_t count) { return add_block(ConeKind::Free, count); }
std::size_t ConicProblem::add_nonneg(std::size_t count) { return add_block(ConeKind::NonNeg, count); }
std::size_t ConicProblem::add_rotated_cone() { return add_block(ConeKind::RotatedSOC3, 3); }

std::size_t ConicProblem::add_row(double rhs) {
  rhs_.push_back(rhs);
  return rhs_.size() - 1;
}

void ConicProblem::add_coeff(std::size_t row, std::size_t col, double value) {
  if (row >= rhs_.size() || col >= objective_.size()) throw std::out_of_range("add_coeff: index out of range");
  if (value != 0.0) entries_.push_back({row, col, value});
}

void ConicProblem::set_objective(std::size_t col, double value) { objective_.at(col) = value; }
void ConicProblem::set_rhs(std::size_t row, double value) { rhs_.at(row) = value; }

bool ConicProblem::has_rotated_cones() const {
  for (const auto& b : blocks_)
    if (b.kind == ConeKind::RotatedSOC3) return true;
  return false;
}

void ConicProblem::validate() const {
  std::size_t next = 0;
  for (const auto& b : blocks_) {
    if (b.start != next) throw std::invalid_argument("cone blocks do not partition the variables");
    if (b.kind == ConeKind::RotatedSOC3 && b.width != 3) throw std::invalid_argument("rotated cone of width != 3");
    next += b.width;
  }
  if (next != objective_.size()) throw std::invalid_argument("cone blocks do not cover every variable");
  for (const auto& t : entries_)
    if (t.row >= rhs_.size() || t.col >= objective_.size()) throw std::invalid_argument("matrix entry out of range");
}

const char* to_string(SolveStatus s) {
  switch (s) {
  case SolveStatus::Optimal: return "optimal";
  case SolveStatus::Infeasible: return "infeasible";
  case SolveStatus::Unbounded: return "unbounded";
  case SolveStatus::NearOptimal: return "near_optimal";
  case SolveStatus::IterLimit: return "iter_limit";
  }
  return "unknown";
}

} // namespace sonc::conic
