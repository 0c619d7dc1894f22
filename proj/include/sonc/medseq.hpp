#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sonc/exponent.hpp"

namespace sonc {

/// One-dimensional midpoint relation u = (v + w) / 2.
struct IntTriple {
  std::int64_t u = 0, v = 0, w = 0;
  friend bool operator==(const IntTriple&, const IntTriple&) = default;
};

/// Triples whose u's together with {0, p} form a (0,p)-mediated sequence
/// containing q. Requires 0 < q < p.
std::vector<IntTriple> med_seq(std::int64_t p, std::int64_t q);

/// Sorted {0, p} together with the u's of the triples.
std::vector<std::int64_t> sequence_points(std::int64_t p, const std::vector<IntTriple>& triples);

/// Every interior element is the average of two distinct members. Expects a
/// sorted list starting at 0 and ending at p.
bool is_mediated_sequence(std::span<const std::int64_t> points, std::int64_t p);

/// Size of a smallest (0,p)-mediated sequence containing q, endpoints
/// included. Exhaustive search; throws std::invalid_argument for p > max_p.
int minimal_med_seq_size(std::int64_t p, std::int64_t q, std::int64_t max_p = 64);

/// Strict size bound for med_seq output: (log2(p) + 3/2)^2 / 2.
double med_seq_size_bound(std::int64_t p);

struct MediatedTriple {
  Exponent u, v, w;
  friend bool operator==(const MediatedTriple&, const MediatedTriple&) = default;
};

struct MediatedSet {
  std::vector<Exponent> trellis;
  Exponent beta;
  std::vector<MediatedTriple> triples;

  /// trellis followed by the u's of the triples.
  std::vector<Exponent> points() const;
};

/// Lifts med_seq(p, q) onto the segment [a1, a2], where beta = a1 + (q/p)(a2 - a1).
std::vector<MediatedTriple> l_med_set(const Exponent& a1, const Exponent& a2, const Exponent& beta);

/// Mediated set containing beta = sum weights[i] * trellis[i], built along the
/// chain that peels trellis vertices in input order.
MediatedSet med_set(const std::vector<Exponent>& trellis, const Exponent& beta, const std::vector<Rational>& weights);

/// Variant whose points all have odd denominators and, except beta, even
/// numerators. Needs an even trellis and a lattice point beta.
MediatedSet med_set_odd(const std::vector<Exponent>& trellis, const Exponent& beta,
                        const std::vector<Rational>& weights);

bool is_rational_mediated_set(const MediatedSet& ms);

/// Odd denominators everywhere, even numerators away from beta.
bool satisfies_odd_parity(const MediatedSet& ms);

} // namespace sonc
