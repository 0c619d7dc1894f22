#include "sonc/medseq.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace sonc {

namespace {

std::vector<IntTriple> med_seq_reduced(std::int64_t u, std::int64_t v);

void append_shifted(std::vector<IntTriple>& out, const std::vector<IntTriple>& in, std::int64_t shift) {
  for (const auto& t : in) out.push_back({t.u + shift, t.v + shift, t.w + shift});
}

std::vector<IntTriple> med_seq_reduced(std::int64_t u, std::int64_t v) {
  std::vector<IntTriple> a;
  if (u % 2 == 0) {
    const std::int64_t h = u / 2;
    if (v == h) {
      a.push_back({h, 0, u});
    } else if (v < h) {
      a = med_seq(h, v);
      a.push_back({h, 0, u});
    } else {
      a.push_back({h, 0, u});
      append_shifted(a, med_seq(h, v - h), h);
    }
    return a;
  }
  if (v % 2 != 0) {
    // Reflect the sequence for u - v, which is even.
    for (const auto& t : med_seq(u, u - v)) a.push_back({u - t.u, u - t.v, u - t.w});
    return a;
  }
  std::int64_t r = v;
  int k = 0;
  while (r % 2 == 0) {
    r /= 2;
    ++k;
  }
  // v - v/2^i for i = 1..k halves the distance to v each step, ending at v - r.
  for (int i = 1; i <= k; ++i) {
    const std::int64_t step = v >> i;
    a.push_back({v - step, v - 2 * step, v});
  }
  if (v == u - r) {
    a.push_back({v, v - r, u});
    return a;
  }
  const std::int64_t mid = (v - r + u) / 2;
  a.push_back({mid, v - r, u});
  if (v < u - r) {
    append_shifted(a, med_seq((u + r - v) / 2, r), v - r);
  } else {
    append_shifted(a, med_seq((u + r - v) / 2, (v + r - u) / 2), mid);
  }
  return a;
}

} // namespace

std::vector<IntTriple> med_seq(std::int64_t p, std::int64_t q) {
  if (q <= 0 || q >= p) throw std::invalid_argument("med_seq: need 0 < q < p");
  const std::int64_t g = std::gcd(p, q);
  auto a = med_seq_reduced(p / g, q / g);
  if (g != 1)
    for (auto& t : a) {
      t.u *= g;
      t.v *= g;
      t.w *= g;
    }
  return a;
}

std::vector<std::int64_t> sequence_points(std::int64_t p, const std::vector<IntTriple>& triples) {
  std::vector<std::int64_t> pts{0, p};
  for (const auto& t : triples) pts.push_back(t.u);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

bool is_mediated_sequence(std::span<const std::int64_t> points, std::int64_t p) {
  if (points.empty() || points.front() != 0 || points.back() != p) return false;
  const std::set<std::int64_t> s(points.begin(), points.end());
  for (std::int64_t x : s) {
    if (x == 0 || x == p) continue;
    bool ok = false;
    for (auto it = s.begin(); it != s.end() && *it < x; ++it) {
      if (s.count(2 * x - *it)) {
        ok = true;
        break;
      }
    }
    if (!ok) return false;
  }
  return true;
}

double med_seq_size_bound(std::int64_t p) {
  const double l = std::log2(static_cast<double>(p)) + 1.5;
  return 0.5 * l * l;
}

namespace {

using Mask = unsigned __int128;

bool has(Mask s, std::int64_t x) { return (s >> x) & 1; }
Mask bit(std::int64_t x) { return Mask(1) << x; }

class MinSearch {
public:
  explicit MinSearch(std::int64_t p) : p_(p) {}

  bool feasible(Mask s, int budget) {
    auto it = failed_.find(s);
    if (it != failed_.end() && it->second >= budget) return false;
    // Unjustified element with the fewest affordable repairs.
    std::int64_t best_x = -1;
    std::vector<std::pair<int, std::int64_t>> best_opts;
    for (std::int64_t x = 1; x < p_; ++x) {
      if (!has(s, x)) continue;
      std::vector<std::pair<int, std::int64_t>> opts;
      bool justified = false;
      for (std::int64_t a = std::max<std::int64_t>(0, 2 * x - p_); a < x; ++a) {
        const int cost = !has(s, a) + !has(s, 2 * x - a);
        if (cost == 0) {
          justified = true;
          break;
        }
        if (cost <= budget) opts.emplace_back(cost, a);
      }
      if (justified) continue;
      if (best_x < 0 || opts.size() < best_opts.size()) {
        best_x = x;
        best_opts = std::move(opts);
        if (best_opts.empty()) break;
      }
    }
    if (best_x < 0) return true;
    std::stable_sort(best_opts.begin(), best_opts.end(),
                     [](const auto& l, const auto& r) { return l.first < r.first; });
    for (const auto& [cost, a] : best_opts) {
      if (feasible(s | bit(a) | bit(2 * best_x - a), budget - cost)) return true;
    }
    auto& f = failed_[s];
    f = std::max(f, budget);
    return false;
  }

private:
  struct MaskHash {
    std::size_t operator()(Mask m) const {
      return std::hash<std::uint64_t>()(static_cast<std::uint64_t>(m)) ^
             (std::hash<std::uint64_t>()(static_cast<std::uint64_t>(m >> 64)) * 0x9e3779b97f4a7c15ULL);
    }
  };
  std::int64_t p_;
  std::unordered_map<Mask, int, MaskHash> failed_;
};

} // namespace

int minimal_med_seq_size(std::int64_t p, std::int64_t q, std::int64_t max_p) {
  if (q <= 0 || q >= p) throw std::invalid_argument("minimal_med_seq_size: need 0 < q < p");
  if (p > max_p || p > 126) throw std::invalid_argument("minimal_med_seq_size: p exceeds the exhaustive-search limit");
  const Mask start = bit(0) | bit(q) | bit(p);
  const int upper = static_cast<int>(sequence_points(p, med_seq(p, q)).size());
  MinSearch search(p);
  for (int size = 3; size < upper; ++size) {
    if (search.feasible(start, size - 3)) return size;
  }
  return upper;
}

std::vector<Exponent> MediatedSet::points() const {
  std::vector<Exponent> pts = trellis;
  std::set<Exponent> seen(trellis.begin(), trellis.end());
  for (const auto& t : triples)
    if (seen.insert(t.u).second) pts.push_back(t.u);
  return pts;
}

std::vector<MediatedTriple> l_med_set(const Exponent& a1, const Exponent& a2, const Exponent& beta) {
  if (a1.dim() != a2.dim() || a1.dim() != beta.dim()) throw std::invalid_argument("l_med_set: dimension mismatch");
  if (a1 == a2) throw std::invalid_argument("l_med_set: degenerate segment");
  std::optional<Rational> t;
  for (std::size_t i = 0; i < a1.dim(); ++i) {
    const Rational diff = a2[i] - a1[i];
    if (diff.is_zero()) {
      if (beta[i] != a1[i]) throw std::invalid_argument("l_med_set: beta not on the segment");
      continue;
    }
    const Rational ti = (beta[i] - a1[i]) / diff;
    if (t && *t != ti) throw std::invalid_argument("l_med_set: beta not on the segment");
    t = ti;
  }
  if (!t || t->sign() <= 0 || *t >= Rational(1)) throw std::invalid_argument("l_med_set: beta not on the open segment");
  const std::int64_t p = t->den(), q = t->num();
  const Exponent dir = a2 - a1;
  auto lift = [&](std::int64_t s) {
    if (s == 0) return a1;
    if (s == p) return a2;
    return a1 + dir * Rational(s, p);
  };
  std::vector<MediatedTriple> out;
  for (const auto& tr : med_seq(p, q)) out.push_back({lift(tr.u), lift(tr.v), lift(tr.w)});
  return out;
}

namespace {

void check_weights(const std::vector<Exponent>& trellis, const Exponent& beta, const std::vector<Rational>& weights) {
  if (trellis.size() < 2) throw std::invalid_argument("mediated set: trellis needs at least two vertices");
  if (weights.size() != trellis.size()) throw std::invalid_argument("mediated set: weight count mismatch");
  Rational sum;
  Exponent comb(beta.dim());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (weights[i].sign() <= 0) throw std::invalid_argument("mediated set: weights must be positive");
    if (trellis[i].dim() != beta.dim()) throw std::invalid_argument("mediated set: dimension mismatch");
    sum += weights[i];
    comb += trellis[i] * weights[i];
  }
  if (sum != Rational(1)) throw std::invalid_argument("mediated set: weights must sum to 1");
  if (comb != beta) throw std::invalid_argument("mediated set: beta is not the weighted combination of the trellis");
}

void append_unique(std::vector<MediatedTriple>& out, std::set<Exponent>& seen, const std::vector<MediatedTriple>& in) {
  for (const auto& t : in)
    if (seen.insert(t.u).second) out.push_back(t);
}

Exponent combination(const std::vector<Exponent>& pts, const std::vector<std::int64_t>& q, std::size_t from) {
  Exponent out(pts.front().dim());
  std::int64_t total = 0;
  for (std::size_t j = from; j < pts.size(); ++j) total += q[j];
  for (std::size_t j = from; j < pts.size(); ++j) out += pts[j] * Rational(q[j], total);
  return out;
}

std::vector<std::int64_t> integer_weights(const std::vector<Rational>& weights) {
  std::int64_t p = 1;
  for (const auto& w : weights) p = lcm64(p, w.den());
  std::vector<std::int64_t> q;
  for (const auto& w : weights) q.push_back((w * Rational(p)).num());
  return q;
}

// Segment construction keeping denominators odd and numerators even away
// from beta.
std::vector<MediatedTriple> l_med_set_odd(Exponent a1, Exponent a2, const Exponent& beta) {
  std::int64_t r = lcm64(lcm64(a1.denominator_lcm(), a2.denominator_lcm()), beta.denominator_lcm());
  const Rational half_r(r, 2), back(2, r);
  auto scaled = [&](const Exponent& b) {
    std::vector<MediatedTriple> out;
    for (const auto& t : l_med_set(a1 * half_r, a2 * half_r, b * half_r))
      out.push_back({t.u * back, t.v * back, t.w * back});
    return out;
  };
  if ((beta * Rational(r)).is_even_lattice()) return scaled(beta);

  // Position of beta on the segment; orient so that it sits in the first half.
  Rational t;
  for (std::size_t i = 0; i < a1.dim(); ++i)
    if (a1[i] != a2[i]) {
      t = (beta[i] - a1[i]) / (a2[i] - a1[i]);
      break;
    }
  if (t > Rational(1, 2)) std::swap(a1, a2);
  const Exponent beta2 = beta * Rational(2) - a1;
  std::vector<MediatedTriple> out{{beta, a1, beta2}};
  if (beta2 != a2) {
    auto rest = scaled(beta2);
    out.insert(out.end(), rest.begin(), rest.end());
  }
  return out;
}

void odd_rec(const std::vector<Exponent>& pts, std::vector<std::int64_t> q, std::vector<MediatedTriple>& out,
             std::set<Exponent>& seen) {
  std::int64_t g = 0;
  for (auto v : q) g = std::gcd(g, v);
  for (auto& v : q) v /= g;
  const std::int64_t p = std::accumulate(q.begin(), q.end(), std::int64_t(0));
  const Exponent target = combination(pts, q, 0);
  const std::size_t m = pts.size();
  if (m == 2) {
    append_unique(out, seen, l_med_set_odd(pts[0], pts[1], target));
    return;
  }
  std::size_t pick = m;
  for (std::size_t i = 0; i < m && pick == m; ++i) {
    if (p % 2 == 0 ? q[i] % 2 != 0 : q[i] % 2 == 0) pick = i;
  }
  if (pick < m) {
    std::vector<Exponent> rest_pts;
    std::vector<std::int64_t> rest_q;
    for (std::size_t j = 0; j < m; ++j)
      if (j != pick) {
        rest_pts.push_back(pts[j]);
        rest_q.push_back(q[j]);
      }
    const Exponent b1 = combination(rest_pts, rest_q, 0);
    append_unique(out, seen, l_med_set_odd(pts[pick], b1, target));
    odd_rec(rest_pts, rest_q, out, seen);
    return;
  }
  // p odd and every q_i odd: merge the first two weights onto each of them.
  std::vector<Exponent> s1{pts[0]}, s2{pts[1]};
  std::vector<std::int64_t> w1{q[0] + q[1]}, w2{q[0] + q[1]};
  for (std::size_t j = 2; j < m; ++j) {
    s1.push_back(pts[j]);
    s2.push_back(pts[j]);
    w1.push_back(q[j]);
    w2.push_back(q[j]);
  }
  const Exponent b1 = combination(s1, w1, 0), b2 = combination(s2, w2, 0);
  append_unique(out, seen, l_med_set_odd(b1, b2, target));
  odd_rec(s1, w1, out, seen);
  odd_rec(s2, w2, out, seen);
}

} // namespace

MediatedSet med_set(const std::vector<Exponent>& trellis, const Exponent& beta, const std::vector<Rational>& weights) {
  check_weights(trellis, beta, weights);
  const auto q = integer_weights(weights);
  MediatedSet ms{trellis, beta, {}};
  std::set<Exponent> seen;
  const std::size_t m = trellis.size();
  Exponent prev = beta;
  for (std::size_t k = 0; k + 2 < m; ++k) {
    const Exponent next = combination(trellis, q, k + 1);
    append_unique(ms.triples, seen, l_med_set(trellis[k], next, prev));
    prev = next;
  }
  append_unique(ms.triples, seen, l_med_set(trellis[m - 2], trellis[m - 1], prev));
  return ms;
}

MediatedSet med_set_odd(const std::vector<Exponent>& trellis, const Exponent& beta,
                        const std::vector<Rational>& weights) {
  check_weights(trellis, beta, weights);
  if (!beta.is_integer()) throw std::invalid_argument("med_set_odd: beta must be a lattice point");
  for (const auto& a : trellis)
    if (!a.is_even_lattice()) throw std::invalid_argument("med_set_odd: trellis must consist of even lattice points");
  MediatedSet ms{trellis, beta, {}};
  std::set<Exponent> seen;
  odd_rec(trellis, integer_weights(weights), ms.triples, seen);
  return ms;
}

bool is_rational_mediated_set(const MediatedSet& ms) {
  std::set<Exponent> pts(ms.trellis.begin(), ms.trellis.end());
  for (const auto& t : ms.triples) pts.insert(t.u);
  if (!pts.count(ms.beta)) return false;
  bool beta_found = false;
  for (const auto& t : ms.triples) {
    if (t.v.dim() != t.u.dim() || t.w.dim() != t.u.dim()) return false;
    if (t.v == t.w) return false;
    if (midpoint(t.v, t.w) != t.u) return false;
    if (!pts.count(t.v) || !pts.count(t.w)) return false;
    if (t.u == ms.beta) beta_found = true;
  }
  return beta_found;
}

bool satisfies_odd_parity(const MediatedSet& ms) {
  for (const auto& e : ms.points()) {
    for (const auto& c : e.coords()) {
      if (c.den() % 2 == 0) return false;
      if (e != ms.beta && c.num() % 2 != 0) return false;
    }
  }
  return true;
}

} // namespace sonc
