// Exact phase arithmetic for D-level systems.  A diagonal phase
// diag(1, e^{ib_1}, …, e^{ib_{D-1}}) is stored as D-1 rational "turns"
// (b_j = 2π·turns[j-1]) so that the group operations — componentwise
// addition mod 1 — stay exact; angles become floating point only at
// Born-rule evaluation.
//
// The Fourier basis vectors, viewed as phases, are the points with
// turns[j-1] = (g·j mod D)/D for g ∈ Z_D; these are the "classical"
// phases and form a subgroup isomorphic to Z_D.

#pragma once

#include <boost/rational.hpp>
#include <optional>
#include <vector>

#include "mermin/errors.hpp"
#include "mermin/qudit.hpp"

namespace mermin::phase {

using Rat = boost::rational<long long>;

struct PhasePoint {
  long long d = 2;
  std::vector<Rat> turns;  // D-1 entries, each in [0, 1)

  friend bool operator==(const PhasePoint&, const PhasePoint&) = default;
  friend std::weak_ordering operator<=>(const PhasePoint& a,
                                        const PhasePoint& b) {
    if (auto c = a.d <=> b.d; c != 0) return c;
    return a.turns <=> b.turns;
  }
};

inline Rat mod1(Rat r) {
  long long whole = r.numerator() / r.denominator();
  r -= whole;
  if (r < 0) r += 1;
  return r;
}

inline void validate(const PhasePoint& p) {
  if (p.d < 2) throw malformed_input("local dimension must be at least 2");
  if (static_cast<long long>(p.turns.size()) != p.d - 1)
    throw malformed_input("phase needs D-1 turn components");
  for (const Rat& t : p.turns)
    if (t < 0 || t >= 1) throw malformed_input("turns must lie in [0, 1)");
}

inline PhasePoint make_point(long long d, std::vector<Rat> turns) {
  for (Rat& t : turns) t = mod1(t);
  PhasePoint p{d, std::move(turns)};
  validate(p);
  return p;
}

inline PhasePoint zero_point(long long d) {
  if (d < 2) throw malformed_input("local dimension must be at least 2");
  return {d, std::vector<Rat>(d - 1, Rat(0))};
}

inline PhasePoint add(const PhasePoint& a, const PhasePoint& b) {
  if (a.d != b.d) throw malformed_input("phase dimension mismatch");
  PhasePoint out = a;
  for (std::size_t j = 0; j < out.turns.size(); ++j)
    out.turns[j] = mod1(out.turns[j] + b.turns[j]);
  return out;
}

inline PhasePoint neg(const PhasePoint& a) {
  PhasePoint out = a;
  for (Rat& t : out.turns) t = mod1(-t);
  return out;
}

inline PhasePoint scale(long long n, const PhasePoint& a) {
  PhasePoint out = a;
  for (Rat& t : out.turns) t = mod1(t * n);
  return out;
}

inline bool is_zero(const PhasePoint& a) {
  // Compare via the numerator: mixed rational/integer ==/!= recurses
  // infinitely under C++20 operator rewriting with Boost 1.74.
  for (const Rat& t : a.turns)
    if (t.numerator() != 0) return false;
  return true;
}

// The Fourier point g as a phase.
inline PhasePoint classical_point(long long d, long long g) {
  g = ((g % d) + d) % d;
  PhasePoint p{d, {}};
  for (long long j = 1; j < d; ++j) p.turns.emplace_back((g * j) % d, d);
  return p;
}

// Inverse of classical_point: the g with turns[j-1] = (g·j mod D)/D, if any.
inline std::optional<long long> classical_index(const PhasePoint& p) {
  Rat lead = p.turns.empty() ? Rat(0) : p.turns[0] * p.d;
  if (!p.turns.empty() && lead.denominator() != 1) return std::nullopt;
  long long g = p.turns.empty() ? 0 : lead.numerator() % p.d;
  for (long long j = 1; j < p.d; ++j)
    if (p.turns[j - 1] != Rat((g * j) % p.d, p.d)) return std::nullopt;
  return g;
}

inline std::vector<double> to_angles(const PhasePoint& p) {
  std::vector<double> angles;
  angles.reserve(p.turns.size());
  for (const Rat& t : p.turns)
    angles.push_back(qudit::kTau * boost::rational_cast<double>(t));
  return angles;
}

}  // namespace mermin::phase
