// Measurement scenarios on shared D-level entanglement.
//
// A scenario is a finite list of rows; a row gives every party a diagonal
// phase, and is admissible when the phase total is a classical (Fourier)
// point — then the joint X-measurement outcome digits sum to that point's
// index, uniformly (the parity law in qudit.hpp).
//
// Two constructions are provided:
//
//  * build_nonlocal_scenario: from a witness equation Σ n_r·x_r = a that is
//    solvable by phases a_r but by no classical points, build the
//    controls-plus-cyclic-variations scenario whose outcome table admits no
//    local deterministic explanation.  With k = D, the row length is
//    V = n_0 + Σ n_r where n_0 ≥ 1 is minimal with V ≡ 1 (mod k); the rows
//    are n_0 all-zero controls plus the V cyclic rotations of the base row
//    (a_1 × n_1, …, a_M × n_M, 0 × n_0).
//
//  * the two-setting family (each party measures X or the phased observable
//    B): the effectiveness condition for V variations with β B's each reads
//    Σ_{j=1}^{D-1} e^{i c_j} = −1 with c_j = β·(V mod D)·b_j.  The counting
//    routine enumerates candidate b on a rational grid, collapsing each
//    orbit of b under classical translation to its lexicographically least
//    on-grid member (translated phases define the same unordered
//    measurement basis, so orbits — not raw grid points — are what the
//    count means).

#pragma once

#include <algorithm>
#include <complex>
#include <string>
#include <vector>

#include "mermin/abgroup.hpp"
#include "mermin/errors.hpp"
#include "mermin/phase.hpp"
#include "mermin/qudit.hpp"

namespace mermin::scenario {

using phase::PhasePoint;
using phase::Rat;

struct MerminScenario {
  long long d = 2;
  int parties = 1;
  std::vector<std::vector<PhasePoint>> rows;
};

inline void validate(const MerminScenario& s) {
  if (s.d < 2) throw malformed_input("local dimension must be at least 2");
  if (s.parties < 1) throw malformed_input("need at least one party");
  if (s.rows.empty()) throw malformed_input("a scenario needs at least one row");
  for (const auto& row : s.rows) {
    if (static_cast<int>(row.size()) != s.parties)
      throw malformed_input("row length differs from the party count");
    for (const auto& p : row) {
      phase::validate(p);
      if (p.d != s.d) throw malformed_input("phase dimension mismatch");
    }
  }
}

struct RowReport {
  bool classical = false;
  long long classical_value = -1;  // index of the row's phase total, if classical
  PhasePoint total;
};

struct ScenarioReport {
  bool ok = false;
  std::vector<RowReport> rows;
  std::vector<std::size_t> offending;  // rows whose totals are not classical
};

inline ScenarioReport validate_scenario(const MerminScenario& s) {
  validate(s);
  ScenarioReport rep;
  rep.ok = true;
  for (std::size_t r = 0; r < s.rows.size(); ++r) {
    PhasePoint total = phase::zero_point(s.d);
    for (const auto& p : s.rows[r]) total = phase::add(total, p);
    RowReport row{false, -1, total};
    if (auto g = phase::classical_index(total)) {
      row.classical = true;
      row.classical_value = *g;
    } else {
      rep.ok = false;
      rep.offending.push_back(r);
    }
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ── The controls/variations construction ───────────────────────────────────

struct BuiltScenario {
  MerminScenario scenario;
  int controls = 0;       // n_0
  int variations = 0;     // V (also the party count)
  long long target = 0;   // classical index a of every variation row's total
};

// `coeffs[r]` is the positive multiplicity n_r of phase `phases[r]` in the
// witness equation Σ n_r·x_r = a; the equation must be classically
// unsolvable for the construction to mean anything.
inline BuiltScenario build_nonlocal_scenario(
    long long d, const std::vector<long long>& coeffs,
    const std::vector<PhasePoint>& phases) {
  if (coeffs.empty() || coeffs.size() != phases.size())
    throw malformed_input("need one coefficient per phase");
  for (long long n : coeffs)
    if (n < 1) throw malformed_input("coefficients must be positive counts");
  for (const auto& p : phases) {
    phase::validate(p);
    if (p.d != d) throw malformed_input("phase dimension mismatch");
    if (phase::is_zero(p)) throw domain_error("witness phases must be nonzero");
  }

  PhasePoint total = phase::zero_point(d);
  for (std::size_t r = 0; r < coeffs.size(); ++r)
    total = phase::add(total, phase::scale(coeffs[r], phases[r]));
  auto a = phase::classical_index(total);
  if (!a) throw domain_error("phase totals do not land on a classical point");

  // Classical solvability kills the argument: check Σ n_r·y_r = a over Z_D.
  abgroup::FinAbGroup zd{{d}};
  abgroup::EqSystem sys;
  sys.coeffs.push_back(coeffs);
  sys.rhs.push_back({*a});
  if (abgroup::solve_system(zd, sys).solvable)
    throw domain_error("witness equation is classically solvable; no argument exists");

  long long weight = 0;
  for (long long n : coeffs) weight += n;
  long long n0 = ((1 - weight) % d + d) % d;
  if (n0 == 0) n0 = d;
  const long long v = weight + n0;

  std::vector<PhasePoint> base;
  for (std::size_t r = 0; r < coeffs.size(); ++r)
    for (long long i = 0; i < coeffs[r]; ++i) base.push_back(phases[r]);
  for (long long i = 0; i < n0; ++i) base.push_back(phase::zero_point(d));

  BuiltScenario out;
  out.controls = static_cast<int>(n0);
  out.variations = static_cast<int>(v);
  out.target = *a;
  out.scenario.d = d;
  out.scenario.parties = static_cast<int>(v);
  for (long long i = 0; i < n0; ++i)
    out.scenario.rows.emplace_back(v, phase::zero_point(d));
  for (long long shift = 0; shift < v; ++shift) {
    std::vector<PhasePoint> row(v, phase::zero_point(d));
    for (long long i = 0; i < v; ++i) row[(i + shift) % v] = base[i];
    out.scenario.rows.push_back(std::move(row));
  }
  return out;
}

// ── Two-setting scenarios and the effectiveness condition ─────────────────

struct TwoMeasScenario {
  long long d = 2;
  int parties = 1;
  long long variations = 1;  // V
  long long beta = 1;        // B-measurements per variation
  PhasePoint b;              // the phase defining the second observable
  // Optional explicit listing: which parties measure B in each variation.
  std::vector<std::vector<int>> variation_positions;
};

inline void validate(const TwoMeasScenario& ts) {
  if (ts.parties < 1) throw malformed_input("need at least one party");
  if (ts.variations < 1) throw malformed_input("need at least one variation");
  if (ts.beta < 1 || ts.beta > ts.parties)
    throw malformed_input("each variation needs between 1 and N B-measurements");
  phase::validate(ts.b);
  if (ts.b.d != ts.d) throw malformed_input("phase dimension mismatch");
  if (!ts.variation_positions.empty()) {
    if (static_cast<long long>(ts.variation_positions.size()) != ts.variations)
      throw malformed_input("variation listing length differs from V");
    for (const auto& pos : ts.variation_positions) {
      if (static_cast<long long>(pos.size()) != ts.beta)
        throw malformed_input("every variation must place exactly beta B's");
      for (int p : pos)
        if (p < 0 || p >= ts.parties) throw malformed_input("party out of range");
    }
  }
}

// The five-party three-level preset: all ten 3-subsets of the parties, in
// the canonical listed order, with b = (1/9, 8/9) turns.
inline TwoMeasScenario ten_variation_preset() {
  TwoMeasScenario ts;
  ts.d = 3;
  ts.parties = 5;
  ts.variations = 10;
  ts.beta = 3;
  ts.b = phase::make_point(3, {Rat(1, 9), Rat(8, 9)});
  ts.variation_positions = {{0, 1, 2}, {0, 1, 3}, {0, 2, 3}, {1, 2, 3},
                            {1, 3, 4}, {0, 1, 4}, {0, 2, 4}, {1, 2, 4},
                            {0, 3, 4}, {2, 3, 4}};
  return ts;
}

// Expand a two-setting scenario to explicit rows: `controls` all-zero rows,
// then one row per variation with phase b at the listed B positions.
inline MerminScenario to_rows(const TwoMeasScenario& ts, int controls = 1) {
  validate(ts);
  if (ts.variation_positions.empty())
    throw malformed_input("row expansion needs an explicit variation listing");
  MerminScenario s;
  s.d = ts.d;
  s.parties = ts.parties;
  for (int i = 0; i < controls; ++i)
    s.rows.emplace_back(ts.parties, phase::zero_point(ts.d));
  for (const auto& pos : ts.variation_positions) {
    std::vector<PhasePoint> row(ts.parties, phase::zero_point(ts.d));
    for (int p : pos) row[p] = ts.b;
    s.rows.push_back(std::move(row));
  }
  return s;
}

struct NewCondResult {
  bool effective = false;
  bool structurally_ineffective = false;  // V ≡ 0 mod D: condition unsatisfiable
  std::complex<double> residual;          // Σ_j e^{i c_j} + 1
  std::vector<Rat> c_turns;               // the c_j as exact turns
  double tol = qudit::kDefaultTol;
};

// Effectiveness of a two-setting scenario: Σ_{j=1}^{D-1} e^{i c_j} = −1
// with c_j = β·(V mod D)·b_j, checked within tol.
inline NewCondResult newcond_check(const TwoMeasScenario& ts,
                                   double tol = qudit::kDefaultTol) {
  validate(ts);
  NewCondResult out;
  out.tol = tol;
  const long long vmod = ts.variations % ts.d;
  out.structurally_ineffective = vmod == 0;
  std::complex<double> sum(0, 0);
  for (long long j = 1; j < ts.d; ++j) {
    Rat c = phase::mod1(ts.b.turns[j - 1] * ts.beta * vmod);
    out.c_turns.push_back(c);
    sum += std::polar(1.0, qudit::kTau * boost::rational_cast<double>(c));
  }
  out.residual = sum + std::complex<double>(1, 0);
  out.effective = !out.structurally_ineffective && std::abs(out.residual) <= tol;
  return out;
}

// ── Grid scans and orbit counting ──────────────────────────────────────────

namespace detail {

// Lexicographically least member of {b + κ : κ classical} whose turns all
// lie on the 1/q grid.  b itself is assumed on-grid.
inline PhasePoint orbit_representative(const PhasePoint& b, long long q) {
  PhasePoint best = b;
  for (long long g = 1; g < b.d; ++g) {
    PhasePoint cand = phase::add(b, phase::classical_point(b.d, g));
    bool on_grid = true;
    for (const Rat& t : cand.turns)
      if ((t * q).denominator() != 1) {
        on_grid = false;
        break;
      }
    if (on_grid && cand < best) best = cand;
  }
  return best;
}

}  // namespace detail

// All distinct orbit representatives on the grid (q^{D-1} points) whose
// two-setting scenario with the given fixed (V, β) is effective.
inline std::vector<PhasePoint> scan_newcond_grid(
    long long d, long long v, long long beta, long long q,
    double tol = qudit::kDefaultTol,
    long long bound = kDefaultEnumerationBound) {
  if (d < 2 || q < 1 || v < 1 || beta < 1)
    throw malformed_input("scan parameters must be positive");
  double points = 1;
  for (long long j = 1; j < d; ++j) points *= static_cast<double>(q);
  if (points > static_cast<double>(bound))
    throw resource_error("grid exceeds the enumeration bound");

  std::vector<PhasePoint> hits;
  std::vector<long long> num(d - 1, 0);
  while (true) {
    PhasePoint b{d, {}};
    for (long long n : num) b.turns.emplace_back(n, q);
    if (detail::orbit_representative(b, q) == b) {
      // Party count only needs to host the β B-measurements here; the
      // condition itself depends on (D, V, β, b) alone.
      TwoMeasScenario ts{d, static_cast<int>(beta), v, beta, b};
      if (newcond_check(ts, tol).effective) hits.push_back(b);
    }
    std::size_t c = 0;
    while (c < num.size() && ++num[c] == q) num[c++] = 0;
    if (c == num.size()) break;
  }
  std::sort(hits.begin(), hits.end());
  return hits;
}

enum class VariationPolicy { canonical };

inline VariationPolicy parse_policy(const std::string& name) {
  if (name == "canonical") return VariationPolicy::canonical;
  throw malformed_input("unknown variation policy: " + name);
}

struct PairCountResult {
  long long count = 0;
  std::vector<PhasePoint> representatives;
};

// Count the orbits of candidate second-observable phases b on the 1/q grid
// that support an effective two-setting argument with N parties.
//
// Canonical policy: b qualifies when some multiplicity β ∈ 1..N lands β·b
// exactly on a classical point a whose equation β·y = a has no classical
// solution (then V ≡ 1 (mod D) variation counts make c_j = β·b_j, and the
// effectiveness sum telescopes to the Fourier column sum, which vanishes
// against −1 precisely for a ≠ 0).  Both the exact membership test and the
// numeric effectiveness check must agree for b to count.
inline PairCountResult count_effective_pairs(
    int parties, long long d, long long q,
    VariationPolicy policy = VariationPolicy::canonical,
    double tol = qudit::kDefaultTol,
    long long bound = kDefaultEnumerationBound) {
  if (parties < 1 || d < 2 || q < 1)
    throw malformed_input("count parameters must be positive");
  (void)policy;  // only the canonical policy exists today
  double points = 1;
  for (long long j = 1; j < d; ++j) points *= static_cast<double>(q);
  if (points > static_cast<double>(bound))
    throw resource_error("grid exceeds the enumeration bound");

  abgroup::FinAbGroup zd{{d}};
  PairCountResult out;
  std::vector<long long> num(d - 1, 0);
  while (true) {
    PhasePoint b{d, {}};
    for (long long n : num) b.turns.emplace_back(n, q);
    bool candidate = !phase::classical_index(b).has_value() &&
                     detail::orbit_representative(b, q) == b;
    if (candidate) {
      for (long long beta = 1; beta <= parties; ++beta) {
        auto a = phase::classical_index(phase::scale(beta, b));
        if (!a || *a == 0) continue;
        abgroup::EqSystem sys;
        sys.coeffs.push_back({beta});
        sys.rhs.push_back({*a});
        if (abgroup::solve_system(zd, sys).solvable) continue;
        TwoMeasScenario ts{d, parties, 1, beta, b};
        if (!newcond_check(ts, tol).effective) continue;
        out.count += 1;
        out.representatives.push_back(b);
        break;
      }
    }
    std::size_t c = 0;
    while (c < num.size() && ++num[c] == q) num[c++] = 0;
    if (c == num.size()) break;
  }
  std::sort(out.representatives.begin(), out.representatives.end());
  return out;
}

}  // namespace mermin::scenario
