// Local hidden-variable analysis for phased parity scenarios.
//
// A scenario's rows are measurement contexts; the quantum side produces,
// for each row, a Born distribution over joint outcomes whose support is a
// digit-sum class (the phase total of the row is a Fourier point, and the
// distribution is uniform on the class it names).  A deterministic local
// model answers every (party, setting) pair with a fixed digit; it is
//
//   * parity-consistent when each row's answers sum to the row's class
//     value mod D — a linear system over Z_D, decided exactly, with a
//     one-line contradiction certificate when it has no solution;
//   * support-consistent when each row's induced joint outcome lies in
//     the row's support (the possibilistic reading).
//
// A stochastic model is a weighted family of deterministic atoms; for
// scenarios built entirely from Fourier-point settings, shifting a shared
// zero-sum hidden string by each setting's class value reproduces the
// quantum table exactly.

#pragma once

#include <algorithm>
#include <optional>
#include <string>
#include <vector>

#include "mermin/abgroup.hpp"
#include "mermin/errors.hpp"
#include "mermin/qudit.hpp"
#include "mermin/scenario.hpp"

namespace mermin::lhv {

using phase::PhasePoint;
using scenario::MerminScenario;

// One row per measurement context: which setting each party uses, the
// classical value the outcome digits must sum to, and the Born
// distribution with its support.
struct PossibilisticTable {
  long long d = 2;
  int parties = 0;
  std::vector<std::vector<PhasePoint>> settings;  // per party, distinct
  std::vector<std::vector<int>> setting_of;       // rows × parties
  std::vector<long long> row_class;               // digit-sum class per row
  std::vector<std::vector<double>> probs;         // rows × D^parties
  std::vector<std::vector<char>> support;         // rows × D^parties
  double tol = qudit::kDefaultTol;
};

inline void validate(const PossibilisticTable& t) {
  if (t.d < 2 || t.parties < 1)
    throw malformed_input("table needs D >= 2 and at least one party");
  if (static_cast<int>(t.settings.size()) != t.parties)
    throw malformed_input("need one setting list per party");
  if (t.setting_of.empty()) throw malformed_input("table has no rows");
  if (t.setting_of.size() != t.row_class.size() ||
      t.setting_of.size() != t.probs.size() ||
      t.setting_of.size() != t.support.size())
    throw malformed_input("table row arrays disagree in length");
  for (const auto& row : t.setting_of) {
    if (static_cast<int>(row.size()) != t.parties)
      throw malformed_input("setting row arity mismatch");
    for (int i = 0; i < t.parties; ++i)
      if (row[i] < 0 || row[i] >= static_cast<int>(t.settings[i].size()))
        throw malformed_input("setting index out of range");
  }
}

// Evaluate the scenario's rows through the state-vector pipeline and
// record supports.  Every row total must be a Fourier point (validated);
// the support of each row is then exactly its digit-sum class.
inline PossibilisticTable quantum_table(const MerminScenario& s,
                                        double tol = qudit::kDefaultTol,
                                        long long bound = kDefaultAmplitudeBound) {
  auto report = scenario::validate_scenario(s);
  if (!report.ok)
    throw domain_error("scenario has rows whose phase total is not classical");

  PossibilisticTable t;
  t.d = s.d;
  t.parties = s.parties;
  t.tol = tol;
  t.settings.resize(s.parties);
  for (const auto& row : s.rows) {
    std::vector<int> indices(s.parties);
    for (int i = 0; i < s.parties; ++i) {
      auto& list = t.settings[i];
      auto it = std::find(list.begin(), list.end(), row[i]);
      if (it == list.end()) {
        list.push_back(row[i]);
        it = std::prev(list.end());
      }
      indices[i] = static_cast<int>(it - list.begin());
    }
    t.setting_of.push_back(std::move(indices));

    std::vector<std::vector<double>> angles;
    angles.reserve(s.parties);
    for (const auto& p : row) angles.push_back(phase::to_angles(p));
    auto dist = qudit::mermin_outcome_distribution(s.d, s.parties, angles, bound);
    std::vector<char> sup(dist.size());
    for (std::size_t k = 0; k < dist.size(); ++k) sup[k] = dist[k] > tol;
    t.probs.push_back(std::move(dist));
    t.support.push_back(std::move(sup));
  }
  for (std::size_t r = 0; r < s.rows.size(); ++r)
    t.row_class.push_back(report.rows[r].classical_value);
  return t;
}

// A linear combination of row constraints in which every unknown cancels
// while the right-hand side does not: the rendered form is always
// "0 ≡ r (mod m)" with r nonzero.
struct ParityCertificate {
  std::vector<long long> multipliers;  // one per row
  long long modulus = 0;
  long long combined_rhs = 0;
  std::string rendered;
};

struct ParityAnalysis {
  bool exists = false;
  std::vector<std::vector<long long>> assignment;  // per party, per setting
  std::optional<ParityCertificate> certificate;
};

namespace detail {

inline std::string render_contradiction(long long rhs, long long modulus) {
  return "0 ≡ " + std::to_string(rhs) + " (mod " + std::to_string(modulus) + ")";
}

// Prefer the sparsest (then lexicographically smallest) multiplier vector
// that cancels every unknown and keeps the right side nonzero.  Small
// systems only; callers fall back to the solver's certificate otherwise.
inline std::optional<std::vector<long long>> sparsest_multipliers(
    const std::vector<std::vector<long long>>& coeffs,
    const std::vector<long long>& rhs, long long m, long long budget) {
  const std::size_t rows = coeffs.size();
  const std::size_t cols = coeffs.empty() ? 0 : coeffs[0].size();
  double total = 1;
  for (std::size_t r = 0; r < rows; ++r) total *= static_cast<double>(m);
  if (total > static_cast<double>(budget)) return std::nullopt;

  std::optional<std::vector<long long>> best;
  int best_weight = 0;
  std::vector<long long> lam(rows, 0);
  while (true) {
    std::size_t c = 0;
    while (c < rows && ++lam[c] == m) lam[c++] = 0;
    if (c == rows) break;

    long long combined = 0;
    for (std::size_t r = 0; r < rows; ++r) combined = (combined + lam[r] * rhs[r]) % m;
    if (combined == 0) continue;
    bool cancels = true;
    for (std::size_t j = 0; j < cols && cancels; ++j) {
      long long acc = 0;
      for (std::size_t r = 0; r < rows; ++r) acc = (acc + lam[r] * coeffs[r][j]) % m;
      cancels = acc == 0;
    }
    if (!cancels) continue;
    int weight = 0;
    for (long long l : lam) weight += l != 0;
    if (!best || weight < best_weight || (weight == best_weight && lam < *best)) {
      best = lam;
      best_weight = weight;
    }
  }
  return best;
}

}  // namespace detail

// Decide whether any deterministic answer sheet meets every row's digit-sum
// constraint.  Exact: the constraints form a linear system over Z_D.
inline ParityAnalysis lhv_exists_parity(const PossibilisticTable& t,
                                        long long bound = kDefaultEnumerationBound) {
  validate(t);
  std::vector<std::pair<int, int>> columns;  // (party, setting)
  std::vector<std::vector<int>> column_of(t.parties);
  for (int i = 0; i < t.parties; ++i)
    for (std::size_t s = 0; s < t.settings[i].size(); ++s) {
      column_of[i].push_back(static_cast<int>(columns.size()));
      columns.emplace_back(i, static_cast<int>(s));
    }

  abgroup::FinAbGroup zd{{t.d}};
  abgroup::EqSystem sys;
  std::vector<long long> rhs_scalars;
  for (std::size_t r = 0; r < t.setting_of.size(); ++r) {
    std::vector<long long> row(columns.size(), 0);
    for (int i = 0; i < t.parties; ++i)
      row[column_of[i][t.setting_of[r][i]]] += 1;
    sys.coeffs.push_back(std::move(row));
    sys.rhs.push_back({t.row_class[r]});
    rhs_scalars.push_back(t.row_class[r]);
  }

  auto sol = abgroup::solve_system(zd, sys);
  ParityAnalysis out;
  out.exists = sol.solvable;
  if (sol.solvable) {
    out.assignment.resize(t.parties);
    for (int i = 0; i < t.parties; ++i)
      for (int col : column_of[i])
        out.assignment[i].push_back(sol.assignment[col][0]);
    return out;
  }

  const auto& cert = *sol.certificate;
  ParityCertificate pc;
  pc.modulus = static_cast<long long>(cert.modulus);
  pc.combined_rhs = static_cast<long long>(cert.combined_rhs);
  for (const auto& lam : cert.multipliers) {
    long long v = static_cast<long long>(lam[0] % cert.modulus);
    pc.multipliers.push_back(((v % pc.modulus) + pc.modulus) % pc.modulus);
  }
  if (auto sparse = detail::sparsest_multipliers(sys.coeffs, rhs_scalars,
                                                 pc.modulus, bound)) {
    pc.multipliers = *sparse;
    long long combined = 0;
    for (std::size_t r = 0; r < sparse->size(); ++r)
      combined = (combined + (*sparse)[r] * rhs_scalars[r]) % pc.modulus;
    pc.combined_rhs = combined;
  }
  pc.rendered = detail::render_contradiction(pc.combined_rhs, pc.modulus);
  out.certificate = std::move(pc);
  return out;
}

struct PossibilisticAnalysis {
  bool exists = false;
  long long consistent_assignments = 0;  // answer sheets inside all supports
  // First support entry no consistent sheet produces, when coverage fails.
  std::optional<std::pair<std::size_t, std::size_t>> uncovered;
};

// Exhaustive possibilistic check: a model exists when the support-consistent
// answer sheets jointly realize every supported outcome of every row.
inline PossibilisticAnalysis lhv_exists_possibilistic(
    const PossibilisticTable& t, long long bound = kDefaultEnumerationBound) {
  validate(t);
  std::vector<std::vector<int>> column_of(t.parties);
  std::size_t columns = 0;
  for (int i = 0; i < t.parties; ++i)
    for (std::size_t s = 0; s < t.settings[i].size(); ++s)
      column_of[i].push_back(static_cast<int>(columns++));

  double total = 1;
  for (std::size_t c = 0; c < columns; ++c) total *= static_cast<double>(t.d);
  if (total > static_cast<double>(bound))
    throw resource_error("assignment space exceeds the enumeration bound");

  std::vector<std::vector<char>> covered(t.support.size());
  for (std::size_t r = 0; r < t.support.size(); ++r)
    covered[r].assign(t.support[r].size(), 0);

  PossibilisticAnalysis out;
  std::vector<long long> vals(columns, 0);
  bool more = true;
  while (more) {
    bool consistent = true;
    std::vector<std::size_t> produced(t.setting_of.size());
    for (std::size_t r = 0; r < t.setting_of.size() && consistent; ++r) {
      std::size_t idx = 0;
      for (int i = 0; i < t.parties; ++i)
        idx = idx * t.d + vals[column_of[i][t.setting_of[r][i]]];
      produced[r] = idx;
      consistent = t.support[r][idx];
    }
    if (consistent) {
      ++out.consistent_assignments;
      for (std::size_t r = 0; r < produced.size(); ++r) covered[r][produced[r]] = 1;
    }
    std::size_t c = 0;
    while (c < columns && ++vals[c] == t.d) vals[c++] = 0;
    more = c < columns;
  }

  out.exists = out.consistent_assignments > 0;
  for (std::size_t r = 0; r < covered.size() && out.exists; ++r)
    for (std::size_t k = 0; k < covered[r].size(); ++k)
      if (t.support[r][k] && !covered[r][k]) {
        out.exists = false;
        out.uncovered = {r, k};
        break;
      }
  return out;
}

// A stochastic local model: weighted deterministic atoms, each answering
// every (party, setting) pair with a fixed digit.
struct LhvModel {
  long long d = 2;
  int parties = 0;
  std::vector<std::vector<long long>> atoms;  // hidden digit strings
  std::vector<double> weights;
  // answer[a][i][s]: atom a, party i, setting index s.
  std::vector<std::vector<std::vector<long long>>> answer;
};

// For scenarios whose every setting is a Fourier point: atoms are the
// zero-sum strings u (uniform weights); party i answers setting of class g
// with u_i + g.  Row digit sums then hit the row class exactly, and the
// induced table is uniform on each class — the quantum table itself.
inline LhvModel build_trivial_lhv(const PossibilisticTable& t,
                                  long long bound = kDefaultEnumerationBound) {
  validate(t);
  std::vector<std::vector<long long>> classes(t.parties);
  for (int i = 0; i < t.parties; ++i)
    for (const auto& p : t.settings[i]) {
      auto g = phase::classical_index(p);
      if (!g)
        throw domain_error("shared-shift model needs every setting classical");
      classes[i].push_back(*g);
    }

  double strings = 1;
  for (int i = 0; i + 1 < t.parties; ++i) strings *= static_cast<double>(t.d);
  if (strings > static_cast<double>(bound))
    throw resource_error("hidden-string space exceeds the enumeration bound");

  LhvModel m;
  m.d = t.d;
  m.parties = t.parties;
  const double w = 1.0 / strings;
  std::vector<long long> u(t.parties, 0);
  bool more = true;
  while (more) {
    long long sum = 0;
    for (int i = 0; i + 1 < t.parties; ++i) sum += u[i];
    u[t.parties - 1] = ((-sum) % t.d + t.d) % t.d;

    std::vector<std::vector<long long>> ans(t.parties);
    for (int i = 0; i < t.parties; ++i)
      for (long long g : classes[i]) ans[i].push_back((u[i] + g) % t.d);
    m.atoms.push_back(u);
    m.answer.push_back(std::move(ans));
    m.weights.push_back(w);

    int c = 0;
    while (c + 1 < t.parties && ++u[c] == t.d) u[c++] = 0;
    more = c + 1 < t.parties;
  }
  return m;
}

// The outcome table the model induces on the same rows as `t`.
inline std::vector<std::vector<double>> model_table(const LhvModel& m,
                                                    const PossibilisticTable& t) {
  validate(t);
  if (m.d != t.d || m.parties != t.parties)
    throw malformed_input("model and table shapes disagree");
  std::size_t outcomes = 1;
  for (int i = 0; i < t.parties; ++i) outcomes *= static_cast<std::size_t>(t.d);
  std::vector<std::vector<double>> probs(t.setting_of.size(),
                                         std::vector<double>(outcomes, 0.0));
  for (std::size_t a = 0; a < m.atoms.size(); ++a)
    for (std::size_t r = 0; r < t.setting_of.size(); ++r) {
      std::size_t idx = 0;
      for (int i = 0; i < t.parties; ++i)
        idx = idx * t.d + m.answer[a][i][t.setting_of[r][i]];
      probs[r][idx] += m.weights[a];
    }
  return probs;
}

}  // namespace mermin::lhv
