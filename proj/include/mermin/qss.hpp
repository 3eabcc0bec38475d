// Secret sharing over a shared maximally correlated state, with attack
// simulations.
//
// A dealer (party 0) and N players each hold one D-level subsystem of a
// GHZ state.  Every round all parties draw a joint measurement context —
// a tuple of alphabet phases whose total lands on a Fourier point (class
// a) — so the joint outcome digits always sum to a.  The dealer encodes
// its secret s as c = s + o_0 − 2a and broadcasts c; the players' digits
// then reconstruct s = c + Σ_{i≥1} o_i + a exactly.
//
// Three departures from the honest run are simulated:
//   * a withholding player: the reconstruction misses one digit, so the
//     decoded value is s − o_j with o_j uniform — the secret is hidden;
//   * a pre-measurement interception: the eavesdropper distributes the
//     product state that passes one modal context perfectly; every other
//     context mixes in at least one unbiased digit, so the round fails
//     with probability 1 − 1/D, giving an overall failure rate of
//     (1 − p_max)(1 − 1/D) whenever the alphabet's measurement bases are
//     pairwise mutually unbiased;
//   * classically simulated parties: deterministic answer tables (or a
//     stochastic local model) replace the state, flagged by support
//     violations or by the pooled distance from the reference table.

#pragma once

#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <vector>

#include "mermin/errors.hpp"
#include "mermin/lhv.hpp"
#include "mermin/phase.hpp"
#include "mermin/qudit.hpp"
#include "mermin/scenario.hpp"

namespace mermin::qss {

using phase::PhasePoint;

struct Protocol {
  long long d = 2;
  int players = 2;  // parties beyond the dealer
  std::vector<PhasePoint> alphabet;
  double tol = qudit::kDefaultTol;
};

inline void validate(const Protocol& p) {
  if (p.d < 2 || p.players < 1)
    throw malformed_input("protocol needs D >= 2 and at least one player");
  if (p.alphabet.empty()) throw malformed_input("alphabet must not be empty");
  for (const auto& a : p.alphabet) {
    phase::validate(a);
    if (a.d != p.d) throw malformed_input("alphabet level mismatch");
  }
  for (std::size_t i = 0; i < p.alphabet.size(); ++i)
    for (std::size_t j = i + 1; j < p.alphabet.size(); ++j)
      if (p.alphabet[i] == p.alphabet[j])
        throw malformed_input("alphabet entries must be distinct");
}

struct Context {
  std::vector<int> choice;  // alphabet index per party, dealer first
  long long cls = 0;        // digit-sum class of the joint outcome
};

struct ContextTable {
  std::vector<Context> contexts;           // lexicographic in the choices
  double p_max = 0;                        // top context probability (uniform draw)
  std::vector<std::vector<double>> probs;  // Born distribution per context
  std::vector<std::vector<char>> support;  // probs > tol
};

// All joint alphabet choices whose phase total is a Fourier point, with
// their outcome distributions evaluated through the state-vector pipeline.
inline ContextTable enumerate_contexts(const Protocol& p,
                                       long long bound = kDefaultEnumerationBound,
                                       long long amp_bound = kDefaultAmplitudeBound) {
  validate(p);
  const int parties = p.players + 1;
  double total = 1;
  for (int i = 0; i < parties; ++i) total *= static_cast<double>(p.alphabet.size());
  if (total > static_cast<double>(bound))
    throw resource_error("context space exceeds the enumeration bound");

  ContextTable t;
  std::vector<int> choice(parties, 0);
  bool more = true;
  while (more) {
    PhasePoint sum = phase::zero_point(p.d);
    for (int i = 0; i < parties; ++i) sum = phase::add(sum, p.alphabet[choice[i]]);
    if (auto cls = phase::classical_index(sum)) {
      std::vector<std::vector<double>> angles;
      for (int i = 0; i < parties; ++i)
        angles.push_back(phase::to_angles(p.alphabet[choice[i]]));
      auto dist = qudit::mermin_outcome_distribution(p.d, parties, angles, amp_bound);
      std::vector<char> sup(dist.size());
      for (std::size_t k = 0; k < dist.size(); ++k) sup[k] = dist[k] > p.tol;
      t.contexts.push_back({choice, *cls});
      t.probs.push_back(std::move(dist));
      t.support.push_back(std::move(sup));
    }
    int c = parties - 1;  // last party fastest: lexicographic order
    while (c >= 0 && ++choice[c] == static_cast<int>(p.alphabet.size()))
      choice[c--] = 0;
    more = c >= 0;
  }
  if (t.contexts.empty())
    throw domain_error("no alphabet choice lands on a classical total");
  t.p_max = 1.0 / static_cast<double>(t.contexts.size());
  return t;
}

// The valid contexts, read as rows of a measurement scenario.
inline scenario::MerminScenario context_scenario(const Protocol& p,
                                                 long long bound = kDefaultEnumerationBound) {
  validate(p);
  auto table = enumerate_contexts(p, bound);
  scenario::MerminScenario s{p.d, p.players + 1, {}};
  for (const auto& ctx : table.contexts) {
    std::vector<PhasePoint> row;
    for (int idx : ctx.choice) row.push_back(p.alphabet[idx]);
    s.rows.push_back(std::move(row));
  }
  return s;
}

struct RoundStats {
  long long rounds = 0;
  double accuracy = 0;                      // decoded == secret
  std::vector<long long> offset_histogram;  // (decoded − secret) mod D
  double tv_from_uniform = 0;               // offset law vs uniform
  double mutual_information = 0;            // secret vs decoded, bits
};

namespace detail {

inline long long decode(long long d, long long c,
                        const std::vector<long long>& player_digits, long long a) {
  long long sum = std::accumulate(player_digits.begin(), player_digits.end(), 0LL);
  return ((c + sum + a) % d + d) % d;
}

inline long long encode(long long d, long long s, long long dealer_digit,
                        long long a) {
  return ((s + dealer_digit - 2 * a) % d + d) % d;
}

inline std::vector<long long> digits_of(std::size_t idx, long long d, int parties) {
  std::vector<long long> o(parties);
  for (int i = parties - 1; i >= 0; --i) {
    o[i] = static_cast<long long>(idx % static_cast<std::size_t>(d));
    idx /= static_cast<std::size_t>(d);
  }
  return o;
}

inline double tv_from_uniform(const std::vector<long long>& hist) {
  long long total = std::accumulate(hist.begin(), hist.end(), 0LL);
  if (total == 0) return 0;
  double tv = 0;
  for (long long h : hist)
    tv += std::abs(static_cast<double>(h) / total - 1.0 / hist.size());
  return tv / 2;
}

inline double plugin_mi_bits(const std::vector<std::vector<long long>>& joint) {
  long long total = 0;
  for (const auto& row : joint) total += std::accumulate(row.begin(), row.end(), 0LL);
  if (total == 0) return 0;
  std::vector<double> ps(joint.size(), 0), pd(joint[0].size(), 0);
  for (std::size_t s = 0; s < joint.size(); ++s)
    for (std::size_t v = 0; v < joint[s].size(); ++v) {
      ps[s] += static_cast<double>(joint[s][v]) / total;
      pd[v] += static_cast<double>(joint[s][v]) / total;
    }
  double mi = 0;
  for (std::size_t s = 0; s < joint.size(); ++s)
    for (std::size_t v = 0; v < joint[s].size(); ++v) {
      double pj = static_cast<double>(joint[s][v]) / total;
      if (pj > 0) mi += pj * std::log2(pj / (ps[s] * pd[v]));
    }
  return mi;
}

struct RoundTally {
  long long rounds = 0, correct = 0;
  std::vector<long long> offsets;
  std::vector<std::vector<long long>> joint;
  explicit RoundTally(long long d)
      : offsets(d, 0), joint(d, std::vector<long long>(d, 0)) {}
  void record(long long d, long long secret, long long decoded) {
    ++rounds;
    correct += decoded == secret;
    offsets[((decoded - secret) % d + d) % d] += 1;
    joint[secret][decoded] += 1;
  }
  RoundStats stats(long long /*d*/) const {
    RoundStats r;
    r.rounds = rounds;
    r.accuracy = rounds ? static_cast<double>(correct) / rounds : 0;
    r.offset_histogram = offsets;
    r.tv_from_uniform = tv_from_uniform(offsets);
    r.mutual_information = plugin_mi_bits(joint);
    return r;
  }
};

}  // namespace detail

// Honest rounds; optionally one player withholds their digit from the
// reconstruction.  Secrets are drawn fresh each round unless fixed.
inline RoundStats run_protocol(const Protocol& p, long long rounds,
                               std::uint64_t seed,
                               std::optional<int> withholding_player = std::nullopt,
                               std::optional<long long> fixed_secret = std::nullopt,
                               long long bound = kDefaultEnumerationBound) {
  if (rounds < 1) throw malformed_input("need at least one round");
  auto table = enumerate_contexts(p, bound);
  const int parties = p.players + 1;
  if (withholding_player &&
      (*withholding_player < 1 || *withholding_player > p.players))
    throw malformed_input("withholding player index out of range");
  if (fixed_secret && (*fixed_secret < 0 || *fixed_secret >= p.d))
    throw malformed_input("secret out of range");

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_ctx(0, table.contexts.size() - 1);
  std::uniform_int_distribution<long long> pick_secret(0, p.d - 1);
  std::vector<std::discrete_distribution<std::size_t>> samplers;
  samplers.reserve(table.probs.size());
  for (const auto& dist : table.probs)
    samplers.emplace_back(dist.begin(), dist.end());

  detail::RoundTally tally(p.d);
  for (long long r = 0; r < rounds; ++r) {
    std::size_t ctx = pick_ctx(rng);
    long long s = fixed_secret ? *fixed_secret : pick_secret(rng);
    auto digits = detail::digits_of(samplers[ctx](rng), p.d, parties);
    long long a = table.contexts[ctx].cls;
    long long c = detail::encode(p.d, s, digits[0], a);
    std::vector<long long> shared;
    for (int i = 1; i < parties; ++i)
      if (!withholding_player || i != *withholding_player) shared.push_back(digits[i]);
    tally.record(p.d, s, detail::decode(p.d, c, shared, a));
  }
  return tally.stats(p.d);
}

struct InterceptStats {
  RoundStats round;
  double failure_rate = 0;          // 1 − accuracy
  double predicted_failure = 0;     // (1 − p_max)(1 − 1/D)
  bool formula_applicable = false;  // alphabet bases pairwise unbiased
  double attacker_guess_rate = 0;   // eavesdropper decoding the broadcast
  // Exact expectation of the guess rate: the guess is right when the
  // dealer's digit hits one specific value, whose chance each context's
  // outcome law gives directly.
  double predicted_guess_rate = 0;
  // Heuristic that treats every non-modal context as fully scrambling.
  double naive_guess_rate = 0;
  std::vector<int> modal_context;  // the context the product state passes
};

// Whether every pair of distinct alphabet settings measures in mutually
// unbiased bases (the regime where the failure rate is exact).
inline bool alphabet_pairwise_unbiased(const Protocol& p) {
  validate(p);
  for (std::size_t i = 0; i < p.alphabet.size(); ++i)
    for (std::size_t j = 0; j < p.alphabet.size(); ++j) {
      if (i == j) continue;
      auto ba = qudit::phased_measurement_basis(p.d, phase::to_angles(p.alphabet[i]));
      auto bb = qudit::phased_measurement_basis(p.d, phase::to_angles(p.alphabet[j]));
      if (!qudit::is_mutually_unbiased(qudit::complementarity_report(ba, bb, p.tol),
                                       p.tol))
        return false;
    }
  return true;
}

// Intercept-and-resend: the eavesdropper distributes the product state
// that answers the first (modal) context with planted digits t, reads the
// broadcast, and decodes with t.  Each party's round outcome follows
// |⟨χ_o| phase(α_i − ᾱ_i) |χ_{t_i}⟩|², sampled independently.
inline InterceptStats run_intercepted(const Protocol& p, long long rounds,
                                      std::uint64_t seed,
                                      long long bound = kDefaultEnumerationBound) {
  if (rounds < 1) throw malformed_input("need at least one round");
  auto table = enumerate_contexts(p, bound);
  const int parties = p.players + 1;
  const auto& modal = table.contexts.front();

  // Planted digits: dealer takes the modal class, everyone else zero.
  std::vector<long long> planted(parties, 0);
  planted[0] = modal.cls;

  // Per context and party, the outcome law of the planted digit under the
  // phase mismatch between the real and the modal setting.
  std::vector<std::vector<std::vector<double>>> laws(table.contexts.size());
  for (std::size_t ctx = 0; ctx < table.contexts.size(); ++ctx) {
    laws[ctx].resize(parties);
    for (int i = 0; i < parties; ++i) {
      auto delta = phase::add(p.alphabet[table.contexts[ctx].choice[i]],
                              phase::neg(p.alphabet[modal.choice[i]]));
      auto angles = phase::to_angles(delta);
      std::vector<double> law(p.d, 0.0);
      for (long long o = 0; o < p.d; ++o) {
        std::complex<double> amp = 0;
        for (long long j = 0; j < p.d; ++j) {
          double theta = j == 0 ? 0.0 : angles[j - 1];
          amp += std::polar(1.0, theta + qudit::kTau * static_cast<double>(
                                             (planted[i] - o) * j) / p.d);
        }
        law[o] = std::norm(amp) / static_cast<double>(p.d * p.d);
      }
      laws[ctx][i] = std::move(law);
    }
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_ctx(0, table.contexts.size() - 1);
  std::uniform_int_distribution<long long> pick_secret(0, p.d - 1);
  std::vector<std::vector<std::discrete_distribution<long long>>> samplers(
      table.contexts.size());
  for (std::size_t ctx = 0; ctx < laws.size(); ++ctx)
    for (int i = 0; i < parties; ++i)
      samplers[ctx].emplace_back(laws[ctx][i].begin(), laws[ctx][i].end());

  detail::RoundTally tally(p.d);
  long long attacker_correct = 0;
  for (long long r = 0; r < rounds; ++r) {
    std::size_t ctx = pick_ctx(rng);
    long long s = pick_secret(rng);
    std::vector<long long> digits(parties);
    for (int i = 0; i < parties; ++i) digits[i] = samplers[ctx][i](rng);
    long long a = table.contexts[ctx].cls;
    long long c = detail::encode(p.d, s, digits[0], a);
    std::vector<long long> shared(digits.begin() + 1, digits.end());
    tally.record(p.d, s, detail::decode(p.d, c, shared, a));
    std::vector<long long> guessed(planted.begin() + 1, planted.end());
    attacker_correct += detail::decode(p.d, c, guessed, a) == s;
  }

  InterceptStats out;
  out.round = tally.stats(p.d);
  out.failure_rate = 1.0 - out.round.accuracy;
  out.formula_applicable = alphabet_pairwise_unbiased(p);
  out.predicted_failure =
      (1.0 - table.p_max) * (1.0 - 1.0 / static_cast<double>(p.d));
  out.attacker_guess_rate =
      static_cast<double>(attacker_correct) / static_cast<double>(rounds);
  // The guess decodes correctly exactly when the dealer's digit equals
  // t_0 + a − ā; average that hit chance over the contexts.
  for (std::size_t ctx = 0; ctx < table.contexts.size(); ++ctx) {
    long long hit =
        ((planted[0] + table.contexts[ctx].cls - modal.cls) % p.d + p.d) % p.d;
    out.predicted_guess_rate +=
        laws[ctx][0][static_cast<std::size_t>(hit)] / table.contexts.size();
  }
  out.naive_guess_rate =
      table.p_max + (1.0 - table.p_max) / static_cast<double>(p.d);
  out.modal_context = modal.choice;
  return out;
}

struct DetectionReport {
  long long rounds = 0;
  bool support_violation = false;  // some outcome outside the reference support
  std::size_t first_violation_round = 0;
  double pooled_tv = 0;  // joint (context, outcome) law vs reference
  bool detected = false;
};

namespace detail {

template <typename OutcomeFn>
DetectionReport detect_rounds(const Protocol& p, const ContextTable& table,
                              long long rounds, std::uint64_t seed,
                              OutcomeFn&& outcomes, double tv_threshold,
                              long long min_rounds) {
  const int parties = p.players + 1;
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<std::size_t> pick_ctx(0, table.contexts.size() - 1);

  DetectionReport rep;
  rep.rounds = rounds;
  std::vector<std::vector<long long>> counts(table.contexts.size());
  for (std::size_t ctx = 0; ctx < counts.size(); ++ctx)
    counts[ctx].assign(table.probs[ctx].size(), 0);

  for (long long r = 0; r < rounds; ++r) {
    std::size_t ctx = pick_ctx(rng);
    std::vector<long long> o = outcomes(ctx, rng);
    std::size_t idx = 0;
    for (int i = 0; i < parties; ++i)
      idx = idx * static_cast<std::size_t>(p.d) + static_cast<std::size_t>(o[i]);
    counts[ctx][idx] += 1;
    if (!table.support[ctx][idx] && !rep.support_violation) {
      rep.support_violation = true;
      rep.first_violation_round = static_cast<std::size_t>(r);
    }
  }

  double tv = 0;
  const double ctx_weight = 1.0 / static_cast<double>(table.contexts.size());
  for (std::size_t ctx = 0; ctx < counts.size(); ++ctx)
    for (std::size_t k = 0; k < counts[ctx].size(); ++k)
      tv += std::abs(static_cast<double>(counts[ctx][k]) / rounds -
                     ctx_weight * table.probs[ctx][k]);
  rep.pooled_tv = tv / 2;
  rep.detected = rep.support_violation ||
                 (rounds >= min_rounds && rep.pooled_tv > tv_threshold);
  return rep;
}

}  // namespace detail

// Parties replaced by a fixed answer table: answer[party][alphabet index].
inline DetectionReport run_detection_deterministic(
    const Protocol& p, long long rounds, std::uint64_t seed,
    const std::vector<std::vector<long long>>& answer, double tv_threshold = 0.05,
    long long min_rounds = 1000, long long bound = kDefaultEnumerationBound) {
  if (rounds < 1) throw malformed_input("need at least one round");
  auto table = enumerate_contexts(p, bound);
  const int parties = p.players + 1;
  if (static_cast<int>(answer.size()) != parties)
    throw malformed_input("answer table needs one row per party");
  for (const auto& row : answer)
    if (row.size() != p.alphabet.size())
      throw malformed_input("answer table needs one entry per alphabet point");

  return detail::detect_rounds(
      p, table, rounds, seed,
      [&](std::size_t ctx, std::mt19937_64&) {
        std::vector<long long> o(parties);
        for (int i = 0; i < parties; ++i)
          o[i] = ((answer[i][table.contexts[ctx].choice[i]]) % p.d + p.d) % p.d;
        return o;
      },
      tv_threshold, min_rounds);
}

// Parties replaced by a stochastic local model sampled fresh each round.
// `rows` must be the possibilistic table of context_scenario(p), so its
// per-row setting indices align with the model's answer tables.
inline DetectionReport run_detection_model(
    const Protocol& p, long long rounds, std::uint64_t seed,
    const lhv::LhvModel& model, const lhv::PossibilisticTable& rows,
    double tv_threshold = 0.05, long long min_rounds = 1000,
    long long bound = kDefaultEnumerationBound) {
  if (rounds < 1) throw malformed_input("need at least one round");
  auto table = enumerate_contexts(p, bound);
  const int parties = p.players + 1;
  if (model.d != p.d || model.parties != parties)
    throw malformed_input("model shape does not match the protocol");
  if (rows.setting_of.size() != table.contexts.size())
    throw malformed_input("row table does not cover the protocol contexts");

  std::discrete_distribution<std::size_t> pick_atom(model.weights.begin(),
                                                    model.weights.end());
  return detail::detect_rounds(
      p, table, rounds, seed,
      [&, pick_atom](std::size_t ctx, std::mt19937_64& rng) mutable {
        std::size_t atom = pick_atom(rng);
        std::vector<long long> o(parties);
        for (int i = 0; i < parties; ++i)
          o[i] = model.answer[atom][i][rows.setting_of[ctx][i]];
        return o;
      },
      tv_threshold, min_rounds);
}

struct TableSweep {
  long long tables = 0;           // deterministic answer tables examined
  long long detected = 0;         // tables violating some context's class
  bool all_detected = false;
  std::vector<std::vector<long long>> surviving;  // first table passing all
};

// Structural tier of the detection: a deterministic table escapes only if
// it meets every context's digit-sum class, so sweeping all tables decides
// whether classical parties can ever imitate the state unnoticed.
inline TableSweep sweep_deterministic_tables(const Protocol& p,
                                             long long bound = kDefaultEnumerationBound) {
  auto table = enumerate_contexts(p, bound);
  const int parties = p.players + 1;
  const std::size_t cells = static_cast<std::size_t>(parties) * p.alphabet.size();
  double total = 1;
  for (std::size_t c = 0; c < cells; ++c) total *= static_cast<double>(p.d);
  if (total > static_cast<double>(bound))
    throw resource_error("table space exceeds the enumeration bound");

  TableSweep sweep;
  std::vector<long long> flat(cells, 0);
  bool more = true;
  while (more) {
    ++sweep.tables;
    bool caught = false;
    for (std::size_t ctx = 0; ctx < table.contexts.size() && !caught; ++ctx) {
      long long sum = 0;
      for (int i = 0; i < parties; ++i)
        sum += flat[static_cast<std::size_t>(i) * p.alphabet.size() +
                    static_cast<std::size_t>(table.contexts[ctx].choice[i])];
      caught = sum % p.d != table.contexts[ctx].cls;
    }
    if (caught) {
      ++sweep.detected;
    } else if (sweep.surviving.empty()) {
      sweep.surviving.assign(parties, {});
      for (int i = 0; i < parties; ++i)
        for (std::size_t a = 0; a < p.alphabet.size(); ++a)
          sweep.surviving[static_cast<std::size_t>(i)].push_back(
              flat[static_cast<std::size_t>(i) * p.alphabet.size() + a]);
    }
    std::size_t c = 0;
    while (c < cells && ++flat[c] == p.d) flat[c++] = 0;
    more = c < cells;
  }
  sweep.all_detected = sweep.detected == sweep.tables;
  return sweep;
}

}  // namespace mermin::qss
