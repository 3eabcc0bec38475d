#include <catch_amalgamated.hpp>

#include <random>

#include "mermin/lhv.hpp"

using namespace mermin;
using namespace mermin::lhv;
using phase::PhasePoint;
using phase::Rat;

namespace {

// Digit sum of an outcome index written in base d with `parties` digits.
long long digit_sum(std::size_t idx, long long d, int parties) {
  long long s = 0;
  for (int i = 0; i < parties; ++i) {
    s += static_cast<long long>(idx % d);
    idx /= d;
  }
  return s % d;
}

bool assignment_meets_rows(const PossibilisticTable& t,
                           const std::vector<std::vector<long long>>& a) {
  for (std::size_t r = 0; r < t.setting_of.size(); ++r) {
    long long sum = 0;
    for (int i = 0; i < t.parties; ++i) sum += a[i][t.setting_of[r][i]];
    if (sum % t.d != t.row_class[r]) return false;
  }
  return true;
}

bool certificate_cancels(const PossibilisticTable& t, const ParityCertificate& c) {
  // Rebuild the per-column coefficient sums under the multipliers.
  std::vector<std::vector<int>> column_of(t.parties);
  int columns = 0;
  for (int i = 0; i < t.parties; ++i)
    for (std::size_t s = 0; s < t.settings[i].size(); ++s)
      column_of[i].push_back(columns++);
  std::vector<long long> acc(columns, 0);
  long long rhs = 0;
  for (std::size_t r = 0; r < t.setting_of.size(); ++r) {
    for (int i = 0; i < t.parties; ++i)
      acc[column_of[i][t.setting_of[r][i]]] += c.multipliers[r];
    rhs += c.multipliers[r] * t.row_class[r];
  }
  for (long long v : acc)
    if (v % c.modulus != 0) return false;
  return rhs % c.modulus == c.combined_rhs && c.combined_rhs != 0;
}

scenario::MerminScenario random_classical_scenario(std::mt19937& rng, long long d,
                                                   int parties, int rows) {
  std::uniform_int_distribution<long long> pick(0, d - 1);
  scenario::MerminScenario s{d, parties, {}};
  for (int r = 0; r < rows; ++r) {
    std::vector<PhasePoint> row;
    for (int i = 0; i < parties; ++i)
      row.push_back(phase::classical_point(d, pick(rng)));
    s.rows.push_back(std::move(row));
  }
  return s;
}

}  // namespace

TEST_CASE("quantum table of the three-party argument") {
  auto built = scenario::build_nonlocal_scenario(
      2, {2}, {phase::make_point(2, {Rat(1, 4)})});
  auto t = quantum_table(built.scenario);
  REQUIRE(t.parties == 3);
  REQUIRE(t.setting_of.size() == 4);
  for (int i = 0; i < 3; ++i) CHECK(t.settings[i].size() == 2);
  CHECK(t.row_class == std::vector<long long>{0, 1, 1, 1});
  for (std::size_t r = 0; r < 4; ++r) {
    for (std::size_t k = 0; k < 8; ++k) {
      bool in_class = digit_sum(k, 2, 3) == t.row_class[r];
      CHECK(t.support[r][k] == in_class);
      CHECK(std::abs(t.probs[r][k] - (in_class ? 0.25 : 0.0)) < 1e-9);
    }
  }
}

TEST_CASE("three-party argument has no deterministic answer sheet") {
  auto built = scenario::build_nonlocal_scenario(
      2, {2}, {phase::make_point(2, {Rat(1, 4)})});
  auto t = quantum_table(built.scenario);

  auto parity = lhv_exists_parity(t);
  CHECK_FALSE(parity.exists);
  REQUIRE(parity.certificate.has_value());
  const auto& c = *parity.certificate;
  CHECK(c.modulus == 2);
  CHECK(c.combined_rhs == 1);
  CHECK(c.multipliers == std::vector<long long>{1, 1, 1, 1});
  CHECK(c.rendered == "0 ≡ 1 (mod 2)");
  CHECK(certificate_cancels(t, c));

  auto poss = lhv_exists_possibilistic(t);
  CHECK_FALSE(poss.exists);
  CHECK(poss.consistent_assignments == 0);
}

TEST_CASE("four-party level-3 argument is certified impossible") {
  auto built = scenario::build_nonlocal_scenario(
      3, {3}, {phase::make_point(3, {Rat(1, 9), Rat(8, 9)})});
  auto t = quantum_table(built.scenario);
  REQUIRE(t.setting_of.size() == 5);

  auto parity = lhv_exists_parity(t);
  CHECK_FALSE(parity.exists);
  REQUIRE(parity.certificate.has_value());
  const auto& c = *parity.certificate;
  CHECK(c.modulus == 3);
  CHECK(c.multipliers == std::vector<long long>{1, 2, 2, 2, 2});
  CHECK(c.rendered == "0 ≡ 2 (mod 3)");
  CHECK(certificate_cancels(t, c));

  auto poss = lhv_exists_possibilistic(t);
  CHECK_FALSE(poss.exists);
  CHECK(poss.consistent_assignments == 0);
}

TEST_CASE("ten-variation preset is certified impossible") {
  auto rows = scenario::to_rows(scenario::ten_variation_preset(), 1);
  auto t = quantum_table(rows);
  auto parity = lhv_exists_parity(t);
  CHECK_FALSE(parity.exists);
  REQUIRE(parity.certificate.has_value());
  CHECK(parity.certificate->modulus == 3);
  CHECK(certificate_cancels(t, *parity.certificate));
}

TEST_CASE("classical scenarios admit the shared-shift model") {
  PhasePoint z = phase::zero_point(2), h = phase::classical_point(2, 1);
  scenario::MerminScenario s{2, 3, {{z, z, z}, {h, h, z}, {h, z, h}, {z, h, h}}};
  auto t = quantum_table(s);
  CHECK(t.row_class == std::vector<long long>{0, 0, 0, 0});

  auto parity = lhv_exists_parity(t);
  CHECK(parity.exists);
  CHECK(assignment_meets_rows(t, parity.assignment));

  auto poss = lhv_exists_possibilistic(t);
  CHECK(poss.exists);
  CHECK(poss.consistent_assignments > 0);

  auto model = build_trivial_lhv(t);
  CHECK(model.atoms.size() == 4);
  double total = 0;
  for (std::size_t a = 0; a < model.atoms.size(); ++a) {
    total += model.weights[a];
    long long sum = 0;
    for (long long digit : model.atoms[a]) sum += digit;
    CHECK(sum % 2 == 0);
  }
  CHECK(std::abs(total - 1.0) < 1e-12);

  auto induced = model_table(model, t);
  for (std::size_t r = 0; r < t.probs.size(); ++r)
    for (std::size_t k = 0; k < t.probs[r].size(); ++k)
      CHECK(std::abs(induced[r][k] - t.probs[r][k]) < 1e-9);
}

TEST_CASE("randomized classical scenarios: model matches the quantum table") {
  std::mt19937 rng(71);
  for (int trial = 0; trial < 12; ++trial) {
    long long d = 2 + trial % 2;
    int parties = 2 + trial % 3;
    int rows = 2 + trial % 3;
    auto s = random_classical_scenario(rng, d, parties, rows);
    auto t = quantum_table(s);

    auto parity = lhv_exists_parity(t);
    CHECK(parity.exists);
    CHECK(assignment_meets_rows(t, parity.assignment));
    CHECK(lhv_exists_possibilistic(t).exists);

    auto induced = model_table(build_trivial_lhv(t), t);
    double worst = 0;
    for (std::size_t r = 0; r < t.probs.size(); ++r)
      for (std::size_t k = 0; k < t.probs[r].size(); ++k)
        worst = std::max(worst, std::abs(induced[r][k] - t.probs[r][k]));
    CHECK(worst < 1e-9);
  }
}

TEST_CASE("shape and domain errors") {
  auto built = scenario::build_nonlocal_scenario(
      2, {2}, {phase::make_point(2, {Rat(1, 4)})});
  auto t = quantum_table(built.scenario);
  // Non-classical settings admit no shared-shift model.
  CHECK_THROWS_AS(build_trivial_lhv(t), mermin::domain_error);

  PhasePoint b = phase::make_point(2, {Rat(1, 4)}), z = phase::zero_point(2);
  scenario::MerminScenario bad{2, 2, {{b, z}}};
  CHECK_THROWS_AS(quantum_table(bad), mermin::domain_error);

  PossibilisticTable empty;
  CHECK_THROWS_AS(lhv_exists_parity(empty), mermin::malformed_input);

  LhvModel m;
  m.d = 3;
  m.parties = t.parties;
  CHECK_THROWS_AS(model_table(m, t), mermin::malformed_input);
}
