#include <catch_amalgamated.hpp>

#include "mermin/frel.hpp"

using namespace mermin;
using namespace mermin::frel;

namespace {

// State whose support is the section h ↦ g(h) of the carrier G×H.
Rel section_state(std::size_t n, std::size_t sh,
                  const std::vector<std::size_t>& gs) {
  Rel s{n, 1, {}};
  for (std::size_t h = 0; h < sh; ++h) s.pairs.emplace_back(gs[h] * sh + h, 0);
  s.normalize();
  return s;
}

const std::vector<abgroup::FinAbGroup>& small_groups() {
  static const std::vector<abgroup::FinAbGroup> gs = {
      {{1}}, {{2}}, {{3}}, {{4}}, {{2, 2}}};
  return gs;
}

}  // namespace

TEST_CASE("relation algebra behaves like boolean matrices") {
  // f = {0↦1, 1↦0,2}, g = {0↦0, 1↦1} on a 3-point set into itself.
  Rel f{3, 3, {{1, 0}, {0, 1}, {2, 1}}};
  f.normalize();
  Rel g{3, 3, {{0, 0}, {1, 1}}};
  auto fg = compose(f, g);
  CHECK(fg == Rel{3, 3, {{0, 1}, {1, 0}, {2, 1}}});
  CHECK(dagger(dagger(f)) == f);
  CHECK(compose(identity_rel(3), f) == f);
  CHECK(compose(f, identity_rel(3)) == f);
  CHECK(compose(swap_rel(3), swap_rel(3)) == identity_rel(9));

  auto k = kron(identity_rel(2), f);
  CHECK(k.rows == 6);
  CHECK(k.pairs.size() == 6);

  Rel dup{2, 2, {{0, 0}, {0, 0}, {1, 1}}};
  dup.normalize();
  CHECK(dup.pairs.size() == 2);

  CHECK(is_bijection_graph(identity_rel(4)));
  CHECK_FALSE(is_bijection_graph(Rel{2, 2, {{0, 0}, {1, 0}}}));
  CHECK_FALSE(is_bijection_graph(Rel{2, 2, {{0, 0}}}));

  CHECK_THROWS_AS(compose(f, identity_rel(2)), malformed_input);
  CHECK_THROWS_AS(validate(Rel{2, 2, {{2, 0}}}), malformed_input);
}

TEST_CASE("slice-wise structures satisfy every law exactly") {
  for (const auto& g : small_groups())
    for (const auto& h : small_groups()) {
      RelCarrier c{g, h};
      auto z = slicewise_first(c);
      auto x = slicewise_second(c);
      auto rep = verify_rel_laws(z, x);
      INFO("carrier " << z.n);
      CHECK(rep.frobenius_ok);
      CHECK(rep.special_ok);
      CHECK(rep.bialgebra_ok);
      CHECK(rep.coherence_ok);
      CHECK(rep.all_ok());
    }
}

TEST_CASE("phase states are sections, copyables are constant") {
  RelCarrier c{{{2}}, {{3}}};  // carrier of size 6
  auto z = slicewise_first(c);
  auto x = slicewise_second(c);

  auto zp = phase_states(z);
  CHECK(zp.size() == 8);  // |G|^|H| = 2^3
  auto xp = phase_states(x);
  CHECK(xp.size() == 9);  // |H|^|G| = 3^2

  auto zc = copyable_states(z);
  CHECK(zc.size() == 3);  // one slice G×{h} per h
  auto xc = copyable_states(x);
  CHECK(xc.size() == 2);  // one slice {g}×H per g

  // The copyables of one structure are phases of the other.
  for (const auto& s : xc) CHECK(is_phase_state(z, s));
  for (const auto& s : zc) CHECK(is_phase_state(x, s));

  // Convolving two sections adds them pointwise.
  auto s1 = section_state(6, 3, {0, 1, 0});
  auto s2 = section_state(6, 3, {1, 1, 0});
  CHECK(is_phase_state(z, s1));
  auto conv = compose(z.mult, kron(s1, s2));
  CHECK(conv == section_state(6, 3, {1, 0, 0}));
  CHECK(is_phase_state(z, conv));

  // A non-section subset is not a phase state.
  Rel lopsided{6, 1, {{0, 0}, {3, 0}}};  // two points in the h = 0 slice
  CHECK_FALSE(is_phase_state(z, lopsided));
  CHECK_THROWS_AS(is_phase_state(z, Rel{5, 1, {}}), malformed_input);
}

TEST_CASE("phase counts match the section formula on larger carriers") {
  RelCarrier c{{{4}}, {{2, 2}}};  // carrier of size 16
  auto z = slicewise_first(c);
  auto s = section_state(16, 4, {3, 1, 0, 2});
  CHECK(is_phase_state(z, s));
  Rel off = s;
  off.pairs[0].first = (off.pairs[0].first + 1) % 16;  // break one slice
  off.normalize();
  CHECK_FALSE(is_phase_state(z, off));

  RelCarrier small{{{2}}, {{2}}};
  auto zs = slicewise_first(small);
  CHECK(phase_states(zs).size() == 4);
  CHECK(copyable_states(slicewise_second(small)).size() == 2);
}

TEST_CASE("corrupted structures fail the law checks") {
  RelCarrier c{{{2}}, {{2}}};
  auto z = slicewise_first(c);
  auto x = slicewise_second(c);

  {
    // Drop one product pair (the comultiplication keeps the original).
    auto bad = z;
    std::size_t lhs = 1 * 2 + 0, rhs = 1 * 2 + 0;  // (1,0)·(1,0) ↦ (0,0)
    std::pair<std::size_t, std::size_t> gone{0, lhs * 4 + rhs};
    auto it = std::find(bad.mult.pairs.begin(), bad.mult.pairs.end(), gone);
    REQUIRE(it != bad.mult.pairs.end());
    bad.mult.pairs.erase(it);
    auto rep = verify_rel_laws(bad, x);
    CHECK_FALSE(rep.frobenius_ok);
    CHECK_FALSE(rep.all_ok());
  }
  {
    // Add a cross-slice product to the second structure.
    auto bad = x;
    bad.mult.pairs.emplace_back(0, 0 * 4 + 3);  // (0,0)·(1,1) ↦ (0,0)
    bad.mult.normalize();
    auto rep = verify_rel_laws(z, bad);
    CHECK_FALSE(rep.coherence_ok);
    CHECK_FALSE(rep.all_ok());
  }
  {
    // Grow the unit beyond the zero section.
    auto bad = z;
    bad.unit.pairs.emplace_back(2, 0);  // adds (1, 0)
    bad.unit.normalize();
    auto rep = verify_rel_laws(bad, x);
    CHECK_FALSE(rep.frobenius_ok);
    CHECK_FALSE(rep.all_ok());
  }
  CHECK_THROWS_AS(verify_rel_laws(z, slicewise_first(RelCarrier{{{2}}, {{3}}})),
                  malformed_input);
}

TEST_CASE("every small carrier is local") {
  for (const auto& g : small_groups())
    for (const auto& h : small_groups()) {
      auto v = frel_locality_check(RelCarrier{g, h});
      INFO("orders " << v.classical_subgroup << " and "
                     << v.phase_group_order / std::max(v.classical_subgroup, 1LL));
      CHECK(v.local);
      CHECK(v.verdict.trivial);
      CHECK_FALSE(v.verdict.checked_divisors.empty());
      long long expected = 1;
      std::size_t sh = 1;
      for (long long d : h.factors) sh *= static_cast<std::size_t>(d);
      for (std::size_t slot = 0; slot < sh; ++slot)
        for (long long d : g.factors) expected *= d;
      CHECK(v.phase_group_order == expected);
    }

  // The exhaustive phase-state count agrees with the reported group order.
  RelCarrier c{{{2}}, {{2}}};
  auto v = frel_locality_check(c);
  CHECK(v.phase_group_order ==
        static_cast<long long>(phase_states(slicewise_first(c)).size()));
  CHECK(v.classical_subgroup ==
        static_cast<long long>(copyable_states(slicewise_second(c)).size()));
}
