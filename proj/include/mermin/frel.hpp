// The relational model: sets and relations in place of Hilbert spaces.
//
// On a carrier set G×H (G, H finite abelian groups) two interacting
// algebras live side by side: slice-wise G-addition (|H| parallel copies
// of G) and slice-wise H-addition (|G| parallel copies of H).  Both are
// special dagger Frobenius structures, they satisfy the same interaction
// laws as the point/group pair on a D-level system, and every law is an
// exact identity of relations — no tolerances.
//
// Phase states of the first structure are graphs of sections H → G, a
// group isomorphic to G^H under convolution; the classical ones are the
// constant sections, a diagonal copy of G.  Evaluating a section at any
// single slice retracts the phase group onto the diagonal, so the
// classical subgroup is always a direct summand here: this model admits
// no argument of the kind the D-level systems support.

#pragma once

#include <algorithm>
#include <utility>
#include <vector>

#include "mermin/abgroup.hpp"
#include "mermin/errors.hpp"

namespace mermin::frel {

// A relation between finite sets, stored as sorted (target, source) pairs.
struct Rel {
  std::size_t rows = 0, cols = 0;
  std::vector<std::pair<std::size_t, std::size_t>> pairs;

  void normalize() {
    std::sort(pairs.begin(), pairs.end());
    pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
  }
  friend bool operator==(const Rel&, const Rel&) = default;
};

inline void validate(const Rel& r) {
  for (auto [t, s] : r.pairs)
    if (t >= r.rows || s >= r.cols)
      throw malformed_input("relation pair out of range");
}

inline Rel identity_rel(std::size_t n) {
  Rel r{n, n, {}};
  for (std::size_t i = 0; i < n; ++i) r.pairs.emplace_back(i, i);
  return r;
}

// The unique non-empty scalar (relation on a one-point set).
inline Rel scalar_true() { return Rel{1, 1, {{0, 0}}}; }

inline Rel dagger(const Rel& a) {
  Rel r{a.cols, a.rows, {}};
  for (auto [t, s] : a.pairs) r.pairs.emplace_back(s, t);
  r.normalize();
  return r;
}

// a ∘ b: apply b first.
inline Rel compose(const Rel& a, const Rel& b) {
  if (a.cols != b.rows) throw malformed_input("composition shape mismatch");
  std::vector<std::vector<std::size_t>> by_source(a.cols);
  for (auto [t, s] : a.pairs) by_source[s].push_back(t);
  Rel r{a.rows, b.cols, {}};
  for (auto [t, s] : b.pairs)
    for (std::size_t u : by_source[t]) r.pairs.emplace_back(u, s);
  r.normalize();
  return r;
}

inline Rel kron(const Rel& a, const Rel& b,
                long long bound = kDefaultEnumerationBound) {
  if (static_cast<double>(a.pairs.size()) * static_cast<double>(b.pairs.size()) >
      static_cast<double>(bound))
    throw resource_error("relation product exceeds the enumeration bound");
  Rel r{a.rows * b.rows, a.cols * b.cols, {}};
  for (auto [ta, sa] : a.pairs)
    for (auto [tb, sb] : b.pairs)
      r.pairs.emplace_back(ta * b.rows + tb, sa * b.cols + sb);
  r.normalize();
  return r;
}

inline Rel swap_rel(std::size_t n) {
  Rel r{n * n, n * n, {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) r.pairs.emplace_back(j * n + i, i * n + j);
  r.normalize();
  return r;
}

// Graph of a bijection: exactly one target per source and vice versa.
inline bool is_bijection_graph(const Rel& a) {
  if (a.rows != a.cols || a.pairs.size() != a.rows) return false;
  std::vector<char> src(a.cols, 0), tgt(a.rows, 0);
  for (auto [t, s] : a.pairs) {
    if (src[s] || tgt[t]) return false;
    src[s] = tgt[t] = 1;
  }
  return true;
}

struct RelFrobenius {
  std::size_t n = 0;
  Rel mult;    // n × n²
  Rel unit;    // n × 1
  Rel comult;  // n² × n
  Rel counit;  // 1 × n
};

struct RelCarrier {
  abgroup::FinAbGroup g{{2}};
  abgroup::FinAbGroup h{{2}};
};

namespace detail {

inline std::size_t group_size(const abgroup::FinAbGroup& g) {
  std::size_t n = 1;
  for (long long d : g.factors) n *= static_cast<std::size_t>(d);
  return n;
}

// Mixed-radix index with the last coordinate fastest.
inline std::size_t index_of(const abgroup::FinAbGroup& g,
                            const abgroup::Element& e) {
  std::size_t idx = 0;
  for (std::size_t c = 0; c < g.factors.size(); ++c)
    idx = idx * static_cast<std::size_t>(g.factors[c]) +
          static_cast<std::size_t>(e[c]);
  return idx;
}

inline abgroup::Element element_of(const abgroup::FinAbGroup& g,
                                   std::size_t idx) {
  abgroup::Element e(g.factors.size(), 0);
  for (std::size_t c = g.factors.size(); c-- > 0;) {
    e[c] = static_cast<long long>(idx % static_cast<std::size_t>(g.factors[c]));
    idx /= static_cast<std::size_t>(g.factors[c]);
  }
  return e;
}

inline std::size_t carrier_size(const RelCarrier& c, long long bound) {
  abgroup::validate(c.g);
  abgroup::validate(c.h);
  std::size_t n = group_size(c.g) * group_size(c.h);
  if (n > static_cast<std::size_t>(bound))
    throw resource_error("carrier exceeds the relation size bound");
  return n;
}

}  // namespace detail

// Slice-wise G-addition: |H| parallel copies of G on the carrier G×H.
inline RelFrobenius slicewise_first(const RelCarrier& c,
                                    long long bound = kDefaultRelationCarrierBound) {
  const std::size_t n = detail::carrier_size(c, bound);
  const std::size_t sg = detail::group_size(c.g), sh = detail::group_size(c.h);
  RelFrobenius f;
  f.n = n;
  f.mult = Rel{n, n * n, {}};
  for (std::size_t a = 0; a < sg; ++a)
    for (std::size_t b = 0; b < sg; ++b)
      for (std::size_t h = 0; h < sh; ++h) {
        auto sum = abgroup::add(c.g, detail::element_of(c.g, a),
                                detail::element_of(c.g, b));
        std::size_t lhs = a * sh + h, rhs = b * sh + h;
        f.mult.pairs.emplace_back(detail::index_of(c.g, sum) * sh + h,
                                  lhs * n + rhs);
      }
  f.mult.normalize();
  f.unit = Rel{n, 1, {}};
  for (std::size_t h = 0; h < sh; ++h) f.unit.pairs.emplace_back(h, 0);
  f.unit.normalize();
  f.comult = dagger(f.mult);
  f.counit = dagger(f.unit);
  return f;
}

// Slice-wise H-addition: |G| parallel copies of H on the same carrier.
inline RelFrobenius slicewise_second(const RelCarrier& c,
                                     long long bound = kDefaultRelationCarrierBound) {
  const std::size_t n = detail::carrier_size(c, bound);
  const std::size_t sg = detail::group_size(c.g), sh = detail::group_size(c.h);
  RelFrobenius f;
  f.n = n;
  f.mult = Rel{n, n * n, {}};
  for (std::size_t a = 0; a < sh; ++a)
    for (std::size_t b = 0; b < sh; ++b)
      for (std::size_t g = 0; g < sg; ++g) {
        auto sum = abgroup::add(c.h, detail::element_of(c.h, a),
                                detail::element_of(c.h, b));
        std::size_t lhs = g * sh + a, rhs = g * sh + b;
        f.mult.pairs.emplace_back(g * sh + detail::index_of(c.h, sum),
                                  lhs * n + rhs);
      }
  f.mult.normalize();
  f.unit = Rel{n, 1, {}};
  for (std::size_t g = 0; g < sg; ++g) f.unit.pairs.emplace_back(g * sh, 0);
  f.unit.normalize();
  f.comult = dagger(f.mult);
  f.counit = dagger(f.unit);
  return f;
}

struct RelLawReport {
  bool frobenius_ok = false;
  bool special_ok = false;
  bool bialgebra_ok = false;
  bool coherence_ok = false;
  bool all_ok() const {
    return frobenius_ok && special_ok && bialgebra_ok && coherence_ok;
  }
};

namespace detail {

inline bool frobenius_holds(std::size_t n, const RelFrobenius& f) {
  auto id = identity_rel(n);
  bool assoc = compose(f.mult, kron(f.mult, id)) == compose(f.mult, kron(id, f.mult));
  bool unit = compose(f.mult, kron(f.unit, id)) == id &&
              compose(f.mult, kron(id, f.unit)) == id;
  bool coassoc = compose(kron(f.comult, id), f.comult) ==
                 compose(kron(id, f.comult), f.comult);
  bool counit = compose(kron(f.counit, id), f.comult) == id &&
                compose(kron(id, f.counit), f.comult) == id;
  auto middle = compose(f.comult, f.mult);
  bool frob = compose(kron(id, f.mult), kron(f.comult, id)) == middle &&
              compose(kron(f.mult, id), kron(id, f.comult)) == middle;
  return assoc && unit && coassoc && counit && frob;
}

inline bool bialgebra_holds(std::size_t n, const RelFrobenius& z,
                            const RelFrobenius& x) {
  auto id = identity_rel(n);
  auto shuffle = kron(kron(id, swap_rel(n)), id);
  auto lhs = compose(z.comult, x.mult);
  auto rhs = compose(kron(x.mult, x.mult),
                     compose(shuffle, kron(z.comult, z.comult)));
  return lhs == rhs;
}

}  // namespace detail

// Every law is an exact relational identity; the pair is special rather
// than quasi-special (the loop m∘δ is the identity on the nose).
inline RelLawReport verify_rel_laws(const RelFrobenius& z, const RelFrobenius& x) {
  if (z.n != x.n) throw malformed_input("structures live on different carriers");
  const std::size_t n = z.n;
  validate(z.mult);
  validate(x.mult);
  RelLawReport rep;
  rep.frobenius_ok = detail::frobenius_holds(n, z) && detail::frobenius_holds(n, x);
  rep.special_ok = compose(z.mult, z.comult) == identity_rel(n) &&
                   compose(x.mult, x.comult) == identity_rel(n);
  rep.bialgebra_ok = detail::bialgebra_holds(n, z, x) &&
                     detail::bialgebra_holds(n, x, z);
  rep.coherence_ok = compose(z.comult, x.unit) == kron(x.unit, x.unit) &&
                     compose(z.counit, x.mult) == kron(z.counit, z.counit) &&
                     compose(z.counit, x.unit) == scalar_true();
  return rep;
}

// A state is a phase of the structure when translating by it permutes the
// carrier — m ∘ (state ⊗ 1) must be the graph of a bijection.
inline bool is_phase_state(const RelFrobenius& f, const Rel& state) {
  if (state.rows != f.n || state.cols != 1)
    throw malformed_input("state shape does not match the carrier");
  return is_bijection_graph(compose(f.mult, kron(state, identity_rel(f.n))));
}

// A state the comultiplication copies (and the counit accepts).
inline bool is_copyable_state(const RelFrobenius& f, const Rel& state) {
  if (state.rows != f.n || state.cols != 1)
    throw malformed_input("state shape does not match the carrier");
  return compose(f.comult, state) == kron(state, state) &&
         compose(f.counit, state) == scalar_true();
}

// All phase states, by exhausting subsets of the carrier.
inline std::vector<Rel> phase_states(const RelFrobenius& f,
                                     long long bound = kDefaultEnumerationBound) {
  if (f.n >= 63 || (1ULL << f.n) > static_cast<unsigned long long>(bound))
    throw resource_error("subset enumeration exceeds the bound");
  std::vector<Rel> found;
  for (unsigned long long mask = 0; mask < (1ULL << f.n); ++mask) {
    Rel state{f.n, 1, {}};
    for (std::size_t i = 0; i < f.n; ++i)
      if (mask >> i & 1) state.pairs.emplace_back(i, 0);
    if (is_phase_state(f, state)) found.push_back(std::move(state));
  }
  return found;
}

inline std::vector<Rel> copyable_states(const RelFrobenius& f,
                                        long long bound = kDefaultEnumerationBound) {
  if (f.n >= 63 || (1ULL << f.n) > static_cast<unsigned long long>(bound))
    throw resource_error("subset enumeration exceeds the bound");
  std::vector<Rel> found;
  for (unsigned long long mask = 0; mask < (1ULL << f.n); ++mask) {
    Rel state{f.n, 1, {}};
    for (std::size_t i = 0; i < f.n; ++i)
      if (mask >> i & 1) state.pairs.emplace_back(i, 0);
    if (is_copyable_state(f, state)) found.push_back(std::move(state));
  }
  return found;
}

struct RelLocalityVerdict {
  long long phase_group_order = 0;     // |G|^|H| sections
  long long classical_subgroup = 0;    // |G| constant sections
  abgroup::ExtensionVerdict verdict;   // diagonal inside the section group
  bool local = false;                  // true: classical part is a summand
};

// The locality question for this model, answered exactly: the section
// group G^H with its diagonal subgroup is always a trivial extension
// (evaluate-at-a-slice is a retraction), so no carrier supports an
// argument of the D-level kind.
inline RelLocalityVerdict frel_locality_check(
    const RelCarrier& c, long long bound = kDefaultEnumerationBound) {
  abgroup::validate(c.g);
  abgroup::validate(c.h);
  const std::size_t sh = detail::group_size(c.h);
  const std::size_t kg = c.g.factors.size();

  abgroup::FinAbGroup sections{{}};
  for (std::size_t slot = 0; slot < sh; ++slot)
    for (long long d : c.g.factors) sections.factors.push_back(d);

  abgroup::Subgroup diagonal{sections, {}};
  for (std::size_t k = 0; k < kg; ++k) {
    abgroup::Element gen(sections.factors.size(), 0);
    for (std::size_t slot = 0; slot < sh; ++slot)
      gen[slot * kg + k] = 1 % c.g.factors[k];
    diagonal.generators.push_back(std::move(gen));
  }

  RelLocalityVerdict out;
  out.verdict = abgroup::is_trivial_extension(sections, diagonal, bound);
  out.local = out.verdict.trivial;
  double pg = 1;
  for (long long d : sections.factors) pg *= static_cast<double>(d);
  out.phase_group_order = static_cast<long long>(pg);
  double cg = 1;
  for (long long d : c.g.factors) cg *= static_cast<double>(d);
  out.classical_subgroup = static_cast<long long>(cg);
  return out;
}

}  // namespace mermin::frel
