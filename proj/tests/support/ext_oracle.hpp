#pragma once

// Brute-force cross-check for extension triviality, deliberately independent
// of the Hermite/Smith implementation it validates: nothing here touches
// lattices — only element arithmetic, closure enumeration, and bitsets.
//
// The scanned space is every system of ≤ 2 equations in ≤ 3 unknowns with
// integer coefficients in [-exp(G), exp(G)] and right-hand sides in H.
// Feasibility reductions (each preserves the verdict over that exact space):
//   * n·x = (n mod exp(G))·x for every x, so coefficients scan [0, exp(G));
//   * smaller systems are the same scan with zero rows / zero columns;
//   * scaling a row by a unit mod exp(G) is an automorphism of G² fixing H²,
//     so rows are canonicalized to their least unit multiple; swapping the
//     two rows relabels equations, so row pairs are scanned ordered;
//   * for a fixed coefficient matrix, the set of right-hand sides solvable
//     over a domain D is exactly the image of the induced homomorphism
//     D^3 → G², a subgroup; enumerating it by closure checks every rhs of
//     the space at once. (A direct exhaustive-assignment image is provided
//     too and tested equal on small groups.)

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <numeric>
#include <vector>

#include "mermin/abgroup.hpp"
#include "mermin/errors.hpp"

namespace oracle {

using mermin::abgroup::Element;
using mermin::abgroup::FinAbGroup;

struct Tables {
  FinAbGroup g;
  int n = 0;                            // |G|
  long long exp = 1;                    // exp(G)
  std::vector<std::uint16_t> add;       // n×n index addition
  std::vector<std::uint16_t> mul;       // exp×n scalar multiples
  std::vector<Element> elems;           // index → element
};

inline Tables make_tables(const FinAbGroup& g) {
  Tables t;
  t.g = g;
  t.elems = mermin::abgroup::enumerate_elements(g, 4096);
  t.n = static_cast<int>(t.elems.size());
  if (t.n > 256) throw mermin::resource_error("oracle group too large");
  t.exp = mermin::abgroup::exponent(g);
  t.add.resize(static_cast<std::size_t>(t.n) * t.n);
  auto index_of = [&](const Element& e) {
    std::size_t idx = 0;
    for (std::size_t c = g.factors.size(); c-- > 0;)
      idx = idx * static_cast<std::size_t>(g.factors[c]) +
            static_cast<std::size_t>(e[c]);
    return static_cast<std::uint16_t>(idx);
  };
  for (int a = 0; a < t.n; ++a)
    for (int b = 0; b < t.n; ++b)
      t.add[static_cast<std::size_t>(a) * t.n + b] =
          index_of(mermin::abgroup::add(g, t.elems[a], t.elems[b]));
  t.mul.assign(static_cast<std::size_t>(t.exp) * t.n, 0);
  for (int e = 0; e < t.n; ++e)
    for (long long v = 1; v < t.exp; ++v)
      t.mul[v * t.n + e] = t.add[static_cast<std::size_t>(
                                     t.mul[(v - 1) * t.n + e]) *
                                     t.n +
                                 e];
  return t;
}

// Closure of {0} ∪ gens under addition, as element indices.
inline std::vector<int> closure(const Tables& t, std::vector<int> gens) {
  std::vector<char> in(t.n, 0);
  std::vector<int> list{0};
  in[0] = 1;
  for (int g : gens) {
    if (in[g]) continue;
    std::size_t base = list.size();
    for (int m = g; !in[m]; m = t.add[static_cast<std::size_t>(m) * t.n + g]) {
      in[m] = 1;
      for (std::size_t i = 0; i < base; ++i) {
        int e = t.add[static_cast<std::size_t>(list[i]) * t.n + m];
        if (!in[e]) {
          in[e] = 1;
          list.push_back(e);
        }
      }
      list.push_back(m);
    }
  }
  std::sort(list.begin(), list.end());
  return list;
}

// Dense bitset over pair indices a·n + b.
struct PairSet {
  int n;
  std::vector<std::uint64_t> w;
  explicit PairSet(int n_) : n(n_), w((static_cast<std::size_t>(n_) * n_ + 63) / 64, 0) {}
  void clear() { std::fill(w.begin(), w.end(), 0); }
  void set(std::size_t i) { w[i >> 6] |= 1ULL << (i & 63); }
  bool test(std::size_t i) const { return (w[i >> 6] >> (i & 63)) & 1; }
};

// Closure of pair generators inside G×G, written into `s` (reused buffer).
inline void pair_closure(const Tables& t, const std::vector<std::size_t>& gens,
                         PairSet& s, std::vector<std::size_t>& list) {
  s.clear();
  list.assign(1, 0);
  s.set(0);
  const std::size_t n = static_cast<std::size_t>(t.n);
  auto padd = [&](std::size_t p, std::size_t q) {
    return static_cast<std::size_t>(
               t.add[(p / n) * n + q / n]) * n +
           t.add[(p % n) * n + q % n];
  };
  for (std::size_t g : gens) {
    if (s.test(g)) continue;
    std::size_t base = list.size();
    for (std::size_t m = g; !s.test(m); m = padd(m, g)) {
      s.set(m);
      for (std::size_t i = 0; i < base; ++i) {
        std::size_t e = padd(list[i], m);
        if (!s.test(e)) {
          s.set(e);
          list.push_back(e);
        }
      }
      list.push_back(m);
    }
  }
}

struct OracleWitness {
  std::vector<std::vector<long long>> coeffs;  // 2×3
  Element rhs0, rhs1;
};

struct OracleResult {
  bool trivial = true;
  OracleWitness witness;  // meaningful when !trivial
};

// Image of the map D^3 → G² induced by a 2×3 coefficient matrix, by direct
// exhaustive assignment over domain element indices. Test-of-the-test hook.
inline std::vector<std::size_t> direct_image(const Tables& t,
                                             const std::vector<int>& domain,
                                             const long long r1[3],
                                             const long long r2[3]) {
  const std::size_t n = static_cast<std::size_t>(t.n);
  auto mulv = [&](long long v, int e) {
    long long m = v % t.exp;
    if (m < 0) m += t.exp;
    return static_cast<std::size_t>(m == 0 ? 0 : t.mul[m * t.n + e]);
  };
  std::vector<char> seen(n * n, 0);
  std::vector<std::size_t> img;
  for (int x1 : domain)
    for (int x2 : domain)
      for (int x3 : domain) {
        std::size_t a = t.add[t.add[mulv(r1[0], x1) * n + mulv(r1[1], x2)] * n +
                              mulv(r1[2], x3)];
        std::size_t b = t.add[t.add[mulv(r2[0], x1) * n + mulv(r2[1], x2)] * n +
                              mulv(r2[2], x3)];
        if (!seen[a * n + b]) {
          seen[a * n + b] = 1;
          img.push_back(a * n + b);
        }
      }
  std::sort(img.begin(), img.end());
  return img;
}

inline OracleResult check_extension(const FinAbGroup& g,
                                    const std::vector<Element>& h_gens) {
  Tables t = make_tables(g);
  const std::size_t n = static_cast<std::size_t>(t.n);
  const long long k = t.exp;

  // H as an index set / bitset, plus H×H.
  std::vector<int> hgen_idx;
  for (const auto& e : h_gens) {
    std::size_t idx = 0;
    for (std::size_t c = g.factors.size(); c-- > 0;)
      idx = idx * static_cast<std::size_t>(g.factors[c]) +
            static_cast<std::size_t>(e[c]);
    hgen_idx.push_back(static_cast<int>(idx));
  }
  std::vector<int> h_elems = closure(t, hgen_idx);
  PairSet h2(t.n);
  for (int a : h_elems)
    for (int b : h_elems) h2.set(static_cast<std::size_t>(a) * n + b);

  // Coefficient rows over [0, k)^3, canonical under unit scaling.
  std::vector<long long> units;
  for (long long u = 1; u < k; ++u)
    if (std::gcd(u, k) == 1) units.push_back(u);
  if (units.empty()) units.push_back(0);  // k == 1: only the zero row exists
  std::vector<std::array<long long, 3>> rows;
  for (long long a = 0; a < k; ++a)
    for (long long b = 0; b < k; ++b)
      for (long long c = 0; c < k; ++c) {
        std::array<long long, 3> r{a, b, c}, best = r;
        for (long long u : units) {
          std::array<long long, 3> s{u * a % k, u * b % k, u * c % k};
          if (s < best) best = s;
        }
        if (r == best) rows.push_back(r);
      }
  if (rows.empty()) rows.push_back({0, 0, 0});

  const std::size_t nfac = g.factors.size();
  PairSet img_g(t.n), img_h(t.n);
  std::vector<std::size_t> scratch;
  std::vector<std::size_t> gens;
  auto mulv = [&](long long v, int e) {
    return static_cast<std::size_t>(v == 0 ? 0 : t.mul[v * t.n + e]);
  };
  // Element indices of the standard generators e_c.
  std::vector<int> basis_idx(nfac);
  for (std::size_t c = 0; c < nfac; ++c) {
    Element e(nfac, 0);
    if (g.factors[c] > 1) e[c] = 1;
    std::size_t idx = 0;
    for (std::size_t cc = nfac; cc-- > 0;)
      idx = idx * static_cast<std::size_t>(g.factors[cc]) +
            static_cast<std::size_t>(e[cc]);
    basis_idx[c] = static_cast<int>(idx);
  }

  for (std::size_t i1 = 0; i1 < rows.size(); ++i1)
    for (std::size_t i2 = i1; i2 < rows.size(); ++i2) {
      const auto& r1 = rows[i1];
      const auto& r2 = rows[i2];
      // Image over G: generated by images of (e_c at unknown j).
      gens.clear();
      for (int j = 0; j < 3; ++j)
        for (std::size_t c = 0; c < nfac; ++c)
          gens.push_back(mulv(r1[j], basis_idx[c]) * n +
                         mulv(r2[j], basis_idx[c]));
      pair_closure(t, gens, img_g, scratch);
      // Image over H: generated by images of (h at unknown j).
      gens.clear();
      for (int j = 0; j < 3; ++j)
        for (int hidx : hgen_idx)
          gens.push_back(mulv(r1[j], hidx) * n + mulv(r2[j], hidx));
      pair_closure(t, gens, img_h, scratch);
      // Witness rhs: in the G-image, entries in H, not in the H-image.
      for (std::size_t w = 0; w < img_g.w.size(); ++w) {
        std::uint64_t hit = img_g.w[w] & h2.w[w] & ~img_h.w[w];
        if (hit) {
          std::size_t bit = w * 64 + static_cast<std::size_t>(
                                         std::countr_zero(hit));
          OracleResult res;
          res.trivial = false;
          res.witness.coeffs = {{r1[0], r1[1], r1[2]}, {r2[0], r2[1], r2[2]}};
          res.witness.rhs0 = t.elems[bit / n];
          res.witness.rhs1 = t.elems[bit % n];
          return res;
        }
      }
    }
  return {};
}

}  // namespace oracle
