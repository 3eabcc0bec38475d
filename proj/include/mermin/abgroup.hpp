#pragma once

// Finite abelian groups presented as products of cyclic factors, subgroups
// given by generators, and exact decision procedures for integer-linear
// equation systems over them. The central operation decides whether a
// subgroup inclusion H ≤ G admits a system of equations
//
//     Σ_j n^p_j · x_j = h^p        (h^p ∈ H, finitely many equations)
//
// solvable with x_j ∈ G but unsolvable with x_j ∈ H. Diagonalizing the
// coefficient matrix (Smith form) turns any such system into independent
// single-unknown equations s·x = h, and s·G depends only on gcd(s, exp G),
// so the decision reduces to: the inclusion admits such a system iff some
// divisor d of exp(G) has H ∩ dG ≠ dH. Witnesses are therefore always
// minimized to a single equation d·x = h.

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mermin/errors.hpp"
#include "mermin/zlinalg.hpp"

namespace mermin::abgroup {

using zlinalg::Int;
using zlinalg::Mat;

// ── Groups and elements ──────────────────────────────────────────────────

struct FinAbGroup {
  std::vector<long long> factors;  // cyclic orders, each ≥ 1
};

using Element = std::vector<long long>;

inline void validate(const FinAbGroup& g) {
  if (g.factors.empty()) throw malformed_input("group needs ≥ 1 factor");
  for (long long d : g.factors)
    if (d < 1) throw malformed_input("cyclic factor must be ≥ 1");
}

inline std::size_t arity(const FinAbGroup& g) { return g.factors.size(); }

inline Int order(const FinAbGroup& g) {
  Int n = 1;
  for (long long d : g.factors) n *= d;
  return n;
}

inline long long exponent(const FinAbGroup& g) {
  Int l = 1;
  for (long long d : g.factors) l = boost::multiprecision::lcm(l, Int(d));
  if (l > 1'000'000'000) throw resource_error("group exponent too large");
  return static_cast<long long>(l);
}

inline Element zero(const FinAbGroup& g) { return Element(arity(g), 0); }

inline Element reduce(const FinAbGroup& g, Element e) {
  if (e.size() != arity(g)) throw malformed_input("element arity mismatch");
  for (std::size_t c = 0; c < e.size(); ++c) {
    e[c] %= g.factors[c];
    if (e[c] < 0) e[c] += g.factors[c];
  }
  return e;
}

inline Element add(const FinAbGroup& g, const Element& a, const Element& b) {
  Element r(arity(g));
  for (std::size_t c = 0; c < r.size(); ++c)
    r[c] = (a[c] + b[c]) % g.factors[c];
  return r;
}

inline Element neg(const FinAbGroup& g, const Element& a) {
  Element r(arity(g));
  for (std::size_t c = 0; c < r.size(); ++c)
    r[c] = (g.factors[c] - a[c]) % g.factors[c];
  return r;
}

inline Element scale(const FinAbGroup& g, long long n, const Element& a) {
  Element r(arity(g));
  for (std::size_t c = 0; c < r.size(); ++c) {
    long long m = n % g.factors[c];
    if (m < 0) m += g.factors[c];
    r[c] = (m * a[c]) % g.factors[c];
  }
  return r;
}

inline std::vector<Element> enumerate_elements(
    const FinAbGroup& g, long long bound = kDefaultEnumerationBound) {
  validate(g);
  if (order(g) > bound) throw resource_error("group too large to enumerate");
  std::vector<Element> all;
  Element e = zero(g);
  while (true) {
    all.push_back(e);
    std::size_t c = 0;
    while (c < arity(g) && ++e[c] == g.factors[c]) e[c++] = 0;
    if (c == arity(g)) break;
  }
  return all;
}

// Direct product: factor lists concatenated.
inline FinAbGroup product_group(const FinAbGroup& a, const FinAbGroup& b) {
  FinAbGroup p = a;
  p.factors.insert(p.factors.end(), b.factors.begin(), b.factors.end());
  return p;
}

// Projection onto a subset of factors (the quotient by the complementary
// block of a direct-product decomposition).
inline FinAbGroup factor_group(const FinAbGroup& g,
                               const std::vector<std::size_t>& idx) {
  FinAbGroup f;
  for (std::size_t i : idx) {
    if (i >= arity(g)) throw malformed_input("factor index out of range");
    f.factors.push_back(g.factors[i]);
  }
  validate(f);
  return f;
}

inline Element project(const FinAbGroup& g, const std::vector<std::size_t>& idx,
                       const Element& e) {
  if (e.size() != arity(g)) throw malformed_input("element arity mismatch");
  Element r;
  for (std::size_t i : idx) r.push_back(e[i]);
  return r;
}

// Invariant factors d_1 | d_2 | ... of the group (trailing 1-factors
// dropped unless the group is trivial).
inline std::vector<long long> invariant_factors(const FinAbGroup& g) {
  validate(g);
  Mat d(arity(g), std::vector<Int>(arity(g), 0));
  for (std::size_t c = 0; c < arity(g); ++c) d[c][c] = g.factors[c];
  auto f = zlinalg::snf(std::move(d));
  std::vector<long long> inv;
  for (std::size_t c = 0; c < arity(g); ++c) {
    long long v = static_cast<long long>(f.s[c][c]);
    if (v != 1) inv.push_back(v);
  }
  if (inv.empty()) inv.push_back(1);
  return inv;
}

// ── Subgroups via generators ─────────────────────────────────────────────
//
// A subgroup is handled through its preimage lattice in Z^k: the rows of
// the generator matrix together with diag(factors). The canonical Hermite
// basis of that lattice is a complete subgroup invariant.

struct Subgroup {
  FinAbGroup ambient;
  std::vector<Element> generators;
};

inline void validate(const Subgroup& s) {
  validate(s.ambient);
  for (const auto& g : s.generators) {
    if (g.size() != arity(s.ambient))
      throw malformed_input("generator arity mismatch");
    for (std::size_t c = 0; c < g.size(); ++c)
      if (g[c] < 0 || g[c] >= s.ambient.factors[c])
        throw malformed_input("generator coordinate out of range");
  }
}

namespace detail {

inline Mat modulus_rows(const FinAbGroup& g) {
  Mat d(arity(g), std::vector<Int>(arity(g), 0));
  for (std::size_t c = 0; c < arity(g); ++c) d[c][c] = g.factors[c];
  return d;
}

// Canonical lattice basis for the subgroup generated by `gens`, each
// optionally scaled by `mult`.
inline Mat scaled_subgroup_lattice(const Subgroup& s, long long mult) {
  Mat rows = modulus_rows(s.ambient);
  for (const auto& gen : s.generators) {
    std::vector<Int> r(arity(s.ambient));
    for (std::size_t c = 0; c < r.size(); ++c) r[c] = Int(mult) * gen[c];
    rows.push_back(std::move(r));
  }
  return zlinalg::hnf_rows(std::move(rows));
}

inline std::vector<Int> to_int_row(const Element& e) {
  return std::vector<Int>(e.begin(), e.end());
}

}  // namespace detail

inline Mat subgroup_lattice(const Subgroup& s) {
  validate(s);
  return detail::scaled_subgroup_lattice(s, 1);
}

inline bool lattice_contains(const Mat& lattice, const Element& e) {
  return zlinalg::lattice_member(lattice, detail::to_int_row(e));
}

inline bool contains(const Subgroup& s, const Element& e) {
  return lattice_contains(subgroup_lattice(s), reduce(s.ambient, e));
}

inline Int subgroup_order(const FinAbGroup& g, const Mat& lattice) {
  return order(g) / zlinalg::lattice_index(lattice);
}

// All elements of the subgroup described by a lattice basis, sorted
// lexicographically. Closure over the basis rows reduced mod the factors.
inline std::vector<Element> enumerate_subgroup(
    const FinAbGroup& g, const Mat& lattice,
    long long bound = kDefaultEnumerationBound) {
  if (subgroup_order(g, lattice) > bound)
    throw resource_error("subgroup too large to enumerate");
  std::set<Element> seen{zero(g)};
  std::vector<Element> frontier{zero(g)};
  std::vector<Element> gens;
  for (const auto& row : lattice) {
    Element e(arity(g));
    for (std::size_t c = 0; c < e.size(); ++c)
      e[c] = static_cast<long long>(row[c] % g.factors[c]);
    gens.push_back(reduce(g, std::move(e)));
  }
  while (!frontier.empty()) {
    Element cur = frontier.back();
    frontier.pop_back();
    for (const auto& gen : gens) {
      Element nxt = add(g, cur, gen);
      if (seen.insert(nxt).second) frontier.push_back(nxt);
    }
  }
  return {seen.begin(), seen.end()};
}

inline std::vector<Element> enumerate_subgroup(
    const Subgroup& s, long long bound = kDefaultEnumerationBound) {
  return enumerate_subgroup(s.ambient, subgroup_lattice(s), bound);
}

// ── Equation systems ─────────────────────────────────────────────────────

struct EqSystem {
  std::vector<std::vector<long long>> coeffs;  // equations × unknowns
  std::vector<Element> rhs;                    // one group element each
};

inline void validate(const FinAbGroup& g, const EqSystem& sys) {
  if (sys.coeffs.size() != sys.rhs.size())
    throw malformed_input("equation count mismatch between coeffs and rhs");
  std::size_t l = sys.coeffs.empty() ? 0 : sys.coeffs[0].size();
  for (const auto& row : sys.coeffs)
    if (row.size() != l) throw malformed_input("ragged coefficient matrix");
  for (const auto& h : sys.rhs)
    if (h.size() != arity(g)) throw malformed_input("rhs arity mismatch");
}

// Integer-combination contradiction extracted from an unsolvable system:
// multiplying congruence (equation e, coordinate c) by multipliers[e][c]
// and summing gives Σ_j m_j x_j ≡ r (mod modulus) with every m_j ≡ 0 and
// r ≢ 0. modulus == 0 encodes a strict integer contradiction 0 = r ≠ 0.
struct Certificate {
  std::vector<std::vector<Int>> multipliers;  // [equation][coordinate]
  Int modulus = 0;
  Int combined_rhs = 0;
};

struct SolutionSet {
  bool solvable = false;
  std::vector<Element> assignment;  // one value per unknown when solvable
  Int count = 0;                    // exact number of solutions in domain
  std::optional<Certificate> certificate;  // present when unsolvable
};

namespace detail {

// Lattice {w ∈ Z^m : B·w ∈ diag(factors)·Z^k} for a k×m generator matrix:
// the relations among the domain generators.
inline Mat relation_lattice(const FinAbGroup& g, const Mat& bgen) {
  const std::size_t k = arity(g), m = zlinalg::cols(bgen);
  Mat sys(k, std::vector<Int>(m + k, 0));
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t j = 0; j < m; ++j) sys[c][j] = bgen[c][j];
    sys[c][m + c] = g.factors[c];
  }
  Mat rows;
  for (const auto& z : zlinalg::kernel_columns(sys))
    rows.push_back(std::vector<Int>(z.begin(), z.begin() + m));
  return zlinalg::hnf_rows(std::move(rows));
}

}  // namespace detail

// Solve the system with every unknown ranging over `domain` (the whole
// group when absent). Exact: witness assignment, solution count, and an
// unsolvability certificate all come from one Smith decomposition of the
// lifted integer system.
inline SolutionSet solve_system(const FinAbGroup& g, const EqSystem& sys,
                                const std::optional<Subgroup>& domain = {}) {
  validate(g);
  validate(g, sys);
  if (domain) {
    validate(*domain);
    if (domain->ambient.factors != g.factors)
      throw malformed_input("domain subgroup lives in a different group");
  }
  const std::size_t k = arity(g);
  const std::size_t p = sys.coeffs.size();
  const std::size_t l = p == 0 ? 0 : sys.coeffs[0].size();

  // Generator matrix of the domain, columns = generators (identity for G).
  Mat bgen(k, std::vector<Int>(0));
  if (domain) {
    for (std::size_t c = 0; c < k; ++c)
      bgen[c].resize(domain->generators.size());
    for (std::size_t j = 0; j < domain->generators.size(); ++j)
      for (std::size_t c = 0; c < k; ++c)
        bgen[c][j] = domain->generators[j][c];
  } else {
    bgen = zlinalg::identity(k);
  }
  const std::size_t m = zlinalg::cols(bgen);

  Mat lambda = detail::relation_lattice(g, bgen);
  Int domain_order = zlinalg::lattice_index(lambda);

  SolutionSet out;
  if (p == 0 || l == 0) {
    // No unknowns: solvable iff every rhs is zero (after reduction).
    out.solvable = true;
    for (const auto& h : sys.rhs)
      for (long long c : reduce(g, h))
        if (c != 0) out.solvable = false;
    if (out.solvable) {
      Int cnt = 1;
      for (std::size_t j = 0; j < l; ++j) cnt *= domain_order;
      out.count = cnt;
      out.assignment.assign(l, zero(g));
    } else {
      out.certificate = Certificate{};  // 0 = nonzero, no multipliers needed
    }
    return out;
  }

  // Lifted integer system over unknowns (t ∈ Z^{l·m}, slack z ∈ Z^{p·k}):
  //   Σ_j n_ej · B · t_j + diag(d) · z_e = rhs_e   for each equation e.
  const std::size_t nrows = p * k, ncols = l * m + p * k;
  Mat a(nrows, std::vector<Int>(ncols, 0));
  std::vector<Int> b(nrows);
  for (std::size_t e = 0; e < p; ++e)
    for (std::size_t c = 0; c < k; ++c) {
      const std::size_t r = e * k + c;
      for (std::size_t j = 0; j < l; ++j)
        for (std::size_t s = 0; s < m; ++s)
          a[r][j * m + s] = Int(sys.coeffs[e][j]) * bgen[c][s];
      a[r][l * m + e * k + c] = g.factors[c];
      b[r] = reduce(g, sys.rhs[e])[c];
    }

  zlinalg::SnfResult f = zlinalg::snf(a);
  std::vector<Int> cvec = zlinalg::mul_col(f.u, b);
  std::vector<Int> w(ncols, 0);
  std::optional<std::size_t> bad;
  for (std::size_t i = 0; i < nrows && !bad; ++i) {
    Int d = (i < ncols) ? f.s[i][i] : Int(0);
    if (d != 0) {
      if (cvec[i] % d != 0) bad = i;
      else w[i] = cvec[i] / d;
    } else if (cvec[i] != 0) {
      bad = i;
    }
  }

  if (bad) {
    Certificate cert;
    cert.multipliers.assign(p, std::vector<Int>(k));
    for (std::size_t e = 0; e < p; ++e)
      for (std::size_t c = 0; c < k; ++c)
        cert.multipliers[e][c] = f.u[*bad][e * k + c];
    cert.modulus = (*bad < ncols) ? f.s[*bad][*bad] : Int(0);
    cert.combined_rhs = cvec[*bad];
    if (cert.modulus != 0) {
      cert.combined_rhs %= cert.modulus;
      if (cert.combined_rhs < 0) cert.combined_rhs += cert.modulus;
      for (auto& row : cert.multipliers)
        for (auto& mlt : row) {
          mlt %= cert.modulus;
          if (mlt < 0) mlt += cert.modulus;
        }
    }
    out.solvable = false;
    out.count = 0;
    out.certificate = std::move(cert);
    return out;
  }

  std::vector<Int> t = zlinalg::mul_col(f.v, w);
  out.solvable = true;
  for (std::size_t j = 0; j < l; ++j) {
    Element x(k, 0);
    for (std::size_t c = 0; c < k; ++c) {
      Int acc = 0;
      for (std::size_t s = 0; s < m; ++s) acc += bgen[c][s] * t[j * m + s];
      acc %= g.factors[c];
      if (acc < 0) acc += g.factors[c];
      x[c] = static_cast<long long>(acc);
    }
    out.assignment.push_back(std::move(x));
  }

  // Count: distinct domain assignments = |domain|^l divided by the index of
  // (kernel projection onto t + per-unknown relation lattice) in Z^{l·m}.
  Mat kt;
  for (const auto& z : zlinalg::kernel_columns(a))
    kt.push_back(std::vector<Int>(z.begin(), z.begin() + l * m));
  Mat block;
  for (std::size_t j = 0; j < l; ++j)
    for (const auto& row : lambda) {
      std::vector<Int> r(l * m, 0);
      for (std::size_t s = 0; s < m; ++s) r[j * m + s] = row[s];
      block.push_back(std::move(r));
    }
  Mat span = zlinalg::lattice_sum(kt, block);
  Int denom = zlinalg::lattice_index(span);
  Int numer = 1;
  for (std::size_t j = 0; j < l; ++j) numer *= domain_order;
  out.count = numer / denom;
  return out;
}

// ── Extension triviality ─────────────────────────────────────────────────

struct ExtensionVerdict {
  bool trivial = true;
  long long divisor = 0;  // witness equation divisor·x = target when non-trivial
  Element target;         // element of (H ∩ dG) \ dH
  Element solution;       // one x ∈ G with divisor·x = target
  EqSystem witness;       // the same witness as a single-equation system
  std::vector<long long> checked_divisors;  // ascending, ending at the witness
};

namespace detail {

inline std::vector<long long> divisors(long long n) {
  std::vector<long long> ds;
  for (long long d = 1; d * d <= n; ++d)
    if (n % d == 0) {
      ds.push_back(d);
      if (d != n / d) ds.push_back(n / d);
    }
  std::sort(ds.begin(), ds.end());
  return ds;
}

// Solve d·x ≡ t (mod factors) coordinatewise; t must lie in d·G.
inline Element divide_in_group(const FinAbGroup& g, long long d,
                               const Element& t) {
  Element x(arity(g), 0);
  for (std::size_t c = 0; c < arity(g); ++c) {
    const long long mod = g.factors[c];
    long long gc = std::gcd(d, mod);
    if (t[c] % gc != 0) throw domain_error("element not divisible in group");
    if (mod == 1) continue;
    long long dm = (d / gc) % (mod / gc), rm = (t[c] / gc) % (mod / gc);
    // Inverse of dm modulo mod/gc via extended Euclid.
    long long a = dm, b = mod / gc, x0 = 1, x1 = 0;
    while (b != 0) {
      long long q = a / b;
      std::swap(a -= q * b, b);
      std::swap(x0 -= q * x1, x1);
    }
    x[c] = ((rm * x0) % (mod / gc) + (mod / gc)) % (mod / gc);
  }
  return x;
}

}  // namespace detail

// Decide whether G is a non-trivial extension of H (some equation system
// with rhs in H is solvable in G but not in H). The witness, when present,
// is canonical: smallest divisor d of exp(G), then lexicographically
// smallest target element of (H ∩ dG) \ dH.
inline ExtensionVerdict is_trivial_extension(
    const FinAbGroup& g, const Subgroup& h,
    long long bound = kDefaultEnumerationBound) {
  validate(g);
  validate(h);
  if (h.ambient.factors != g.factors)
    throw malformed_input("subgroup lives in a different group");
  const std::size_t k = arity(g);

  Mat lat_h = subgroup_lattice(h);
  std::vector<long long> checked;
  for (long long d : detail::divisors(exponent(g))) {
    checked.push_back(d);
    Mat lat_dg(k, std::vector<Int>(k, 0));
    for (std::size_t c = 0; c < k; ++c)
      lat_dg[c][c] = std::gcd(d, g.factors[c]);
    Mat lat_dh = detail::scaled_subgroup_lattice(h, d);
    Mat meet = zlinalg::lattice_intersect(lat_h, lat_dg);
    if (meet == lat_dh) continue;

    ExtensionVerdict v;
    v.trivial = false;
    v.divisor = d;
    for (const auto& e : enumerate_subgroup(g, meet, bound)) {
      if (!lattice_contains(lat_dh, e)) {
        v.target = e;
        break;
      }
    }
    v.solution = detail::divide_in_group(g, d, v.target);
    v.witness.coeffs = {{d}};
    v.witness.rhs = {v.target};
    v.checked_divisors = std::move(checked);
    return v;
  }
  ExtensionVerdict v;
  v.checked_divisors = std::move(checked);
  return v;
}

// Sufficient condition for triviality: a homomorphism G → H fixing H
// pointwise. `phi` is checked to be total with image inside H (error
// otherwise), then verified to be a homomorphism that fixes H.
inline bool retraction_implies_trivial(
    const FinAbGroup& g, const Subgroup& h,
    const std::function<Element(const Element&)>& phi,
    long long bound = kDefaultEnumerationBound) {
  validate(g);
  validate(h);
  if (h.ambient.factors != g.factors)
    throw malformed_input("subgroup lives in a different group");
  Mat lat_h = subgroup_lattice(h);
  auto elements = enumerate_elements(g, bound);
  std::vector<Element> images;
  images.reserve(elements.size());
  for (const auto& e : elements) {
    Element img = reduce(g, phi(e));
    if (!lattice_contains(lat_h, img))
      throw domain_error("retraction image leaves the subgroup");
    images.push_back(std::move(img));
  }
  // phi(x + e_c) = phi(x) + phi(e_c) for every x and every basis shift e_c
  // suffices for additivity (induction over coordinates).
  auto index_of = [&](const Element& e) {
    std::size_t idx = 0;
    for (std::size_t c = arity(g); c-- > 0;)
      idx = idx * static_cast<std::size_t>(g.factors[c]) +
            static_cast<std::size_t>(e[c]);
    return idx;
  };
  for (std::size_t c = 0; c < arity(g); ++c) {
    if (g.factors[c] == 1) continue;
    Element shift = zero(g);
    shift[c] = 1;
    const Element& phi_shift = images[index_of(shift)];
    for (std::size_t i = 0; i < elements.size(); ++i) {
      Element lhs = images[index_of(add(g, elements[i], shift))];
      Element rhs = add(g, images[i], phi_shift);
      if (lhs != rhs) return false;
    }
  }
  for (const auto& e : enumerate_subgroup(g, lat_h, bound))
    if (images[index_of(e)] != e) return false;
  return true;
}

}  // namespace mermin::abgroup
