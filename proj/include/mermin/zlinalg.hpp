#pragma once

// Exact integer linear algebra on small dense matrices: Hermite and Smith
// normal forms, kernels, and lattice arithmetic. Everything runs over
// arbitrary-precision integers so no overflow analysis is needed anywhere
// in the callers. Lattices are spanned by the ROWS of a basis matrix.

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <vector>

#include "mermin/errors.hpp"

namespace mermin::zlinalg {

using Int = boost::multiprecision::cpp_int;
using Mat = std::vector<std::vector<Int>>;

inline std::size_t rows(const Mat& a) { return a.size(); }
inline std::size_t cols(const Mat& a) { return a.empty() ? 0 : a[0].size(); }

inline void check_rectangular(const Mat& a) {
  for (const auto& r : a)
    if (r.size() != cols(a)) throw malformed_input("ragged matrix");
}

inline Mat identity(std::size_t n) {
  Mat e(n, std::vector<Int>(n, 0));
  for (std::size_t i = 0; i < n; ++i) e[i][i] = 1;
  return e;
}

inline Mat transpose(const Mat& a) {
  Mat t(cols(a), std::vector<Int>(rows(a)));
  for (std::size_t i = 0; i < rows(a); ++i)
    for (std::size_t j = 0; j < cols(a); ++j) t[j][i] = a[i][j];
  return t;
}

inline Mat mul(const Mat& a, const Mat& b) {
  if (cols(a) != rows(b)) throw malformed_input("matrix product shape");
  Mat c(rows(a), std::vector<Int>(cols(b), 0));
  for (std::size_t i = 0; i < rows(a); ++i)
    for (std::size_t k = 0; k < cols(a); ++k) {
      if (a[i][k] == 0) continue;
      for (std::size_t j = 0; j < cols(b); ++j) c[i][j] += a[i][k] * b[k][j];
    }
  return c;
}

// Matrix acting on a column vector: A z.
inline std::vector<Int> mul_col(const Mat& a, const std::vector<Int>& z) {
  if (cols(a) != z.size()) throw malformed_input("matrix-vector shape");
  std::vector<Int> r(rows(a), 0);
  for (std::size_t i = 0; i < rows(a); ++i)
    for (std::size_t j = 0; j < cols(a); ++j) r[i] += a[i][j] * z[j];
  return r;
}

inline Int floor_div(const Int& a, const Int& b) {
  Int q = a / b;  // truncated
  if (q * b != a && ((a < 0) != (b < 0))) --q;
  return q;
}

// ── Hermite normal form (row style) ──────────────────────────────────────
//
// Canonical echelon basis of the row lattice: pivots positive, entries above
// each pivot reduced into [0, pivot), zero rows dropped. Unique for a given
// lattice, so equality of the returned matrices is equality of lattices.

inline Mat hnf_rows(Mat h) {
  check_rectangular(h);
  const std::size_t m = rows(h), n = cols(h);
  std::size_t rank = 0;
  for (std::size_t col = 0; col < n && rank < m; ++col) {
    // Euclidean reduction: shrink column entries below `rank` until one
    // nonzero entry remains, then use it as the pivot.
    while (true) {
      std::size_t best = m;
      for (std::size_t r = rank; r < m; ++r)
        if (h[r][col] != 0 &&
            (best == m || abs(h[r][col]) < abs(h[best][col])))
          best = r;
      if (best == m) break;  // column is zero below rank
      bool others = false;
      for (std::size_t r = rank; r < m; ++r) {
        if (r == best || h[r][col] == 0) continue;
        Int q = h[r][col] / h[best][col];
        for (std::size_t j = 0; j < n; ++j) h[r][j] -= q * h[best][j];
        if (h[r][col] != 0) others = true;
      }
      if (!others) {
        std::swap(h[rank], h[best]);
        break;
      }
    }
    if (h[rank][col] == 0) continue;
    if (h[rank][col] < 0)
      for (std::size_t j = 0; j < n; ++j) h[rank][j] = -h[rank][j];
    for (std::size_t r = 0; r < rank; ++r) {
      Int q = floor_div(h[r][col], h[rank][col]);
      if (q == 0) continue;
      for (std::size_t j = 0; j < n; ++j) h[r][j] -= q * h[rank][j];
    }
    ++rank;
  }
  h.resize(rank, std::vector<Int>(n, 0));
  return h;
}

// Membership of a row vector in the row lattice spanned by a canonical
// (hnf_rows) basis.
inline bool lattice_member(const Mat& basis, std::vector<Int> v) {
  if (!basis.empty() && cols(basis) != v.size())
    throw malformed_input("lattice member shape");
  std::size_t r = 0;
  for (std::size_t col = 0; col < v.size(); ++col) {
    if (r < rows(basis) && basis[r][col] != 0) {
      if (v[col] % basis[r][col] != 0) return false;
      Int q = v[col] / basis[r][col];
      for (std::size_t j = col; j < v.size(); ++j) v[j] -= q * basis[r][j];
      ++r;
    } else if (v[col] != 0) {
      return false;
    }
  }
  return true;
}

// Index [Z^n : L] for a full-rank lattice given by a canonical basis.
inline Int lattice_index(const Mat& basis) {
  if (rows(basis) != cols(basis))
    throw domain_error("lattice is not full rank");
  Int d = 1;
  for (std::size_t i = 0; i < rows(basis); ++i) d *= basis[i][i];
  return d;
}

inline Mat lattice_sum(const Mat& a, const Mat& b) {
  Mat all = a;
  all.insert(all.end(), b.begin(), b.end());
  return hnf_rows(std::move(all));
}

// ── Smith normal form ────────────────────────────────────────────────────

struct SnfResult {
  Mat s;             // diagonal with s[0][0] | s[1][1] | ...
  Mat u, v;          // unimodular, s = u * a * v
  std::size_t rank;  // number of nonzero diagonal entries
};

inline SnfResult snf(Mat a) {
  check_rectangular(a);
  const std::size_t m = rows(a), n = cols(a);
  Mat u = identity(m), v = identity(n);
  auto row_sub = [&](std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t j = 0; j < n; ++j) a[dst][j] -= q * a[src][j];
    for (std::size_t j = 0; j < m; ++j) u[dst][j] -= q * u[src][j];
  };
  auto col_sub = [&](std::size_t dst, std::size_t src, const Int& q) {
    for (std::size_t i = 0; i < m; ++i) a[i][dst] -= q * a[i][src];
    for (std::size_t i = 0; i < n; ++i) v[i][dst] -= q * v[i][src];
  };

  std::size_t t = 0;
  for (; t < m && t < n; ++t) {
    bool restart = true;
    while (restart) {
      restart = false;
      // Move the absolutely smallest nonzero entry of the trailing block
      // to the (t, t) position.
      std::size_t bi = m, bj = n;
      for (std::size_t i = t; i < m; ++i)
        for (std::size_t j = t; j < n; ++j)
          if (a[i][j] != 0 &&
              (bi == m || abs(a[i][j]) < abs(a[bi][bj]))) {
            bi = i;
            bj = j;
          }
      if (bi == m) goto done;  // trailing block is zero
      std::swap(a[t], a[bi]);
      std::swap(u[t], u[bi]);
      for (std::size_t i = 0; i < m; ++i) std::swap(a[i][t], a[i][bj]);
      for (std::size_t i = 0; i < n; ++i) std::swap(v[i][t], v[i][bj]);

      // Clear row and column t; remainders restart the search.
      for (std::size_t i = t + 1; i < m; ++i) {
        if (a[i][t] == 0) continue;
        row_sub(i, t, a[i][t] / a[t][t]);
        if (a[i][t] != 0) restart = true;
      }
      for (std::size_t j = t + 1; j < n; ++j) {
        if (a[t][j] == 0) continue;
        col_sub(j, t, a[t][j] / a[t][t]);
        if (a[t][j] != 0) restart = true;
      }
      if (restart) continue;

      // Divisibility chain: pivot must divide the whole trailing block.
      for (std::size_t i = t + 1; i < m && !restart; ++i)
        for (std::size_t j = t + 1; j < n && !restart; ++j)
          if (a[i][j] % a[t][t] != 0) {
            // Add row i to row t so the offending entry joins row t.
            row_sub(t, i, Int(-1));
            restart = true;
          }
    }
    if (a[t][t] < 0) {
      for (std::size_t j = 0; j < n; ++j) a[t][j] = -a[t][j];
      for (std::size_t j = 0; j < m; ++j) u[t][j] = -u[t][j];
    }
  }
done:;
  std::size_t rank = 0;
  for (std::size_t i = 0; i < m && i < n; ++i)
    if (a[i][i] != 0) ++rank;
  return {std::move(a), std::move(u), std::move(v), rank};
}

// Solve A z = b over the integers (column convention). Returns one solution.
inline std::optional<std::vector<Int>> solve_columns(const Mat& a,
                                                     const std::vector<Int>& b) {
  if (rows(a) != b.size()) throw malformed_input("solve shape");
  const std::size_t n = cols(a);
  SnfResult f = snf(a);
  std::vector<Int> c = mul_col(f.u, b);
  std::vector<Int> w(n, 0);
  for (std::size_t i = 0; i < rows(f.s); ++i) {
    Int d = (i < n) ? f.s[i][i] : Int(0);
    if (d != 0) {
      if (c[i] % d != 0) return std::nullopt;
      w[i] = c[i] / d;
    } else if (c[i] != 0) {
      return std::nullopt;
    }
  }
  return mul_col(f.v, w);
}

// Basis (as columns) of the integer kernel {z : A z = 0}.
inline std::vector<std::vector<Int>> kernel_columns(const Mat& a) {
  const std::size_t n = cols(a);
  SnfResult f = snf(a);
  std::vector<std::vector<Int>> basis;
  for (std::size_t j = f.rank; j < n; ++j) {
    std::vector<Int> col(n);
    for (std::size_t i = 0; i < n; ++i) col[i] = f.v[i][j];
    basis.push_back(std::move(col));
  }
  return basis;
}

// Intersection of two row lattices inside Z^n.
inline Mat lattice_intersect(const Mat& a, const Mat& b) {
  const std::size_t n = a.empty() ? cols(b) : cols(a);
  if (!a.empty() && !b.empty() && cols(a) != cols(b))
    throw malformed_input("lattice intersect shape");
  // x·A = y·B  ⇔  [Aᵀ | −Bᵀ] (x; y)ᵀ = 0; the x-part of each kernel vector
  // gives an intersection generator x·A.
  Mat m(n, std::vector<Int>(rows(a) + rows(b), 0));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t r = 0; r < rows(a); ++r) m[i][r] = a[r][i];
    for (std::size_t r = 0; r < rows(b); ++r) m[i][rows(a) + r] = -b[r][i];
  }
  Mat gens;
  for (const auto& z : kernel_columns(m)) {
    std::vector<Int> g(n, 0);
    for (std::size_t r = 0; r < rows(a); ++r)
      for (std::size_t j = 0; j < n; ++j) g[j] += z[r] * a[r][j];
    gens.push_back(std::move(g));
  }
  return hnf_rows(std::move(gens));
}

}  // namespace mermin::zlinalg
