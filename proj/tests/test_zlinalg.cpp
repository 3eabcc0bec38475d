#include <catch_amalgamated.hpp>

#include <random>

#include "mermin/zlinalg.hpp"

using namespace mermin::zlinalg;

namespace {

Mat m(std::initializer_list<std::initializer_list<long long>> rows) {
  Mat a;
  for (auto& r : rows) a.emplace_back(r.begin(), r.end());
  return a;
}

Int det2(const Mat& a) {
  return a[0][0] * a[1][1] - a[0][1] * a[1][0];
}

}  // namespace

TEST_CASE("hermite form is the canonical echelon basis") {
  CHECK(hnf_rows(m({{1, 1}, {2, 0}, {0, 2}})) == m({{1, 1}, {0, 2}}));
  CHECK(hnf_rows(m({{2, 0}, {0, 2}})) == m({{2, 0}, {0, 2}}));
  // Same lattice, different generators → same basis.
  CHECK(hnf_rows(m({{3, 1}, {1, 3}})) == hnf_rows(m({{4, 4}, {1, 3}})));
  // Negative generators normalize to positive pivots.
  CHECK(hnf_rows(m({{-2, 0}, {0, -3}})) == m({{2, 0}, {0, 3}}));
  // Rank-deficient input drops zero rows.
  CHECK(hnf_rows(m({{2, 4}, {1, 2}, {3, 6}})) == m({{1, 2}}));
}

TEST_CASE("lattice membership via back-substitution") {
  Mat basis = hnf_rows(m({{2, 1}, {0, 3}}));
  CHECK(lattice_member(basis, {2, 1}));
  CHECK(lattice_member(basis, {2, 4}));
  CHECK(lattice_member(basis, {0, 3}));
  CHECK(lattice_member(basis, {4, 2}));
  CHECK_FALSE(lattice_member(basis, {1, 0}));
  CHECK_FALSE(lattice_member(basis, {2, 2}));
  // Non-full-rank: second coordinate is pinned.
  Mat line = hnf_rows(m({{1, 2}}));
  CHECK(lattice_member(line, {3, 6}));
  CHECK_FALSE(lattice_member(line, {3, 5}));
}

TEST_CASE("smith form diagonalizes with a divisibility chain") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> entry(-9, 9);
  std::uniform_int_distribution<std::size_t> dim(1, 4);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t r = dim(rng), c = dim(rng);
    Mat a(r, std::vector<Int>(c));
    for (auto& row : a)
      for (auto& x : row) x = entry(rng);
    SnfResult f = snf(a);
    CHECK(f.s == mul(mul(f.u, a), f.v));
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (i != j) CHECK(f.s[i][j] == 0);
    for (std::size_t i = 0; i + 1 < std::min(r, c); ++i)
      if (f.s[i + 1][i + 1] != 0) {
        REQUIRE(f.s[i][i] != 0);
        CHECK(f.s[i + 1][i + 1] % f.s[i][i] == 0);
      }
  }
  // Unimodularity of the transforms (2×2 spot check).
  SnfResult f = snf(m({{4, 0}, {0, 6}}));
  CHECK(abs(det2(f.u)) == 1);
  CHECK(abs(det2(f.v)) == 1);
  CHECK(f.s == m({{2, 0}, {0, 12}}));
}

TEST_CASE("integer solve finds a particular solution or proves none") {
  auto s = solve_columns(m({{3, 6}}), {9});
  REQUIRE(s.has_value());
  CHECK((*s)[0] * 3 + (*s)[1] * 6 == 9);
  CHECK_FALSE(solve_columns(m({{2}}), {3}).has_value());
  CHECK_FALSE(solve_columns(m({{2, 4}, {1, 2}}), {0, 1}).has_value());
}

TEST_CASE("kernel columns span the integer null space") {
  auto ker = kernel_columns(m({{1, 2}}));
  REQUIRE(ker.size() == 1);
  CHECK(ker[0][0] * 1 + ker[0][1] * 2 == 0);
  CHECK((abs(ker[0][0]) == 2 && abs(ker[0][1]) == 1));
  CHECK(kernel_columns(m({{1, 0}, {0, 1}})).empty());
}

TEST_CASE("lattice intersection") {
  Mat a = hnf_rows(m({{2, 0}, {0, 1}}));
  Mat b = hnf_rows(m({{1, 0}, {0, 3}}));
  CHECK(lattice_intersect(a, b) == m({{2, 0}, {0, 3}}));
  // Intersection with a sublattice is the sublattice.
  Mat c = hnf_rows(m({{4, 0}, {0, 2}}));
  CHECK(lattice_intersect(a, c) == c);
}

TEST_CASE("lattice index is the pivot product") {
  CHECK(lattice_index(hnf_rows(m({{2, 1}, {0, 3}}))) == 6);
  CHECK_THROWS_AS(lattice_index(m({{1, 2}})), mermin::domain_error);
}
