#include <functional>
#include <random>

#include "doctest.h"
#include "finsheaf/zlinalg.hpp"

using namespace finsheaf;

namespace {

// Determinantal divisors: d_k = gcd of all k x k minors; invariant factors are d_k / d_{k-1}.
std::vector<Integer> oracle_invariants(const IntMatrix& m) {
  std::size_t r = m.rows(), c = m.cols();
  std::vector<Integer> dk{1};
  for (std::size_t k = 1; k <= std::min(r, c); ++k) {
    Integer g = 0;
    std::vector<std::size_t> rs(k), cs(k);
    // iterate over k-subsets of rows and columns
    std::function<void(std::size_t, std::size_t)> rows_rec, cols_rec;
    cols_rec = [&](std::size_t i, std::size_t from) {
      if (i == k) {
        IntMatrix sub(k, k);
        for (std::size_t a = 0; a < k; ++a)
          for (std::size_t b = 0; b < k; ++b) sub(a, b) = m(rs[a], cs[b]);
        Integer d = determinant(sub);
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), d.get_mpz_t());
        return;
      }
      for (std::size_t j = from; j < c; ++j) {
        cs[i] = j;
        cols_rec(i + 1, j + 1);
      }
    };
    rows_rec = [&](std::size_t i, std::size_t from) {
      if (i == k) return cols_rec(0, 0);
      for (std::size_t j = from; j < r; ++j) {
        rs[i] = j;
        rows_rec(i + 1, j + 1);
      }
    };
    rows_rec(0, 0);
    if (g == 0) break;
    dk.push_back(g);
  }
  std::vector<Integer> out;
  for (std::size_t k = 1; k < dk.size(); ++k) out.push_back(dk[k] / dk[k - 1]);
  return out;
}

IntMatrix random_matrix(std::mt19937_64& rng, std::size_t r, std::size_t c, int spread) {
  std::uniform_int_distribution<int> d(-spread, spread);
  IntMatrix m(r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = d(rng);
  return m;
}

FreeComplexZ two_term(long a) {
  FreeComplexZ c(0, {1, 1});
  c.set_differential(0, SparseIntMatrix::from_dense(IntMatrix{{a}}));
  return c;
}

}  // namespace

TEST_CASE("smith form of small matrices") {
  auto s = smith_normal_form(IntMatrix::identity(2));
  CHECK(s.S == IntMatrix::identity(2));
  CHECK(s.U == IntMatrix::identity(2));
  CHECK(s.V == IntMatrix::identity(2));

  auto z = smith_normal_form(IntMatrix(2, 3));
  CHECK(z.S.is_zero());
  CHECK(z.rank == 0);

  IntMatrix m{{2, 4}, {6, 8}};
  auto f = smith_normal_form(m);
  CHECK(f.S == IntMatrix{{2, 0}, {0, 4}});
  CHECK(f.U * m * f.V == f.S);
}

TEST_CASE("smith form transforms are exact and unimodular on random input") {
  std::mt19937_64 rng(7);
  for (int t = 0; t < 60; ++t) {
    std::size_t r = 1 + rng() % 5, c = 1 + rng() % 5;
    IntMatrix m = random_matrix(rng, r, c, t % 3 == 0 ? 1 : 9);
    auto s = smith_normal_form(m);
    CHECK(s.U * m * s.V == s.S);
    CHECK(s.S.is_diagonal());
    CHECK(abs(determinant(s.U)) == 1);
    CHECK(abs(determinant(s.V)) == 1);
    CHECK(s.U * s.Uinv == IntMatrix::identity(r));
    CHECK(s.V * s.Vinv == IntMatrix::identity(c));
    for (std::size_t i = 0; i + 1 < s.rank; ++i) CHECK(s.S(i + 1, i + 1) % s.S(i, i) == 0);
    CHECK(invariant_factors(m) == oracle_invariants(m));
    CHECK(invariant_factors(SparseIntMatrix::from_dense(m)) == oracle_invariants(m));
  }
}

TEST_CASE("sparse elimination matches dense invariants on larger sparse input") {
  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    std::size_t r = 20 + rng() % 20, c = 20 + rng() % 20;
    IntMatrix m(r, c);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t j = 0; j < c; ++j)
        if (rng() % 6 == 0) m(i, j) = static_cast<long>(rng() % 7) - 3;
    auto s = smith_normal_form(m);
    std::vector<Integer> dense;
    for (std::size_t i = 0; i < s.rank; ++i) dense.push_back(s.S(i, i));
    CHECK(invariant_factors(SparseIntMatrix::from_dense(m)) == dense);
  }
}

TEST_CASE("large entries fall back to exact arithmetic") {
  Integer big("123456789012345678901234567890");
  IntMatrix m(2, 2);
  m(0, 0) = big;
  m(0, 1) = big * 2;
  m(1, 0) = 3;
  m(1, 1) = 5;
  CHECK(invariant_factors(SparseIntMatrix::from_dense(m)) == oracle_invariants(m));
}

TEST_CASE("solve_with finds integral solutions exactly when they exist") {
  IntMatrix m{{2, 0}, {0, 3}};
  auto s = smith_normal_form(m);
  auto ok = solve_with(s, {4, 9});
  REQUIRE(ok);
  CHECK(*ok == std::vector<Integer>{2, 3});
  CHECK_FALSE(solve_with(s, {1, 0}));
}

TEST_CASE("kernel and column span bases") {
  IntMatrix m{{1, 2, 3}, {2, 4, 6}};
  IntMatrix k = kernel_basis(m);
  CHECK(k.cols() == 2);
  CHECK((m * k).is_zero());
  CHECK(column_span_basis(m).cols() == 1);
}

TEST_CASE("homology of two-term complexes") {
  auto h0 = homology_of(two_term(0));
  CHECK(h0 == GradedGroups{{0, FgGroup(1)}, {1, FgGroup(1)}});
  auto h2 = homology_of(two_term(2));
  CHECK(h2 == GradedGroups{{1, FgGroup(0, {2})}});
}

TEST_CASE("homology of a 4-cycle graph") {
  // vertices v0..v3, edges e_i = v_i -> v_{i+1}; cochain degree -1 holds edges
  IntMatrix boundary(4, 4);
  for (int i = 0; i < 4; ++i) {
    boundary(i, i) = -1;
    boundary((i + 1) % 4, i) = 1;
  }
  FreeComplexZ c(-1, {4, 4});
  c.set_differential(-1, SparseIntMatrix::from_dense(boundary));
  auto h = homology_of(c);
  // oracle: rank of the boundary and its invariant factors
  auto inv = oracle_invariants(boundary);
  CHECK(inv.size() == 3);
  for (const auto& d : inv) CHECK(d == 1);
  CHECK(h == GradedGroups{{-1, FgGroup(1)}, {0, FgGroup(1)}});
}

TEST_CASE("homology rejects non-complexes") {
  FreeComplexZ c(0, {1, 1, 1});
  c.set_differential(0, SparseIntMatrix::from_dense(IntMatrix{{1}}));
  c.set_differential(1, SparseIntMatrix::from_dense(IntMatrix{{1}}));
  CHECK_THROWS_AS(homology_of(c), PreconditionError);
}

TEST_CASE("group duals and isomorphism") {
  auto d = fg_group_dual(FgGroup(2, {3}));
  CHECK(d.hom == FgGroup(2));
  CHECK(d.ext1 == FgGroup(0, {3}));
  auto z = fg_group_dual(FgGroup());
  CHECK(z.hom.is_zero());
  CHECK(z.ext1.is_zero());
  CHECK(groups_iso(FgGroup(1), FgGroup(1)));
  CHECK_FALSE(groups_iso(FgGroup(0, {2, 4}), FgGroup(0, {8})));
  CHECK_FALSE(groups_iso(FgGroup(0, {2, 2}), FgGroup(0, {4})));
  CHECK(FgGroup::from_cyclic({2, 3}) == FgGroup(0, {6}));
  CHECK(FgGroup::from_cyclic({0, 1, 4, 6}) == FgGroup(1, {2, 12}));
}

TEST_CASE("tensor and tor of cyclic groups") {
  CHECK(tensor(FgGroup(0, {4}), FgGroup(0, {6})) == FgGroup(0, {2}));
  CHECK(tor(FgGroup(0, {4}), FgGroup(0, {6})) == FgGroup(0, {2}));
  CHECK(tensor(FgGroup(1), FgGroup(0, {3})) == FgGroup(0, {3}));
  CHECK(tor(FgGroup(1), FgGroup(0, {3})).is_zero());
}

TEST_CASE("derived dual of multiplication by two") {
  auto c = two_term(2);
  auto h = homology_of(derived_dual(c));
  // H^1(C) = Z/2 lands as Ext^1 in degree 0 of the dual
  CHECK(h == GradedGroups{{0, FgGroup(0, {2})}});
  CHECK(h == dual_graded(homology_of(c)));
}

TEST_CASE("universal coefficients and Euler characteristic on random complexes") {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 40; ++t) {
    // d1 o d0 = 0 by construction: the columns of d0 lie in the kernel of d1
    std::size_t n0 = 1 + rng() % 4, n1 = 2 + rng() % 4, n2 = 1 + rng() % 4;
    IntMatrix d1 = random_matrix(rng, n2, n1, 3);
    IntMatrix k = kernel_basis(d1);
    IntMatrix coeff = random_matrix(rng, k.cols(), n0, 3);
    IntMatrix d0 = k.cols() ? k * coeff : IntMatrix(n1, n0);
    FreeComplexZ c(-1, {n0, n1, n2});
    c.set_differential(-1, SparseIntMatrix::from_dense(d0));
    c.set_differential(0, SparseIntMatrix::from_dense(d1));
    auto h = homology_of(c);
    auto hd = homology_of(derived_dual(c));
    for (int i = -3; i <= 3; ++i) {
      CHECK(hd.at(-i).rank() == h.at(i).rank());
      CHECK(hd.at(-i + 1).torsion() == h.at(i).torsion());
    }
    CHECK(h.euler_characteristic() == c.euler_characteristic());
  }
}

TEST_CASE("Kunneth tensor of graded groups") {
  GradedGroups a{{0, FgGroup(1)}, {1, FgGroup(0, {2})}};
  GradedGroups b{{0, FgGroup(0, {2})}};
  auto t = derived_tensor(a, b);
  CHECK(t.at(0) == FgGroup(0, {2, 2}));
  CHECK(t.at(1) == FgGroup(0, {2}));
}

TEST_CASE("shifted reindexes degrees") {
  GradedGroups g{{0, FgGroup(1)}};
  CHECK(g.shifted(1).at(-1) == FgGroup(1));
  CHECK(g.shifted(-2).at(2) == FgGroup(1));
}

TEST_CASE("presented cohomology coordinates") {
  // Z --(2,0)--> Z^2 --0--> 0 : H = Z/2 + Z
  IntMatrix din{{2}, {0}};
  IntMatrix dout(0, 2);
  auto pc = present_cohomology(din, dout, 2);
  CHECK(pc.group == FgGroup(1, {2}));
  REQUIRE(pc.generators.size() == 2);
  auto c = pc.coordinates({3, 5});
  REQUIRE(c.size() == 2);
  CHECK(c[0] == 1);
  CHECK(abs(c[1]) == 5);
}
