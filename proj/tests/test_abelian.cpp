#include "doctest.h"

#include <random>
#include <set>

#include "ainfty/abelian.hpp"
#include "oracles.hpp"

using namespace ainfty;
using namespace ainfty::oracle;

TEST_CASE("smith: worked examples") {
  SmithDecomposition id = smith(IntMatrix::identity(3));
  CHECK(id.S == IntMatrix::identity(3));
  CHECK(id.U == IntMatrix::identity(3));
  CHECK(id.V == IntMatrix::identity(3));

  IntMatrix d(2, 2, {2, 0, 0, 3});
  SmithDecomposition s = smith(d);
  CHECK(s.S == IntMatrix(2, 2, {1, 0, 0, 6}));
  CHECK(s.U * d * s.V == s.S);

  SmithDecomposition z = smith(IntMatrix(2, 2));
  CHECK(z.S.is_zero());
  CHECK(z.rank == 0);
}

TEST_CASE("smith: random matrices against determinantal divisors") {
  std::mt19937 rng(20241);
  for (int trial = 0; trial < 300; ++trial) {
    std::size_t rows = 1 + rng() % 5;
    std::size_t cols = 1 + rng() % 5;
    IntMatrix a = random_matrix(rng, rows, cols, 5);
    SmithDecomposition s = smith(a);
    CAPTURE(trial);
    CHECK(s.U * a * s.V == s.S);
    CHECK(s.U * s.U_inverse == IntMatrix::identity(rows));
    CHECK(s.V * s.V_inverse == IntMatrix::identity(cols));
    Int du = determinant(s.U);
    Int dv = determinant(s.V);
    CHECK((du == 1 || du == -1));
    CHECK((dv == 1 || dv == -1));
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) {
        if (i != j) CHECK(s.S(i, j) == 0);
      }
    }
    std::vector<Int> diag = s.diagonal();
    for (std::size_t i = 0; i + 1 < diag.size(); ++i) {
      CHECK(diag[i] >= 0);
      if (diag[i] != 0) CHECK(diag[i + 1] % diag[i] == 0);
      else CHECK(diag[i + 1] == 0);
    }
    CHECK(diag == determinantal_invariants(a));
  }
}

TEST_CASE("smith: dense 24x24 stays small") {
  std::mt19937 rng(77);
  IntMatrix a = random_matrix(rng, 24, 24, 9);
  SmithDecomposition s = smith(a);
  CHECK(s.U * a * s.V == s.S);
  CHECK(s.U * s.U_inverse == IntMatrix::identity(24));
  CHECK(s.V * s.V_inverse == IntMatrix::identity(24));
  Int product = 1;
  for (const Int& d : s.diagonal()) product *= d;
  Int det = determinant(a);
  CHECK(product == (det < 0 ? Int(-det) : det));
  std::size_t bits = 0;
  for (std::size_t i = 0; i < 24; ++i) {
    for (std::size_t j = 0; j < 24; ++j) bits = std::max<std::size_t>(bits, msb(abs(s.U(i, j)) + 1));
  }
  CHECK(bits < 400);
}

TEST_CASE("solve: worked examples") {
  GroupHom twice_z(FpGroup::free(1), FpGroup::free(1), IntMatrix(1, 1, {2}));
  CHECK_FALSE(solve(twice_z, Vec{1}).has_value());

  FpGroup z4 = FpGroup::cyclic(4);
  GroupHom twice_z4(z4, z4, IntMatrix(1, 1, {2}));
  auto x = solve(twice_z4, Vec{2});
  REQUIRE(x.has_value());
  CHECK(*x == Vec{1});

  FpGroup g({2, 0, 6});
  GroupHom id = GroupHom::identity(g);
  CHECK(*solve(id, Vec{1, -7, 4}) == Vec{1, -7, 4});
}

TEST_CASE("kernel and image: worked examples") {
  GroupHom inc(FpGroup::cyclic(2), FpGroup::cyclic(4), IntMatrix(1, 1, {2}));
  CHECK(kernel(inc).group.is_trivial());

  FpGroup g({2, 3, 0});
  Subgroup all = kernel(GroupHom::zero(g, FpGroup::cyclic(5)));
  CHECK(all.group.isomorphic_to(g));

  FpGroup z2z2({2, 2});
  GroupHom d2(z2z2, FpGroup::cyclic(4), IntMatrix(1, 2, {0, 2}));
  ImageResult im = image(d2);
  CHECK(im.group == FpGroup::cyclic(2));
  CHECK(im.inclusion(Vec{1}) == Vec{2});
  CHECK(im.inclusion.after(im.corestriction) == d2);
}

TEST_CASE("quotient: worked examples") {
  Quotient q1 = quotient(FpGroup::free(1), {Vec{2}});
  CHECK(q1.group == FpGroup::cyclic(2));
  Quotient q2 = quotient(FpGroup::cyclic(4), {Vec{2}});
  CHECK(q2.group == FpGroup::cyclic(2));
  FpGroup g({3, 0});
  Quotient q3 = quotient(g, {});
  CHECK(q3.group.isomorphic_to(g));
  for (const Vec& c : q2.group.elements()) {
    CHECK(q2.projection(q2.section(c)) == c);
  }
}

TEST_CASE("hom_group: worked examples") {
  HomGroup h = hom_group(FpGroup::cyclic(2), FpGroup::cyclic(4));
  CHECK(h.group == FpGroup::cyclic(2));
  CHECK(h.hom(Vec{1})(Vec{1}) == Vec{2});
  CHECK(hom_group(FpGroup::free(1), FpGroup::free(1)).group == FpGroup::free(1));
  CHECK(hom_group(FpGroup::cyclic(2), FpGroup::free(1)).group.is_trivial());
}

TEST_CASE("homology: worked examples") {
  FpGroup z2 = FpGroup::cyclic(2);
  Homology h(GroupHom::zero(z2, z2), GroupHom::zero(z2, z2));
  CHECK(h.group() == z2);

  // complex M: Z -> 0 -> Z2+Z2 -> Z4 -> Z2, b -> 2c, c -> x
  FpGroup zero;
  FpGroup m2({2, 2});
  FpGroup m3 = FpGroup::cyclic(4);
  FpGroup m4 = FpGroup::cyclic(2);
  GroupHom d2(m2, m3, IntMatrix(1, 2, {0, 2}));
  GroupHom d3(m3, m4, IntMatrix(1, 1, {1}));
  Homology h0(GroupHom::zero(zero, FpGroup::free(1)), GroupHom::zero(FpGroup::free(1), zero));
  Homology h2(GroupHom::zero(zero, m2), d2);
  Homology h3(d2, d3);
  Homology h4(d3, GroupHom::zero(m4, zero));
  CHECK(h0.group() == FpGroup::free(1));
  CHECK(h2.group() == z2);
  CHECK(h2.representative(Vec{1}) == Vec{1, 0});
  CHECK(h3.group().is_trivial());
  CHECK(h4.group().is_trivial());

  GroupHom surj(FpGroup::free(1), z2, IntMatrix(1, 1, {1}));
  CHECK(Homology(surj, GroupHom::zero(z2, FpGroup::cyclic(3))).group().is_trivial());

  CHECK_THROWS(Homology(surj, GroupHom::identity(z2)));
}

TEST_CASE("solve and homology agree with enumeration") {
  std::mt19937 rng(777);
  for (int trial = 0; trial < 200; ++trial) {
    CAPTURE(trial);
    FpGroup a = random_finite_group(rng, 16);
    FpGroup b = random_finite_group(rng, 16);
    GroupHom h = random_hom(rng, a, b);
    for (const Vec& y : enumerate(b)) {
      auto x = solve(h, y);
      bool exists = false;
      for (const Vec& s : enumerate(a)) {
        if (b.equal(h(s), y)) {
          exists = true;
          break;
        }
      }
      CHECK(x.has_value() == exists);
      if (x) CHECK(b.equal(h(*x), y));
    }
  }
  for (int trial = 0; trial < 150; ++trial) {
    CAPTURE(trial);
    RandomComplex c = random_complex(rng, 64);
    Homology hom(c.f, c.g);
    CHECK(hom.group().invariant_factors() == brute_homology_invariants(c.f, c.g));
    for (const Vec& cls : enumerate(hom.group())) {
      Vec rep = hom.representative(cls);
      CHECK(c.g(rep) == c.g.target().zero());
      CHECK(*hom.class_of(rep) == cls);
    }
  }
}

TEST_CASE("hom_group cardinality matches enumeration") {
  std::mt19937 rng(99);
  for (int trial = 0; trial < 100; ++trial) {
    FpGroup a = random_finite_group(rng, 24);
    FpGroup b = random_finite_group(rng, 24);
    HomGroup h = hom_group(a, b);
    CHECK(h.group.cardinality() == count_homs(a, b));
    for (const Vec& c : enumerate(h.group)) {
      IntMatrix m = h.matrix(c);
      CHECK(*h.coordinates(m) == c);
    }
  }
}

TEST_CASE("present and lattice reduction") {
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + rng() % 5;
    std::size_t k = rng() % 6;
    IntMatrix rel = random_matrix(rng, k, n, 6);
    Lattice l(n);
    for (std::size_t i = 0; i < k; ++i) l.add(rel.row(i));
    Presentation p = present(l);
    std::vector<Int> expected = determinantal_invariants(rel.transpose());
    std::vector<Int> want;
    for (const Int& d : expected) {
      if (d != 1 && d != 0) want.push_back(d);
    }
    std::size_t rank = 0;
    for (const Int& d : expected) rank += (d != 0);
    for (std::size_t i = rank; i < n; ++i) want.push_back(0);
    CHECK(p.group.invariant_factors() == want);
    // to_group kills the lattice and inverts from_group
    for (std::size_t i = 0; i < k; ++i) CHECK(p.group.is_zero(p.to_group.apply(rel.row(i))));
    for (std::size_t g = 0; g < p.group.rank(); ++g) {
      CHECK(p.group.equal(p.to_group.apply(p.from_group.column(g)), p.group.generator(g)));
    }
    // reduce gives equal results on lattice-equivalent vectors
    Vec v(n);
    for (auto& x : v) x = static_cast<int>(rng() % 21) - 10;
    Vec w = v;
    for (std::size_t i = 0; i < k; ++i) {
      int c = static_cast<int>(rng() % 7) - 3;
      for (std::size_t j = 0; j < n; ++j) w[j] += c * rel(i, j);
    }
    CHECK(l.reduce(v) == l.reduce(w));
  }
}
