#include "doctest.h"

#include <random>

#include "ainfty/graded.hpp"
#include "oracles.hpp"

using namespace ainfty;
using namespace ainfty::oracle;

namespace {

// d_{k+1} is forced to kill im d_k by factoring through the cokernel.
Complex random_cochain_complex(std::mt19937& rng, int top) {
  Complex c(top);
  for (int k = 0; k <= top; ++k) c.set_group(k, random_finite_group(rng, 12));
  for (int k = 0; k < top; ++k) {
    const FpGroup& src = c.group(k);
    if (k == 0) {
      c.set_differential(k, random_hom(rng, src, c.group(k + 1)));
      continue;
    }
    std::vector<Vec> cols;
    const GroupHom& prev = c.differential(k - 1);
    for (std::size_t j = 0; j < prev.source().rank(); ++j) cols.push_back(prev.matrix().column(j));
    Quotient q = quotient(src, cols);
    GroupHom tail = random_hom(rng, q.group, c.group(k + 1));
    c.set_differential(k, tail.after(q.projection));
  }
  return c;
}

MultiMap random_map(std::mt19937& rng, SpacePtr x, SpacePtr y, int m, int n, int shift) {
  DenseHomComplex hc(x, y, m, n);
  const FpGroup& g = hc.group(shift);
  Vec coords(g.rank());
  for (std::size_t i = 0; i < g.rank(); ++i) {
    coords[i] = static_cast<int>(rng() % 5);
  }
  return hc.to_map(shift, g.reduce(coords));
}

Complex m_complex() {
  // Z (deg 0), a,b in Z2+Z2 (deg 2), c in Z4 (deg 3), x in Z2 (deg 4)
  Complex c(6);
  c.set_group(0, FpGroup({0}, {"1"}));
  c.set_group(2, FpGroup({2, 2}, {"a", "b"}));
  c.set_group(3, FpGroup({4}, {"c"}));
  c.set_group(4, FpGroup({2}, {"x"}));
  c.set_differential(2, GroupHom(c.group(2), c.group(3), IntMatrix(1, 2, {0, 2})));
  c.set_differential(3, GroupHom(c.group(3), c.group(4), IntMatrix(1, 1, {1})));
  return c;
}

}  // namespace

TEST_CASE("complex M has homology Z, 0, Z2, 0") {
  Complex m = m_complex();
  CHECK(m.check_d_squared().empty());
  CHECK(m.homology(0).group() == FpGroup::free(1));
  CHECK(m.homology(1).group().is_trivial());
  CHECK(m.homology(2).group() == FpGroup::cyclic(2));
  CHECK(m.homology(3).group().is_trivial());
  CHECK(m.homology(4).group().is_trivial());
}

TEST_CASE("tensor powers: basis, orders, first power") {
  auto m = std::make_shared<Space>(m_complex());
  const TensorPower& p1 = m->power(1);
  for (int k = 0; k <= 4; ++k) CHECK(p1.group(k) == m->base().group(k));
  const TensorPower& p2 = m->power(2);
  // degree 4: 1|x, a|a, a|b, b|a, b|b, x|1
  CHECK(p2.basis(4).size() == 6);
  CHECK(p2.group(5).orders() == std::vector<Int>{2, 2, 2, 2});  // a|c, b|c, c|a, c|b
  CHECK(p2.label(p2.basis(5)[0]) == "a|c");
}

TEST_CASE("random complexes: tensor d^2 = 0, nabla^2 = 0, Leibniz") {
  std::mt19937 rng(4242);
  for (int trial = 0; trial < 25; ++trial) {
    CAPTURE(trial);
    Complex c = random_cochain_complex(rng, 4);
    REQUIRE(c.check_d_squared().empty());
    auto x = std::make_shared<Space>(c);
    for (int n = 1; n <= 2; ++n) {
      const TensorPower& p = x->power(n);
      for (int k = 0; k + 2 <= p.max_degree(); ++k) {
        for (std::size_t i = 0; i < p.basis(k).size(); ++i) {
          Vec e = p.group(k).generator(i);
          Vec dd = p.differential_apply(k + 1, p.differential_apply(k, e));
          CHECK(p.group(k + 2).is_zero(dd));
        }
      }
    }
    for (int shift = -2; shift <= 1; ++shift) {
      MultiMap f = random_map(rng, x, x, 1, 2, shift);
      MultiMap nnf = nabla(nabla(f));
      for (int k : nnf.degrees()) {
        if (nnf.interior(k)) CHECK(nnf.is_zero_at(k));
      }
      MultiMap h = random_map(rng, x, x, 1, 1, shift);
      MultiMap outer = random_map(rng, x, x, 1, 2, 1 - shift);
      MultiMap lhs = nabla(compose(outer, h));
      MultiMap rhs = compose(nabla(outer), h) +
                     compose(outer, nabla(h)).scaled(Int(koszul_sign(outer.shift())));
      CHECK(lhs.equal_interior(rhs));
    }
  }
}

TEST_CASE("dense Hom complex: nabla squared vanishes on interior shifts") {
  std::mt19937 rng(17);
  for (int trial = 0; trial < 10; ++trial) {
    auto x = std::make_shared<Space>(random_cochain_complex(rng, 4));
    DenseHomComplex hc(x, x, 1, 1);
    for (int s = -2; s <= 0; ++s) {
      GroupHom twice = hc.nabla(s + 1).after(hc.nabla(s));
      // only columns whose blocks stay inside the window are meaningful
      for (std::size_t j = 0; j < twice.source().rank(); ++j) {
        MultiMap f = hc.to_map(s, twice.source().generator(j));
        MultiMap nnf = nabla(nabla(f));
        for (int k : nnf.degrees()) {
          if (nnf.interior(k)) CHECK(nnf.is_zero_at(k));
        }
      }
    }
  }
}

TEST_CASE("g tilde is a chain map and sigma behaves") {
  std::mt19937 rng(8);
  Complex base(10);
  base.set_group(2, FpGroup({2, 0}, {"p", "q"}));
  base.set_group(3, FpGroup({4}, {"r"}));
  auto h = std::make_shared<Space>(base);
  MultiMap g = MultiMap::identity(h, 1).scaled(Int(3));
  for (int trial = 0; trial < 5; ++trial) {
    MultiMap u = random_map(rng, h, h, 2, 1, -1);
    CHECK(nabla(g_tilde(g, u)).equal_interior(g_tilde(g, nabla(u))));
  }
  CHECK(sigma(h, 1, 1) == MultiMap::identity(h, 1));
  // sigma_{2,2} swaps the middle factors; r|r has odd degrees
  MultiMap s22 = sigma(h, 2, 2);
  TensorIndex e{{2, 0}, {3, 0}, {3, 0}, {2, 1}};
  TensorIndex swapped{{2, 0}, {3, 0}, {3, 0}, {2, 1}};
  const TensorPower& p4 = h->power(4);
  Vec v = s22.value(e);
  CHECK(v[*p4.index_of(swapped)] == 1);  // gcd order 2: sign -1 = 1
  TensorIndex e2{{2, 1}, {3, 0}, {2, 1}, {3, 0}};
  TensorIndex sw2{{2, 1}, {2, 1}, {3, 0}, {3, 0}};
  Vec v2 = s22.value(e2);
  CHECK(v2[*p4.index_of(sw2)] == 1);  // even past odd: no sign
  TensorIndex e3{{2, 1}, {3, 0}, {3, 0}, {2, 1}};
  CHECK(s22.value(e3)[*p4.index_of(e3)] == 3);  // r past r: -1 mod 4
}

TEST_CASE("slice and dense Hom homology agree") {
  std::mt19937 rng(23);
  for (int trial = 0; trial < 10; ++trial) {
    Complex hb(5);
    for (int k = 1; k <= 2; ++k) hb.set_group(k, random_finite_group(rng, 6));
    auto h = std::make_shared<Space>(hb);
    auto y = std::make_shared<Space>(random_cochain_complex(rng, 5));
    DenseHomComplex dense(h, y, 1, 1);
    for (int s = -1; s <= 1; ++s) {
      HomHomology sliced(h, y, 1, 1, s);
      REQUIRE(sliced.skipped_degrees().empty());
      Homology full = dense.homology(s);
      CHECK(full.group().invariant_factors() == sliced.group().invariant_factors());
    }
  }
}
