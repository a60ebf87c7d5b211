#include "doctest.h"
#include "support.hpp"

#include "prism/witt.hpp"

using namespace prism;
using testing::Gen;

namespace {

template <class R>
WittVec<R> random_witt(std::shared_ptr<const R> ring, unsigned long p, unsigned m, Gen& g) {
  std::vector<typename R::Elem> c;
  for (unsigned i = 0; i < m; ++i) c.push_back(ring->from_int(Int(g.range(-6, 6))));
  return WittVec<R>(std::move(ring), p, std::move(c));
}

}  // namespace

TEST_SUITE("witt") {

TEST_CASE("(0,1)(0,1) = (0,2) in W_2(Z) at p = 2") {
  auto Z = std::make_shared<const IntegerRing>();
  WittVec<IntegerRing> a(Z, 2, {Int(0), Int(1)});
  WittVec<IntegerRing> c = witt_mul(a, a);
  CHECK(c[0] == 0);
  CHECK(c[1] == 2);
}

TEST_CASE("closed formulas for W_2 agree with the universal polynomials") {
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    auto vars = make_vars({"x0", "x1", "y0", "y1"});
    auto ring = std::make_shared<const PolyRing>(vars);
    auto v = [&](int i) { return IntPoly::variable(vars, i); };
    WittVec<PolyRing> a(ring, p, {v(0), v(1)}), b(ring, p, {v(2), v(3)});
    // Written out here from the ghost equations w_1 = x0^p + p x1.
    IntPoly s1 = v(1) + v(3) + exact_div(v(0).pow(p) + v(2).pow(p) - (v(0) + v(2)).pow(p), Int(p));
    IntPoly m1 = v(0).pow(p) * v(3) + v(2).pow(p) * v(1) + Int(p) * v(1) * v(3);
    WittVec<PolyRing> S = witt_add(a, b), P = witt_mul(a, b);
    CHECK(S[0] == v(0) + v(2));
    CHECK(S[1] == s1);
    CHECK(P[0] == v(0) * v(2));
    CHECK(P[1] == m1);
    W2Pair A{v(0), v(1)}, B{v(2), v(3)};
    CHECK(w2_add(A, B, p) == W2Pair{S[0], S[1]});
    CHECK(w2_mul(A, B, p) == W2Pair{P[0], P[1]});
  }
}

TEST_CASE("ghost map is a ring homomorphism") {
  Gen g(41);
  auto Z = std::make_shared<const IntegerRing>();
  for (unsigned long p : {2UL, 3UL}) {
    for (unsigned m = 1; m <= 4; ++m) {
      for (int trial = 0; trial < 4; ++trial) {
        auto a = random_witt(Z, p, m, g), b = random_witt(Z, p, m, g);
        auto ga = ghost(a), gb = ghost(b), gs = ghost(witt_add(a, b)), gm = ghost(witt_mul(a, b));
        for (unsigned i = 0; i < m; ++i) {
          CHECK(gs[i] == ga[i] + gb[i]);
          CHECK(gm[i] == ga[i] * gb[i]);
        }
      }
    }
  }
}

TEST_CASE("reduction mod p^N commutes with Witt operations") {
  Gen g(42);
  auto Z = std::make_shared<const IntegerRing>();
  auto Zn = std::make_shared<const ZmodRing>(3, 2);
  auto reduce = [&](const WittVec<IntegerRing>& a) {
    std::vector<Int> c;
    for (const auto& x : a.coords()) c.push_back(Zn->from_int(x));
    return WittVec<ZmodRing>(Zn, 3, c);
  };
  for (int trial = 0; trial < 10; ++trial) {
    auto a = random_witt(Z, 3, 3, g), b = random_witt(Z, 3, 3, g);
    CHECK(reduce(witt_add(a, b)) == witt_add(reduce(a), reduce(b)));
    CHECK(reduce(witt_mul(a, b)) == witt_mul(reduce(a), reduce(b)));
    CHECK(witt_sub(witt_add(a, b), b) == a);
  }
}

TEST_CASE("F V = p and Teichmuller lifts") {
  Gen g(43);
  auto Z = std::make_shared<const IntegerRing>();
  for (unsigned long p : {2UL, 3UL}) {
    for (unsigned m = 2; m <= 3; ++m) {
      auto a = random_witt(Z, p, m, g);
      CHECK(witt_F(witt_V(a)) == witt_scale(Int(p), witt_truncate(a, m - 1)));
    }
    auto F = std::make_shared<const GaloisField>(p * p);
    for (std::uint64_t i = 0; i < F->size(); ++i)
      for (std::uint64_t j = 0; j < F->size(); ++j) {
        auto x = F->element(i), y = F->element(j);
        CHECK(witt_mul(teichmuller(F, p, x, 3), teichmuller(F, p, y, 3)) == teichmuller(F, p, F->mul(x, y), 3));
      }
    for (std::uint64_t i = 0; i < F->size(); ++i) {
      auto x = F->element(i);
      CHECK(witt_F(teichmuller(F, p, x, 3)) == teichmuller(F, p, F->frobenius(x), 2));
      CHECK(F->frobenius(F->pth_root(x)) == x);
    }
  }
}

TEST_CASE("W_2(F_2[x]/(x^2)): every non-unit is killed by [x]") {
  // [a](b0, b1) = (a b0, a^p b1) in characteristic p, so [x] kills exactly the
  // vectors with b0 in (x).
  auto D = std::make_shared<const DualField>(2);
  const auto x = D->epsilon();
  auto tx = teichmuller(D, 2, x, 2);
  const auto zero = WittVec<DualField>::zero(D, 2, 2);
  CHECK(witt_mul(tx, tx) == zero);
  CHECK(witt_F_char_p(tx) == zero);
  std::size_t nonunits = 0, killed = 0;
  for (std::uint64_t a = 0; a < D->size(); ++a)
    for (std::uint64_t b = 0; b < D->size(); ++b) {
      WittVec<DualField> w(D, 2, {D->element(a), D->element(b)});
      WittVec<DualField> expect(D, 2, {D->mul(x, w[0]), D->mul(D->pow(x, 2), w[1])});
      CHECK(witt_mul(tx, w) == expect);
      CHECK(witt_mul(tx, witt_V(w)) == zero);
      if (!D->is_unit(w[0])) {
        ++nonunits;
        if (witt_mul(tx, w) == zero) ++killed;
      }
    }
  CHECK(nonunits == 8);
  CHECK(killed == 8);
  ZeroDivisorReport r = no_nonzerodivisor_witness(2, 2);
  CHECK(r.size == 16);
  CHECK(r.nonunits == nonunits);
  CHECK(r.units == 8);
  CHECK(r.every_nonunit_annihilated);
}

TEST_CASE("distinguished criterion over perfect fields") {
  for (unsigned long q : {2UL, 3UL, 4UL, 9UL}) {
    auto F = std::make_shared<const GaloisField>(q);
    const unsigned long p = F->p();
    for (std::uint64_t a = 0; a < F->size(); ++a)
      for (std::uint64_t b = 0; b < F->size(); ++b) {
        WittVec<GaloisField> d(F, p, {F->element(a), F->element(b)});
        CHECK(F->is_unit(teichmuller_p_coefficient(d)) == F->is_unit(witt_delta_perfect(d)[0]));
      }
  }
}

TEST_CASE("Z_p(n) against exhaustive enumeration") {
  for (unsigned long q : {2UL, 3UL, 4UL, 9UL})
    for (unsigned m = 1; m <= 3; ++m)
      for (unsigned n = 0; n <= 1 && n + 1 <= m; ++n) {
        CAPTURE(q);
        CAPTURE(m);
        CAPTURE(n);
        TateTwistResult t = tate_twist_invariants(q, m, n);
        testing::TateOracle o = testing::tate_twist_oracle(q, m, n);
        CHECK(testing::cyclic_type(t.h0, t.length) == o.h0);
        CHECK(testing::cyclic_type(t.h1, t.length) == o.h1);
      }
  // H^0 for n = 0 is Z/p^m.
  CHECK(testing::tate_twist_oracle(9, 3, 0).h0 == std::vector<unsigned>{3});
}

}  // TEST_SUITE
