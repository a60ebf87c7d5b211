#include "doctest.h"
#include "support.hpp"

#include "prism/base_ring.hpp"
#include "prism/chain_ring.hpp"
#include "prism/poly.hpp"

using namespace prism;
using testing::Gen;

TEST_SUITE("base-arith") {

TEST_CASE("sparse polynomials: exact division inverts multiplication") {
  Gen g(11);
  auto vars = make_vars({"x", "y"});
  auto rnd = [&] {
    IntPoly f(vars);
    for (int k = 0; k < 4; ++k)
      f.add_term({static_cast<std::uint32_t>(g.range(0, 3)), static_cast<std::uint32_t>(g.range(0, 3))},
                 Int(g.range(-9, 9)));
    return f;
  };
  for (int trial = 0; trial < 40; ++trial) {
    IntPoly a = rnd(), b = rnd();
    if (b.is_zero()) continue;
    CHECK(exact_div(a * b, b) == a);
  }
  IntPoly x = IntPoly::variable(vars, 0);
  IntPoly one = IntPoly::constant(vars, 1);
  CHECK_THROWS_AS(exact_div(x, x + one), NotDivisible);
  CHECK_THROWS_AS(exact_div(x * Int(3) + one, Int(3)), NotDivisible);
}

TEST_CASE("univariate division with remainder") {
  Gen g(12);
  for (int trial = 0; trial < 60; ++trial) {
    UPoly a = testing::upoly(g, static_cast<int>(g.range(0, 8)), -20, 20);
    UPoly b = testing::upoly(g, static_cast<int>(g.range(0, 4)), -5, 5) + UPoly::monomial(1, 5);
    UDivision d = divmod(a, b);
    CHECK(d.quotient * b + d.remainder == a);
    CHECK(d.remainder.degree() < b.degree());
  }
  CHECK(UPoly(std::vector<Int>{1, 1, 1}).compose_power(2) == UPoly(std::vector<Int>{1, 0, 1, 0, 1}));
  CHECK(UPoly(std::vector<Int>{-1, 1}).eval(Rat(1, 2)) == Rat(-1, 2));
}

TEST_CASE("integer helpers") {
  CHECK(binomial(10, 3) == 120);
  CHECK(ipow(Int(3), 5) == 243);
  CHECK(valuation(Int(-54), 3) == 3);
  CHECK(is_prime(7));
  CHECK_FALSE(is_prime(9));
}

TEST_CASE("q - 1 in B(3,2,3,1) is 3(t-1) + 3(t-1)^2") {
  // t^3 - 1 = 3(t-1) + 3(t-1)^2 + (t-1)^3, truncated below degree 3.
  auto B = base_ring_create(3, 2, 3, 1);
  BaseElem qm1 = BaseElem::q(B) - BaseElem::one(B);
  CHECK(qm1 == BaseElem(B, std::vector<Int>{0, 3, 3}));
  CHECK(B->cardinality() == ipow(Int(3), 6));
}

TEST_CASE("[p]_q is not a unit; [p+1]_q and q are units") {
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    auto B = base_ring_create(p, 3, 4, 0);
    CHECK_FALSE(base_q_int(B, p).is_unit());
    CHECK(base_q_int(B, p + 1).is_unit());
    CHECK(BaseElem::q(B).is_unit());
  }
}

TEST_CASE("base ring laws and inverses") {
  Gen g(13);
  for (auto [p, N, M, K] : std::vector<std::tuple<unsigned long, unsigned, unsigned, unsigned>>{
           {2, 3, 4, 0}, {3, 2, 5, 1}, {5, 2, 3, 2}}) {
    auto B = base_ring_create(p, N, M, K);
    for (int trial = 0; trial < 20; ++trial) {
      BaseElem a = testing::base_elem(g, B), b = testing::base_elem(g, B), c = testing::base_elem(g, B);
      CHECK((a * b) * c == a * (b * c));
      CHECK(a * (b + c) == a * b + a * c);
      CHECK(a - a == BaseElem::zero(B));
      if (a.is_unit()) CHECK(a * a.inverse() == BaseElem::one(B));
      // The Frobenius t -> t^p lifts x -> x^p.
      BaseElem diff = base_frobenius(a) - a.pow(p);
      for (const auto& v : diff.coeffs()) CHECK(v % p == 0);
      CHECK(base_frobenius(a * b) == base_frobenius(a) * base_frobenius(b));
    }
    // q^-1 q = 1 and lift/from_t_poly round trip.
    CHECK(BaseElem::q_power(B, -3) * BaseElem::q_power(B, 3) == BaseElem::one(B));
    BaseElem x = testing::base_elem(g, B);
    CHECK(BaseElem::from_t_poly(B, x.lift()) == x);
  }
}

TEST_CASE("division by t - 1 loses one (t-1)-digit") {
  Gen g(14);
  auto B = base_ring_create(3, 2, 5, 0);
  auto B4 = base_ring_create(3, 2, 4, 0);
  BaseElem tm1 = BaseElem::t(B) - BaseElem::one(B);
  for (int trial = 0; trial < 10; ++trial) {
    BaseElem x = testing::base_elem(g, B);
    BaseElem y = (tm1 * x).divide_by_t_minus_one();
    CHECK(*y.ring() == *B4);
    CHECK(y == x.reduce_to(B4));
  }
  CHECK_THROWS_AS(BaseElem::one(B).divide_by_t_minus_one(), NotDivisible);
  CHECK_THROWS(base_ring_create(4, 2, 2, 0));
}

TEST_CASE("cyclotomic chain ring: valuation of p is p - 1") {
  // (zeta_p - 1)^(p-1) = p * unit, read off from Phi_p(1 + pi) = 0.
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL}) {
    ChainRing R = ChainRing::cyclotomic(p, 1);
    CHECK(R.valuation(R.from_int(static_cast<long long>(p))) == p - 1);
    ChainRing R2 = ChainRing::cyclotomic(p, 2);
    CHECK(R2.nilpotency() == 2 * (p - 1));
    // zeta^p = 1 and 1 + zeta + ... + zeta^(p-1) = 0.
    CHECK(R2.pow(R2.zeta(), p) == R2.one());
    ChainElem s = R2.zero();
    for (unsigned long i = 0; i < p; ++i) s = R2.add(s, R2.pow(R2.zeta(), i));
    CHECK(R2.is_zero(s));
  }
  ChainRing R = ChainRing::cyclotomic(3, 1);
  CHECK(R.valuation(R.from_int(3)) == 2);
}

TEST_CASE("chain ring laws, valuations and division by pi") {
  Gen g(15);
  for (ChainRing R : {ChainRing::zmod(3, 3), ChainRing::cyclotomic(3, 2), ChainRing::cyclotomic(5, 2),
                      ChainRing::zmod(2, 5)}) {
    for (int trial = 0; trial < 40; ++trial) {
      ChainElem a = testing::chain_elem(g, R), b = testing::chain_elem(g, R), c = testing::chain_elem(g, R);
      CHECK(R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c)));
      CHECK(R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c)));
      CHECK(R.valuation(R.mul(a, b)) == std::min(R.nilpotency(), R.valuation(a) + R.valuation(b)));
      if (R.is_unit(a)) CHECK(R.mul(a, R.inverse(a)) == R.one());
      const unsigned v = R.valuation(a);
      if (!R.is_zero(a)) {
        CHECK(R.mul(R.pi_power(v), R.div_pi(a, v)) == a);
        CHECK(R.mul(R.unit_part(a), R.pi_power(v)) == a);
      }
    }
  }
}

}  // TEST_SUITE
