#include "doctest.h"
#include "support.hpp"

#include "prism/qcalc.hpp"

using namespace prism;
using testing::Gen;

TEST_SUITE("qcalc") {

TEST_CASE("q-integers, factorials and binomials") {
  CHECK(q_binomial(4, 2) == UPoly(std::vector<Int>{1, 1, 2, 1, 1}));
  for (unsigned long n = 0; n <= 12; ++n) {
    CHECK(q_int(n) == testing::q_int_oracle(n));
    CHECK(q_int(n).eval(Int(1)) == n);
    CHECK(q_factorial(n) == testing::q_factorial_oracle(n));
    CHECK(q_factorial(n).eval(Int(1)) == testing::factorial(n));
    for (unsigned long k = 0; k <= n; ++k) {
      CHECK(q_binomial(n, k) == testing::q_binomial_oracle(n, k));
      CHECK(q_binomial(n, k).eval(Int(1)) == binomial(n, k));
    }
  }
}

TEST_CASE("[mp]_q! = u phi([m]_q!) [p]_q^m with u(1) prime to p") {
  for (unsigned long p : {2UL, 3UL, 5UL})
    for (unsigned long m = 0; m <= 8; ++m) {
      CAPTURE(p);
      CAPTURE(m);
      UnitCertificate c = verify_frobenius_factorial(p, m);
      CHECK(c.unit);
      // Checked by multiplication, and at q = 1 against (mp)! / (m! p^m).
      UPoly back = c.cofactor * testing::q_to_power(testing::q_factorial_oracle(m), p) * testing::q_int_oracle(p).pow(m);
      CHECK(back == testing::q_factorial_oracle(m * p));
      Int at_one = testing::factorial(m * p) / (testing::factorial(m) * ipow(Int(p), m));
      CHECK(c.value_at_one == at_one);
      CHECK(testing::vp(at_one, p) == 0);
    }
  // p = 2, m = 2: u = [3]_q.
  CHECK(verify_frobenius_factorial(2, 2).cofactor == UPoly(std::vector<Int>{1, 1, 1}));
  // m = 1: u = [p-1]_q!.
  for (unsigned long p : {2UL, 3UL, 5UL, 7UL}) CHECK(verify_frobenius_factorial(p, 1).cofactor == q_factorial(p - 1));
}

TEST_CASE("floor factorials") {
  // p = 3, i = 4/3: floor(i) = 1, floor(ip) = 4, extra factor [4]_q.
  FloorFactorial a = verify_floor_factorial(3, 4, 1);
  CHECK(a.floor_i == 1);
  CHECK(a.floor_ip == 4);
  CHECK(a.cert.cofactor == testing::q_int_oracle(4));
  // p = 2, i = 3/2: extra factor [3]_q.
  FloorFactorial b = verify_floor_factorial(2, 3, 1);
  CHECK(b.floor_i == 1);
  CHECK(b.floor_ip == 3);
  CHECK(b.cert.cofactor == testing::q_int_oracle(3));
  for (unsigned long p : {2UL, 3UL, 5UL})
    for (unsigned K = 1; K <= 2; ++K) {
      const unsigned long den = ipow(Int(p), K).get_ui();
      for (unsigned long num = 0; num <= 3 * den; ++num) {
        FloorFactorial f = verify_floor_factorial(p, num, K);
        CHECK(f.floor_i == num / den);
        CHECK(f.floor_ip == num * p / den);
        CHECK(f.cert.unit);
        CHECK(f.cert.cofactor * testing::q_factorial_oracle(f.floor_i * p) == testing::q_factorial_oracle(f.floor_ip));
      }
    }
}

TEST_CASE("gamma: definition, sum and scale rules, value at q = 1") {
  Gen g(51);
  const UPoly qm1(std::vector<Int>{-1, 1});
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    const UPoly pq = testing::q_int_oracle(p);
    for (int trial = 0; trial < 8; ++trial) {
      UPoly x = qm1 * testing::upoly(g, 2, -3, 3) + UPoly(Int(p) * g.range(-3, 3));
      UPoly y = qm1 * testing::upoly(g, 2, -3, 3);
      UPoly f = testing::upoly(g, 2, -3, 3);
      UPoly gx;
      try {
        gx = q_gamma(x, p);
      } catch (const NotDivisible&) {
        continue;
      }
      // [p]_q (gamma(x) + delta(x)) = phi(x), and delta(x) = (phi(x) - x^p)/p.
      CHECK(pq * (gx + q_delta(x, p)) == testing::q_to_power(x, p));
      CHECK(q_delta(x, p) * Int(p) == testing::q_to_power(x, p) - x.pow(p));
      Rat expect(ipow(x.eval(Int(1)), p), Int(p));
      expect.canonicalize();
      CHECK(Rat(gx.eval(Int(1))) == expect);
      CHECK(gamma_sum_identity(qm1 * testing::upoly(g, 2, -3, 3), y, p));
      CHECK(gamma_scale_identity(f, y, p));
    }
    // x = y = q - 1, and f = q with x = q - 1.
    CHECK(gamma_sum_identity(qm1, qm1, p));
    CHECK(gamma_scale_identity(UPoly::monomial(1, 1), qm1, p));
  }
}

TEST_CASE("phi([m]_q!) is a nonzerodivisor mod [p]_q") {
  // p = 3, m = 2: phi([2]_q!) = 1 + q^3, coprime to 1 + q + q^2.
  NonZeroDivisorCheck c = frobenius_factorial_nonzerodivisor(3, 2);
  CHECK(c.nonzerodivisor);
  CHECK(c.gcd_over_q == UPoly(1));
  CHECK(divmod(UPoly(std::vector<Int>{1, 0, 0, 1}), testing::q_int_oracle(3)).remainder == c.remainder);
  for (unsigned long p : {2UL, 3UL, 5UL})
    for (unsigned long m = 0; m <= 4; ++m) CHECK(frobenius_factorial_nonzerodivisor(p, m).nonzerodivisor);
}

TEST_CASE("gcd over Q") {
  Gen g(52);
  for (int trial = 0; trial < 20; ++trial) {
    UPoly c = testing::upoly(g, 2, -4, 4) + UPoly::monomial(1, 3);
    UPoly a = testing::upoly(g, 2, -4, 4) + UPoly::monomial(1, 3);
    UPoly b = testing::upoly(g, 1, -4, 4) + UPoly::monomial(1, 2);
    UPoly d = gcd_over_rationals(a * c, b * c);
    CHECK(divmod(d, c).remainder.is_zero());
    CHECK(d.leading() > 0);
  }
}

}  // TEST_SUITE
