#include "doctest.h"
#include "support.hpp"

#include "prism/delta.hpp"

using namespace prism;
using testing::Gen;

namespace {

DeltaPoly random_delta(const DeltaRingPtr& R, Gen& g, unsigned max_level) {
  DeltaPoly f = DeltaPoly::constant(R, Int(g.range(-3, 3)));
  for (int k = 0; k < 3; ++k) {
    DeltaPoly m = DeltaPoly::constant(R, Int(g.range(-4, 4)));
    for (long j = g.range(1, 2); j > 0; --j)
      m = m * DeltaPoly::gen(R, g.next() % R->generators(), static_cast<unsigned>(g.range(0, max_level)));
    f = f + m;
  }
  return f;
}

bool divisible_by(const DeltaPoly& f, const Int& d) {
  for (const auto& [e, c] : f.poly().terms())
    if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) return false;
  return true;
}

}  // namespace

TEST_SUITE("delta-core") {

TEST_CASE("delta on constants") {
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    auto R = DeltaRing::create(p, {"x"});
    CHECK(delta(DeltaPoly::constant(R, 0)).is_zero());
    CHECK(delta(DeltaPoly::constant(R, 1)).is_zero());
    // delta(p) = (p - p^p)/p.
    CHECK(delta(DeltaPoly::constant(R, Int(p))) == DeltaPoly::constant(R, 1 - ipow(Int(p), p - 1)));
  }
}

TEST_CASE("sum and product rules, phi is a Frobenius lift") {
  Gen g(31);
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    auto R = DeltaRing::create(p, {"x", "y"}, 3);
    for (int trial = 0; trial < 8; ++trial) {
      DeltaPoly f = random_delta(R, g, 1), h = random_delta(R, g, 1);
      DeltaPoly corr(R, exact_div((f.pow(p) + h.pow(p) - (f + h).pow(p)).poly(), Int(p)));
      CHECK(delta(f + h) == delta(f) + delta(h) + corr);
      CHECK(delta(f * h) == f.pow(p) * delta(h) + h.pow(p) * delta(f) + Int(p) * (delta(f) * delta(h)));
      CHECK(phi(f * h) == phi(f) * phi(h));
      CHECK(phi(f + h) == phi(f) + phi(h));
      CHECK(divisible_by(phi(f) - f.pow(p), Int(p)));
      CHECK(phi(f) == f.pow(p) + Int(p) * delta(f));
    }
  }
}

TEST_CASE("delta_2 at p = 2 from phi^2") {
  // delta_2(x) = (phi^2(x) - x^4 - 2 delta(x)^2) / 4.
  auto R = DeltaRing::create(2, {"x"}, 4);
  DeltaPoly x = DeltaPoly::gen(R, 0);
  DeltaPoly num = phi(phi(x)) - x.pow(4) - Int(2) * delta(x).pow(2);
  DeltaPoly oracle(R, exact_div(num.poly(), Int(4)));
  CHECK(joyal_delta_n(x, 2) == oracle);
  CHECK(joyal_delta_n(x, 1) == delta(x));
  CHECK(joyal_delta_n(x, 0) == x);
}

TEST_CASE("Joyal identity phi^n = sum p^k delta_k^(p^(n-k))") {
  for (unsigned long p : {2UL, 3UL}) {
    auto R = DeltaRing::create(p, {"x"}, 4);
    DeltaPoly x = DeltaPoly::gen(R, 0);
    DeltaPoly lhs = x;
    for (unsigned n = 0; n <= 3; ++n) {
      DeltaPoly rhs = DeltaPoly::constant(R, 0);
      for (unsigned k = 0; k <= n; ++k)
        rhs = rhs + ipow(Int(p), k) * joyal_delta_n(x, k).pow(ipow(Int(p), n - k).get_ui());
      CHECK(lhs == rhs);
      if (n < 3) lhs = phi(lhs);
    }
  }
}

TEST_CASE("delta(x^(p^n)) is divisible by p^n") {
  for (unsigned long p : {2UL, 3UL}) {
    for (unsigned n = 0; n <= 2; ++n) {
      auto R = DeltaRing::create(p, {"x"}, 2);
      DeltaPoly x = DeltaPoly::gen(R, 0);
      DeltaPoly d = delta(x.pow(ipow(Int(p), n).get_ui()));
      CHECK(divisible_by(d, ipow(Int(p), n)));
      PowerDivisibility c = delta_power_divisibility(p, n);
      CHECK(ipow(Int(p), n) * c.quotient == c.delta_value);
    }
  }
  // n = 1, p = 2: delta(x^2) = 2 x^2 delta(x) + 2 delta(x)^2 by the product rule.
  auto R = DeltaRing::create(2, {"x"}, 2);
  DeltaPoly x = DeltaPoly::gen(R, 0), dx = DeltaPoly::gen(R, 0, 1);
  CHECK(delta(x * x) == Int(2) * x.pow(2) * dx + Int(2) * dx.pow(2));
}

TEST_CASE("W_2 map x -> (x, delta x)") {
  Gen g(32);
  for (unsigned long p : {2UL, 3UL}) {
    auto R = DeltaRing::create(p, {"x", "y"}, 3);
    for (int trial = 0; trial < 5; ++trial) CHECK(w2_check(random_delta(R, g, 1), random_delta(R, g, 1)));
  }
}

TEST_CASE("distinguished elements of the base") {
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    auto B = base_ring_create(p, 3, 4, 0);
    const BaseElem qm1 = BaseElem::q(B) - BaseElem::one(B);
    CHECK(is_distinguished(BaseElem(B, Int(p))));
    CHECK(is_distinguished(base_q_int(B, p)));
    CHECK_FALSE(is_distinguished(qm1));
    // delta(q - 1) = ((q-1)[p]_q - (q-1)^p)/p vanishes at t = 1.
    UPoly tm1 = UPoly(std::vector<Int>{-1, 1});
    UPoly num = tm1 * testing::q_int_oracle(p) - tm1.pow(p);
    CHECK(exact_div(num, UPoly(Int(p))).eval(Int(1)) == 0);
    CHECK(base_delta(qm1)[0] == 0);
    for (const BaseElem& d : {BaseElem(B, Int(p)), base_q_int(B, p), qm1, BaseElem(B, Int(p * p))})
      CHECK(is_distinguished(d) == distinguished_membership_check(d).member);
  }
}

TEST_CASE("membership certificate reproduces p") {
  Gen g(33);
  auto B = base_ring_create(3, 2, 4, 0);
  for (int trial = 0; trial < 6; ++trial) {
    std::vector<Int> c(B->M());
    c[0] = 3 * g.range(0, 2);
    for (unsigned j = 1; j < B->M(); ++j) c[j] = g.range(0, 8);
    BaseElem d(B, c);
    MembershipResult r = distinguished_membership_check(d);
    CHECK(r.member == is_distinguished(d));
    if (r.member) CHECK(*r.a * d + *r.b * base_frobenius(d) == BaseElem(B, Int(3)));
  }
}

TEST_CASE("divided power certificates at p = 2") {
  auto certs = divided_power_certificates(2, 8);
  REQUIRE(certs.size() >= 8);
  for (const auto& c : certs) {
    CHECK(c.integral);
    CHECK(c.verified);
  }
  // gamma_(2p) = u gamma_2(gamma_p): u = (p!)^2 2! / (2p)!.
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    Rat u(testing::factorial(p) * testing::factorial(p) * 2, testing::factorial(2 * p));
    u.canonicalize();
    CHECK(divided_power_unit(p, 2) == u);
    CHECK(testing::vp(u.get_num(), p) == 0);
    CHECK(testing::vp(u.get_den(), p) == 0);
  }
}

}  // TEST_SUITE
