#include <set>

#include "doctest.h"
#include "support.hpp"

#include "prism/qcalc.hpp"
#include "prism/qpd.hpp"

using namespace prism;
using testing::Gen;

namespace {

QPDElem random_qpd(const QPDModulePtr& m, Gen& g, std::uint64_t max_sum) {
  QPDElem a(m);
  for (int k = 0; k < 3; ++k) {
    Exponents e(m->r());
    std::uint64_t left = max_sum;
    for (auto& v : e) {
      v = static_cast<std::uint32_t>(g.next() % (left + 1));
      left -= v;
    }
    a.add_term(e, testing::base_elem(g, m->base()));
  }
  return a;
}

}  // namespace

TEST_SUITE("qpd-envelope") {

TEST_CASE("products of basis elements") {
  for (unsigned long p : {2UL, 3UL}) {
    auto B = base_ring_create(p, 3, 3, 1);
    auto m = QPDModule::create(B, 1, p * p + p);
    const auto one = static_cast<std::uint32_t>(m->denominator());
    const auto pp = static_cast<std::uint32_t>(p);
    // e_1 e_(p-1) = [p]_q e_p.
    CHECK(qpd_mul(QPDElem::basis(m, {one}), QPDElem::basis(m, {one * (pp - 1)})) ==
          QPDElem::basis(m, {one * pp}, base_q_int(B, p)));
    for (const auto& i : m->basis()) CHECK(qpd_mul(QPDElem::one(m), QPDElem::basis(m, i)) == QPDElem::basis(m, i));
    // Structure constants are q-binomials of the floors.
    for (const auto& i : m->basis())
      for (const auto& j : m->basis()) {
        if (!m->in_range({i[0] + j[0]})) continue;
        const auto fi = m->floor_of(i[0]), fj = m->floor_of(j[0]), fs = m->floor_of(i[0] + j[0]);
        UPoly expect = testing::q_binomial_oracle(fs, fi);
        if (fs == fi + fj) CHECK(qpd_structure_constant(*m, i, j) == expect);
        CHECK(qpd_structure_constant(*m, i, j) * testing::q_factorial_oracle(fi) * testing::q_factorial_oracle(fj) ==
              testing::q_factorial_oracle(fs));
      }
  }
  // p = 3, K = 1: e_(1/3)^2 = e_(2/3).
  auto m = QPDModule::create(base_ring_create(3, 2, 3, 1), 1, 12);
  CHECK(qpd_mul(QPDElem::basis(m, {1}), QPDElem::basis(m, {1})) == QPDElem::basis(m, {2}));
  CHECK_THROWS_AS(qpd_mul(QPDElem::basis(m, {30}), QPDElem::basis(m, {30})), DegreeOverflow);
}

TEST_CASE("ring laws and Frobenius") {
  Gen g(61);
  for (unsigned long p : {2UL, 3UL}) {
    auto B = base_ring_create(p, 3, 3, 1);
    auto m2 = QPDModule::create(B, 2, p * p + p);
    const std::uint64_t third = m2->blocks()[0].bound / 3;
    for (int trial = 0; trial < 3; ++trial) {
      QPDElem a = random_qpd(m2, g, third), b = random_qpd(m2, g, third), c = random_qpd(m2, g, third);
      CHECK(qpd_mul(a, b) == qpd_mul(b, a));
      CHECK(qpd_mul(qpd_mul(a, b), c) == qpd_mul(a, qpd_mul(b, c)));
      CHECK(qpd_mul(a, b + c) == qpd_mul(a, b) + qpd_mul(a, c));
      CHECK(qpd_frobenius(qpd_mul(a, b)) == qpd_mul(qpd_frobenius(a), qpd_frobenius(b)));
    }
    auto m = QPDModule::create(B, 1, p * p + p);
    auto T = m->frobenius_target();
    const auto one = static_cast<std::uint32_t>(m->denominator());
    // phi(e_(1/p)) = e_1 and phi(e_1) = [p]_q! e_p.
    CHECK(qpd_frobenius(QPDElem::basis(m, {one / static_cast<std::uint32_t>(p)})) == QPDElem::basis(T, {one}));
    CHECK(qpd_frobenius(QPDElem::basis(m, {one})) ==
          QPDElem::basis(T, {one * static_cast<std::uint32_t>(p)},
                         BaseElem::from_q_poly(T->base(), testing::q_factorial_oracle(p))));
    // gamma(Y) = [p-1]_q! e_p.
    CHECK(qpd_gamma_Y(m).coefficient == testing::q_factorial_oracle(p - 1));
    for (unsigned n = 0; n <= p * p; ++n) {
      auto c = q_power_divisibility(m, n);
      CHECK(c.basis_identity);
      CHECK(c.nonzerodivisors);
    }
  }
}

TEST_CASE("Kunneth products factor") {
  Gen g(62);
  auto B = base_ring_create(2, 3, 3, 1);
  auto m1 = QPDModule::create(B, 1, 6);
  auto prod = kunneth_product(m1, m1);
  CHECK(prod->r() == 2);
  for (int trial = 0; trial < 3; ++trial) {
    QPDElem a = random_qpd(m1, g, 3), b = random_qpd(m1, g, 3), c = random_qpd(m1, g, 3), d = random_qpd(m1, g, 3);
    CHECK(qpd_mul(qpd_tensor(prod, a, b), qpd_tensor(prod, c, d)) == qpd_tensor(prod, qpd_mul(a, c), qpd_mul(b, d)));
  }
  auto other = QPDModule::create(base_ring_create(3, 3, 3, 1), 1, 6);
  CHECK_THROWS_AS(kunneth_product(m1, other), MixedRings);
}

TEST_CASE("Nygaard filtration: image degrees, minimality, Kunneth") {
  // p = 2, K = 1, D = 6, n = 1: targets of i in {0, 1/2, 1, 3/2}.
  {
    auto m = QPDModule::create(base_ring_create(2, 3, 3, 1), 1, 6);
    NygaardReport rep = nygaard_verify(m, 1);
    CHECK(rep.ok());
    std::set<Exponents> got(rep.image_degrees.begin(), rep.image_degrees.end());
    CHECK(got == std::set<Exponents>{{0}, {2}, {4}, {6}});
    CHECK(got == testing::nygaard_image_oracle(*m, 1));
  }
  for (unsigned long p : {2UL, 3UL}) {
    auto m = QPDModule::create(base_ring_create(p, 3, 3, 1), 1, p * p + p);
    auto m2 = kunneth_product(m, m);
    for (unsigned n = 0; n <= 2; ++n) {
      CAPTURE(p);
      CAPTURE(n);
      NygaardReport r1 = nygaard_verify(m, n), r2 = nygaard_verify(m2, n);
      CHECK(r1.ok());
      CHECK(r2.ok());
      CHECK(std::set<Exponents>(r1.image_degrees.begin(), r1.image_degrees.end()) == testing::nygaard_image_oracle(*m, n));
      CHECK(std::set<Exponents>(r2.image_degrees.begin(), r2.image_degrees.end()) == testing::nygaard_image_oracle(*m2, n));
      for (const auto& i : m2->basis()) {
        const std::uint64_t floors = m2->floor_of(i[0]) + m2->floor_of(i[1]);
        CHECK(nygaard_power(*m2, i, n) == (floors >= n ? 0u : n - floors));
      }
    }
    CHECK(nygaard_multiplicativity(m, 1, 1).ok());
  }
  // Conjugate filtration: e_j with sum floor(j/p) <= n.
  auto T = QPDModule::create(base_ring_create(3, 2, 3, 1), 1, 12)->frobenius_target();
  CHECK(in_conjugate_filtration(*T, {8}, 0));
  CHECK_FALSE(in_conjugate_filtration(*T, {9}, 0));
}

}  // TEST_SUITE
