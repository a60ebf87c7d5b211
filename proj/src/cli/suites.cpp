#include <algorithm>
#include <chrono>
#include <functional>
#include <random>
#include <sstream>

#include "prism/cli.hpp"
#include "prism/delta.hpp"
#include "prism/errors.hpp"
#include "prism/qcalc.hpp"
#include "prism/qpd.hpp"
#include "prism/witt.hpp"

namespace prism {

namespace {

struct Outcome {
  bool ok = true;
  std::string witness;
};

struct Skip {
  std::string reason;
};

Outcome pass() { return {}; }
Outcome fail(std::string w) { return {false, std::move(w)}; }
Outcome check(bool cond, const std::string& w) { return cond ? pass() : fail(w); }

using Rng = std::mt19937_64;
using CaseFn = std::function<Outcome(Rng&)>;

struct Case {
  std::string name;
  CaseFn fn;
  bool randomized = false;
};

std::uint64_t case_seed(std::uint64_t seed, const std::string& name) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : name) h = (h ^ c) * 1099511628211ULL;
  std::uint64_t z = seed + h + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

long pick(Rng& rng, long lo, long hi) { return lo + static_cast<long>(rng() % static_cast<std::uint64_t>(hi - lo + 1)); }

class Suite {
 public:
  void add(std::string name, CaseFn fn) { cases_.push_back({std::move(name), std::move(fn), false}); }
  void add_random(std::string name, CaseFn fn) { cases_.push_back({std::move(name), std::move(fn), true}); }
  std::vector<Case>& cases() { return cases_; }

 private:
  std::vector<Case> cases_;
};

std::string str(unsigned long v) { return std::to_string(v); }

// ------------------------------------------------------------------ delta

DeltaPoly random_delta_poly(const DeltaRingPtr& R, Rng& rng, unsigned max_level, unsigned terms, unsigned max_deg) {
  DeltaPoly f = DeltaPoly::constant(R, Int(pick(rng, -2, 2)));
  for (unsigned k = 0; k < terms; ++k) {
    DeltaPoly m = DeltaPoly::constant(R, Int(pick(rng, 1, 3) * (rng() % 2 ? 1 : -1)));
    const unsigned factors = static_cast<unsigned>(pick(rng, 1, max_deg));
    for (unsigned j = 0; j < factors; ++j)
      m = m * DeltaPoly::gen(R, rng() % R->generators(), static_cast<unsigned>(pick(rng, 0, max_level)));
    f = f + m;
  }
  return f;
}

void delta_suite(Suite& S, const SuiteConfig& cfg) {
  const unsigned long p = cfg.p;
  const std::string pre = "delta.p" + str(p) + ".";
  S.add(pre + "constants", [p](Rng&) {
    auto R = DeltaRing::create(p, {"x"});
    const Int pp = ipow(Int(p), p - 1);
    if (!delta(DeltaPoly::constant(R, 0)).is_zero()) return fail("delta(0) != 0");
    if (!delta(DeltaPoly::constant(R, 1)).is_zero()) return fail("delta(1) != 0");
    DeltaPoly d = delta(DeltaPoly::constant(R, Int(p)));
    return check(d == DeltaPoly::constant(R, 1 - pp), "delta(p) = " + d.to_string());
  });
  S.add_random(pre + "sum_identity", [p](Rng& rng) {
    auto R = DeltaRing::create(p, {"x", "y"}, 3);
    for (int trial = 0; trial < 6; ++trial) {
      DeltaPoly f = random_delta_poly(R, rng, 1, 3, 2), g = random_delta_poly(R, rng, 1, 3, 2);
      DeltaPoly corr(R, exact_div((f.pow(p) + g.pow(p) - (f + g).pow(p)).poly(), Int(p)));
      if (!(delta(f + g) == delta(f) + delta(g) + corr)) return fail("f = " + f.to_string() + ", g = " + g.to_string());
    }
    return pass();
  });
  S.add_random(pre + "product_identity", [p](Rng& rng) {
    auto R = DeltaRing::create(p, {"x", "y"}, 3);
    for (int trial = 0; trial < 6; ++trial) {
      DeltaPoly f = random_delta_poly(R, rng, 1, 3, 2), g = random_delta_poly(R, rng, 1, 3, 2);
      DeltaPoly rhs = f.pow(p) * delta(g) + g.pow(p) * delta(f) + Int(p) * (delta(f) * delta(g));
      if (!(delta(f * g) == rhs)) return fail("f = " + f.to_string() + ", g = " + g.to_string());
    }
    return pass();
  });
  S.add_random(pre + "phi_homomorphism", [p](Rng& rng) {
    auto R = DeltaRing::create(p, {"x", "y"}, 3);
    for (int trial = 0; trial < 6; ++trial) {
      DeltaPoly f = random_delta_poly(R, rng, 1, 3, 2), g = random_delta_poly(R, rng, 1, 3, 2);
      if (!(phi(f + g) == phi(f) + phi(g)) || !(phi(f * g) == phi(f) * phi(g)))
        return fail("f = " + f.to_string() + ", g = " + g.to_string());
      DeltaPoly diff = phi(f) - f.pow(p);
      for (const auto& [e, c] : diff.poly().terms())
        if (!mpz_divisible_ui_p(c.get_mpz_t(), p)) return fail("phi(f) - f^p not divisible by p for f = " + f.to_string());
    }
    return pass();
  });
  for (unsigned n = 0; n <= 3; ++n)
    S.add(pre + "joyal.n" + str(n), [p, n](Rng&) {
      auto R = DeltaRing::create(p, {"x"}, 4);
      DeltaPoly x = DeltaPoly::gen(R, 0);
      DeltaPoly lhs = x;
      for (unsigned k = 0; k < n; ++k) lhs = phi(lhs);
      DeltaPoly rhs = DeltaPoly::constant(R, 0);
      for (unsigned k = 0; k <= n; ++k)
        rhs = rhs + ipow(Int(p), k) * joyal_delta_n(x, k).pow(ipow(Int(p), n - k).get_ui());
      if (!(lhs == rhs)) return fail("phi^n(x) != sum p^k delta_k(x)^(p^(n-k))");
      if (n >= 1 && !joyal_delta_n(DeltaPoly::constant(R, 1), n).is_zero()) return fail("delta_n(1) != 0");
      if (n == 1 && !(joyal_delta_n(x, 1) == delta(x))) return fail("delta_1 != delta");
      return pass();
    });
  S.add_random(pre + "w2_map", [p](Rng& rng) {
    auto R = DeltaRing::create(p, {"x", "y"}, 3);
    for (int trial = 0; trial < 6; ++trial) {
      DeltaPoly f = random_delta_poly(R, rng, 1, 3, 2), g = random_delta_poly(R, rng, 1, 3, 2);
      if (!w2_check(f, g)) return fail("f = " + f.to_string() + ", g = " + g.to_string());
    }
    return pass();
  });
  for (unsigned n = 0; n <= 3; ++n)
    S.add(pre + "power_divisibility.n" + str(n), [p, n](Rng&) {
      PowerDivisibility c = delta_power_divisibility(p, n);
      DeltaPoly back = ipow(Int(p), n) * c.quotient;
      return check(back == c.delta_value, "quotient does not reproduce delta(x^(p^n))");
    });
  const unsigned N = std::max(2u, cfg.N);
  S.add(pre + "distinguished", [p, N, cfg](Rng&) {
    auto B = base_ring_create(p, N, cfg.M, cfg.K);
    struct Item {
      std::string name;
      BaseElem d;
      bool expected;
    };
    std::vector<Item> items = {{"p", BaseElem(B, Int(p)), true},
                               {"[p]_q", base_q_int(B, p), true},
                               {"q-1", BaseElem::q(B) - BaseElem::one(B), false}};
    for (const auto& it : items) {
      const bool a = is_distinguished(it.d);
      const bool b = distinguished_membership_check(it.d).member;
      if (a != it.expected || a != b)
        return fail(it.name + ": is_distinguished=" + std::to_string(a) + " membership=" + std::to_string(b));
    }
    return pass();
  });
  S.add_random(pre + "distinguished_unit_multiple", [p, N, cfg](Rng& rng) {
    auto B = base_ring_create(p, N, cfg.M, cfg.K);
    const BaseElem d = base_q_int(B, p);
    for (int trial = 0; trial < 4; ++trial) {
      std::vector<Int> c(B->M());
      c[0] = pick(rng, 1, static_cast<long>(p) - 1);
      for (unsigned j = 1; j < B->M(); ++j) c[j] = pick(rng, 0, 50);
      BaseElem u(B, c);
      BaseElem ud = u * d;
      if (!is_distinguished(ud) || !distinguished_membership_check(ud).member)
        return fail("u = " + u.to_string());
    }
    return pass();
  });
  S.add(pre + "divided_power_certificate", [p](Rng&) {
    auto certs = divided_power_certificates(p, static_cast<unsigned>(p * p * p));
    for (const auto& c : certs)
      if (!c.integral || !c.verified) return fail("n = " + std::to_string(c.n));
    return pass();
  });
}

// ------------------------------------------------------------------ witt

template <class R>
WittVec<R> random_witt(std::shared_ptr<const R> ring, unsigned long p, unsigned m, Rng& rng, long lo, long hi) {
  std::vector<typename R::Elem> c;
  for (unsigned i = 0; i < m; ++i) c.push_back(ring->from_int(Int(pick(rng, lo, hi))));
  return WittVec<R>(std::move(ring), p, std::move(c));
}

void witt_suite(Suite& S, const SuiteConfig& cfg) {
  const unsigned long p = cfg.p;
  const std::string pre = "witt.p" + str(p) + ".";
  S.add(pre + "closed_formulas.m2", [p](Rng&) {
    auto vars = make_vars({"x0", "x1", "y0", "y1"});
    auto ring = std::make_shared<const PolyRing>(vars);
    auto v = [&](int i) { return IntPoly::variable(vars, i); };
    WittVec<PolyRing> a(ring, p, {v(0), v(1)}), b(ring, p, {v(2), v(3)});
    W2Pair A{v(0), v(1)}, B{v(2), v(3)};
    W2Pair s = w2_add(A, B, p), m = w2_mul(A, B, p);
    WittVec<PolyRing> S2 = witt_add(a, b), P2 = witt_mul(a, b);
    if (!(S2[0] == s.x && S2[1] == s.y)) return fail("sum: " + S2.to_string());
    return check(P2[0] == m.x && P2[1] == m.y, "product: " + P2.to_string());
  });
  S.add(pre + "product_example", [p](Rng&) {
    if (p != 2) throw Skip{"example is stated for p = 2"};
    auto Z = std::make_shared<const IntegerRing>();
    WittVec<IntegerRing> a(Z, 2, {Int(0), Int(1)});
    WittVec<IntegerRing> c = witt_mul(a, a);
    return check(c[0] == 0 && c[1] == 2, "(0,1)*(0,1) = " + c.to_string());
  });
  for (unsigned m = 1; m <= 4; ++m)
    S.add_random(pre + "ghost_homomorphism.m" + str(m), [p, m](Rng& rng) {
      if (p > 5 && m > 3) throw Skip{"m = 4 structure polynomials are run for p <= 5"};
      auto Z = std::make_shared<const IntegerRing>();
      for (int trial = 0; trial < 4; ++trial) {
        auto a = random_witt(Z, p, m, rng, -4, 4), b = random_witt(Z, p, m, rng, -4, 4);
        auto ga = ghost(a), gb = ghost(b), gs = ghost(witt_add(a, b)), gm = ghost(witt_mul(a, b));
        for (unsigned i = 0; i < m; ++i)
          if (gs[i] != ga[i] + gb[i] || gm[i] != ga[i] * gb[i]) return fail("a = " + a.to_string() + ", b = " + b.to_string());
      }
      return pass();
    });
  S.add_random(pre + "delta_map.m3", [p](Rng& rng) {
    if (p > 5) throw Skip{"W_3 delta map is run for p <= 5"};
    auto R = DeltaRing::create(p, {"x", "y"}, 4);
    auto ring = std::make_shared<const PolyRing>(R->vars());
    auto w = [&](const DeltaPoly& f) {
      std::vector<IntPoly> c;
      for (unsigned n = 0; n < 3; ++n) c.push_back(joyal_delta_n(f, n).poly());
      return WittVec<PolyRing>(ring, p, std::move(c));
    };
    for (int trial = 0; trial < 2; ++trial) {
      DeltaPoly f = random_delta_poly(R, rng, 0, 2, 1), g = random_delta_poly(R, rng, 0, 2, 1);
      if (!(w(f + g) == witt_add(w(f), w(g))) || !(w(f * g) == witt_mul(w(f), w(g))))
        return fail("f = " + f.to_string() + ", g = " + g.to_string());
    }
    return pass();
  });
  S.add_random(pre + "teichmuller_multiplicative", [p](Rng& rng) {
    auto F = std::make_shared<const GaloisField>(p * p);
    for (int trial = 0; trial < 8; ++trial) {
      auto a = F->element(rng() % F->size()), b = F->element(rng() % F->size());
      auto lhs = witt_mul(teichmuller(F, p, a, 3), teichmuller(F, p, b, 3));
      if (!(lhs == teichmuller(F, p, F->mul(a, b), 3)))
        return fail("a = " + F->to_string(a) + ", b = " + F->to_string(b));
    }
    return pass();
  });
  S.add(pre + "frobenius_teichmuller", [p](Rng&) {
    auto F = std::make_shared<const GaloisField>(p * p);
    for (std::uint64_t k = 0; k < F->size(); ++k) {
      auto a = F->element(k);
      if (!(witt_F(teichmuller(F, p, a, 3)) == teichmuller(F, p, F->frobenius(a), 2)))
        return fail("a = " + F->to_string(a));
    }
    return pass();
  });
  S.add_random(pre + "FV_equals_p", [p](Rng& rng) {
    auto Z = std::make_shared<const IntegerRing>();
    for (unsigned m = 2; m <= 3; ++m) {
      auto a = random_witt(Z, p, m, rng, -5, 5);
      if (!(witt_F(witt_V(a)) == witt_scale(Int(p), witt_truncate(a, m - 1)))) return fail("a = " + a.to_string());
    }
    return pass();
  });
  S.add(pre + "nilpotent_teichmuller", [p](Rng&) {
    auto D = std::make_shared<const DualField>(p);
    const auto x = D->epsilon();
    auto tx = teichmuller(D, p, x, 2);
    if (!(witt_mul(tx, tx) == WittVec<DualField>::zero(D, p, 2))) return fail("[x]*[x] != 0");
    for (std::uint64_t a = 0; a < D->size(); ++a)
      for (std::uint64_t b = 0; b < D->size(); ++b) {
        WittVec<DualField> w(D, p, {D->element(a), D->element(b)});
        if (!(witt_mul(tx, witt_V(w)) == WittVec<DualField>::zero(D, p, 2))) return fail("[x]V(w) != 0 for w = " + w.to_string());
      }
    return pass();
  });
  S.add(pre + "zero_divisors", [p](Rng&) {
    for (unsigned m = 1; m <= (p == 2 ? 3u : 2u); ++m) {
      auto rep = no_nonzerodivisor_witness(p, m);
      if (!rep.every_nonunit_annihilated || rep.units != rep.size - rep.maximal_ideal)
        return fail("m = " + std::to_string(m));
    }
    return pass();
  });
  S.add(pre + "distinguished_criterion", [p](Rng&) {
    for (unsigned long q : {p, p * p}) {
      auto F = std::make_shared<const GaloisField>(q);
      for (std::uint64_t a = 0; a < F->size(); ++a)
        for (std::uint64_t b = 0; b < F->size(); ++b) {
          WittVec<GaloisField> d(F, p, {F->element(a), F->element(b)});
          const bool lhs = F->is_unit(teichmuller_p_coefficient(d));
          const bool rhs = F->is_unit(witt_delta_perfect(d)[0]);
          if (lhs != rhs) return fail("d = " + d.to_string() + " over GF(" + std::to_string(q) + ")");
        }
    }
    return pass();
  });
  for (unsigned long q : {p, p * p})
    for (unsigned m = 1; m <= 3; ++m)
      for (unsigned n = 0; n <= 1 && n + 1 <= m; ++n)
        S.add(pre + "tate_twist.q" + str(q) + ".m" + str(m) + ".n" + str(n), [q, m, n](Rng&) {
          TateTwistResult t = tate_twist_invariants(q, m, n);
          const unsigned e = t.length;
          if (t.h0.length(e) != t.h1.length(e)) return fail("H0 = " + t.h0.to_string() + ", H1 = " + t.h1.to_string());
          if (n == 0 && !(t.h0.free_rank == 1 && t.h0.torsion.empty()))
            return fail("Frobenius fixed points are not Z/p^m: " + t.h0.to_string());
          return pass();
        });
}

// ------------------------------------------------------------------ qanalog

UPoly random_upoly(Rng& rng, int deg, long lo, long hi) {
  std::vector<Int> c;
  for (int i = 0; i <= deg; ++i) c.push_back(pick(rng, lo, hi));
  return UPoly(c);
}

void qanalog_suite(Suite& S, const SuiteConfig& cfg) {
  const unsigned long p = cfg.p;
  const std::string pre = "qanalog.p" + str(p) + ".";
  S.add(pre + "q_int", [p](Rng&) {
    if (!(q_int(1) == UPoly(1))) return fail("[1]_q != 1");
    std::vector<Int> ones(p, Int(1));
    if (!(q_int(p) == UPoly(ones))) return fail("[p]_q = " + q_int(p).to_string());
    for (unsigned long n = 0; n <= 20; ++n)
      if (q_int(n).eval(Int(1)) != n) return fail("[n]_1 != n at n = " + std::to_string(n));
    return pass();
  });
  S.add(pre + "q_binomial", [](Rng&) {
    if (!(q_binomial(4, 2) == UPoly(std::vector<Int>{1, 1, 2, 1, 1}))) return fail(q_binomial(4, 2).to_string());
    for (unsigned long a = 0; a <= 40; ++a)
      for (unsigned long b = 0; b <= a; ++b) q_binomial(a, b);
    return pass();
  });
  for (unsigned long m = 0; m <= 8; ++m)
    S.add(pre + "frobenius_factorial.m" + str(m), [p, m](Rng&) {
      UnitCertificate c = verify_frobenius_factorial(p, m);
      return check(c.unit, "u = " + c.cofactor.to_string());
    });
  S.add(pre + "floor_factorial", [p, cfg](Rng&) {
    const unsigned K = std::min(cfg.K, 2u);
    const unsigned long den = static_cast<unsigned long>(ipow(Int(p), K).get_ui());
    for (unsigned long num = 0; num <= 3 * den; ++num) {
      FloorFactorial f = verify_floor_factorial(p, num, K);
      if (!f.cert.unit) return fail("i = " + std::to_string(num) + "/" + std::to_string(den));
    }
    return pass();
  });
  S.add(pre + "gamma_q_minus_one", [p](Rng&) {
    const UPoly x = UPoly(std::vector<Int>{-1, 1});
    UPoly g = q_gamma(x, p);
    return check(g == x - q_delta(x, p), "gamma(q-1) = " + g.to_string());
  });
  S.add_random(pre + "gamma_identities", [p](Rng& rng) {
    const UPoly qm1 = UPoly(std::vector<Int>{-1, 1});
    for (int trial = 0; trial < 5; ++trial) {
      UPoly x = qm1 * random_upoly(rng, 2, -3, 3), y = qm1 * random_upoly(rng, 2, -3, 3), f = random_upoly(rng, 2, -3, 3);
      if (!gamma_sum_identity(x, y, p)) return fail("sum: x = " + x.to_string() + ", y = " + y.to_string());
      if (!gamma_scale_identity(f, x, p)) return fail("scale: f = " + f.to_string() + ", x = " + x.to_string());
    }
    if (!gamma_scale_identity(UPoly::monomial(1, 1), qm1, p)) return fail("scale: f = q, x = q-1");
    return pass();
  });
  S.add_random(pre + "gamma_at_one", [p](Rng& rng) {
    const UPoly qm1 = UPoly(std::vector<Int>{-1, 1});
    for (int trial = 0; trial < 5; ++trial) {
      UPoly x = qm1 * random_upoly(rng, 2, -3, 3) + UPoly(Int(p) * pick(rng, -3, 3));
      UPoly g;
      try {
        g = q_gamma(x, p);
      } catch (const NotDivisible&) {
        continue;
      }
      Rat expect(ipow(x.eval(Int(1)), p), Int(p));
      expect.canonicalize();
      if (Rat(g.eval(Int(1))) != expect) return fail("x = " + x.to_string());
    }
    return pass();
  });
  for (unsigned long m = 0; m <= 3; ++m)
    S.add(pre + "nonzerodivisor.m" + str(m), [p, m](Rng&) {
      NonZeroDivisorCheck c = frobenius_factorial_nonzerodivisor(p, m);
      return check(c.nonzerodivisor, "remainder " + c.remainder.to_string() + ", gcd " + c.gcd_over_q.to_string());
    });
}

// ------------------------------------------------------------------ qpd / nygaard

QPDModulePtr default_module(const SuiteConfig& cfg, unsigned r) {
  auto B = base_ring_create(cfg.p, cfg.N, cfg.M, std::max(1u, cfg.K));
  return QPDModule::create(B, r, cfg.p * cfg.p + cfg.p);
}

QPDElem random_qpd(const QPDModulePtr& m, Rng& rng, std::uint64_t max_sum) {
  QPDElem a(m);
  const auto& B = m->base();
  for (int k = 0; k < 3; ++k) {
    Exponents e(m->r());
    std::uint64_t left = max_sum;
    for (auto& v : e) {
      v = static_cast<std::uint32_t>(rng() % (left + 1));
      left -= v;
    }
    std::vector<Int> c(B->M());
    for (auto& v : c) v = pick(rng, 0, 8);
    a.add_term(e, BaseElem(B, c));
  }
  return a;
}

void qpd_suite(Suite& S, const SuiteConfig& cfg) {
  const unsigned long p = cfg.p;
  const std::string pre = "qpd.p" + str(p) + ".";
  S.add(pre + "mul_examples", [cfg, p](Rng&) {
    auto m = default_module(cfg, 1);
    const std::uint32_t one = static_cast<std::uint32_t>(m->denominator());
    auto e = [&](std::uint32_t i) { return QPDElem::basis(m, {i}); };
    QPDElem lhs = qpd_mul(e(one), e(one * static_cast<std::uint32_t>(p - 1)));
    QPDElem rhs = QPDElem::basis(m, {one * static_cast<std::uint32_t>(p)}, base_q_int(m->base(), p));
    if (!(lhs == rhs)) return fail("e_1 e_(p-1) = " + lhs.to_string());
    for (const auto& i : m->basis())
      if (!(qpd_mul(QPDElem::one(m), QPDElem::basis(m, i)) == QPDElem::basis(m, i))) return fail("e_0 is not a unit");
    const std::uint32_t f = one / static_cast<std::uint32_t>(p);
    return check(qpd_mul(e(f), e(f)) == e(2 * f), "e_(1/p)^2 = " + qpd_mul(e(f), e(f)).to_string());
  });
  S.add_random(pre + "mul_ring_laws", [cfg](Rng& rng) {
    auto m = default_module(cfg, 2);
    const std::uint64_t third = m->blocks()[0].bound / 3;
    for (int trial = 0; trial < 4; ++trial) {
      QPDElem a = random_qpd(m, rng, third), b = random_qpd(m, rng, third), c = random_qpd(m, rng, third);
      if (!(qpd_mul(a, b) == qpd_mul(b, a))) return fail("not commutative: a = " + a.to_string() + ", b = " + b.to_string());
      if (!(qpd_mul(qpd_mul(a, b), c) == qpd_mul(a, qpd_mul(b, c)))) return fail("not associative: a = " + a.to_string());
    }
    return pass();
  });
  S.add(pre + "frobenius_examples", [cfg, p](Rng&) {
    auto m = default_module(cfg, 1);
    auto T = m->frobenius_target();
    const std::uint32_t one = static_cast<std::uint32_t>(m->denominator());
    if (!(qpd_frobenius(QPDElem::one(m)) == QPDElem::one(T))) return fail("phi(e_0) != e_0");
    if (!(qpd_frobenius(QPDElem::basis(m, {one / static_cast<std::uint32_t>(p)})) == QPDElem::basis(T, {one})))
      return fail("phi(e_(1/p)) != e_1");
    QPDElem f1 = qpd_frobenius(QPDElem::basis(m, {one}));
    const BaseElem pf = BaseElem::from_q_poly(T->base(), q_factorial(p));
    return check(f1 == QPDElem::basis(T, {one * static_cast<std::uint32_t>(p)}, pf), "phi(e_1) = " + f1.to_string());
  });
  S.add_random(pre + "frobenius_homomorphism", [cfg](Rng& rng) {
    if (cfg.p > 5) throw Skip{"Frobenius on the envelope is run for p <= 5"};
    auto m = default_module(cfg, 1);
    const std::uint64_t half = m->blocks()[0].bound / 2;
    for (int trial = 0; trial < 4; ++trial) {
      QPDElem a = random_qpd(m, rng, half), b = random_qpd(m, rng, half);
      if (!(qpd_frobenius(qpd_mul(a, b)) == qpd_mul(qpd_frobenius(a), qpd_frobenius(b))))
        return fail("a = " + a.to_string() + ", b = " + b.to_string());
    }
    return pass();
  });
  S.add(pre + "gamma_Y", [cfg, p](Rng&) {
    auto m = default_module(cfg, 1);
    GammaOfY g = qpd_gamma_Y(m);
    return check(g.coefficient == q_factorial(p - 1), "coefficient " + g.coefficient.to_string());
  });
  S.add(pre + "power_divisibility", [cfg, p](Rng&) {
    auto m = default_module(cfg, 1);
    for (unsigned n = 0; n <= p * p; ++n) {
      auto c = q_power_divisibility(m, n);
      if (!c.basis_identity || !c.nonzerodivisors) return fail("n = " + std::to_string(n));
    }
    return pass();
  });
  S.add_random(pre + "kunneth", [cfg](Rng& rng) {
    if (cfg.p > 5) throw Skip{"Frobenius on the envelope is run for p <= 5"};
    auto m1 = default_module(cfg, 1);
    auto prod = kunneth_product(m1, m1);
    const std::uint64_t half = m1->blocks()[0].bound / 2;
    for (int trial = 0; trial < 3; ++trial) {
      QPDElem a = random_qpd(m1, rng, half), b = random_qpd(m1, rng, half), c = random_qpd(m1, rng, half),
              d = random_qpd(m1, rng, half);
      QPDElem lhs = qpd_mul(qpd_tensor(prod, a, b), qpd_tensor(prod, c, d));
      QPDElem rhs = qpd_tensor(prod, qpd_mul(a, c), qpd_mul(b, d));
      if (!(lhs == rhs)) return fail("structure constants do not factor: a = " + a.to_string());
      auto T = prod->frobenius_target();
      if (!(qpd_frobenius(qpd_tensor(prod, a, b)) == qpd_tensor(T, qpd_frobenius(a), qpd_frobenius(b))))
        return fail("Frobenius does not factor: a = " + a.to_string());
    }
    return pass();
  });
}

std::string report_witness(const NygaardReport& rep) {
  std::string w;
  for (const auto& f : rep.failures) w += (w.empty() ? "" : "; ") + f;
  if (w.empty())
    w = "divisible=" + std::to_string(rep.divisible) + " image=" + std::to_string(rep.image) +
        " minimal=" + std::to_string(rep.minimal) + " gr_rank=" + std::to_string(rep.gr_rank) + "/" +
        std::to_string(rep.expected_rank);
  return w;
}

void nygaard_suite(Suite& S, const SuiteConfig& cfg) {
  const unsigned long p = cfg.p;
  const std::string pre = "nygaard.p" + str(p) + ".";
  if (p > 3) {
    S.add(pre + "all", [](Rng&) -> Outcome { throw Skip{"Nygaard checks are run for p in {2, 3}"}; });
    return;
  }
  for (unsigned n = 0; n <= 3; ++n) {
    S.add(pre + "r1.n" + str(n), [cfg, n](Rng&) {
      NygaardReport rep = nygaard_verify(default_module(cfg, 1), n);
      return check(rep.ok(), report_witness(rep));
    });
    S.add(pre + "r2.n" + str(n), [cfg, n](Rng&) {
      auto m1 = default_module(cfg, 1);
      NygaardReport rep = nygaard_verify(kunneth_product(m1, m1), n);
      return check(rep.ok(), report_witness(rep));
    });
  }
  for (unsigned n = 0; n <= 2; ++n)
    for (unsigned k = 0; n + k <= 2; ++k)
      S.add(pre + "multiplicative.n" + str(n) + ".k" + str(k), [cfg, n, k](Rng&) {
        auto rep = nygaard_multiplicativity(default_module(cfg, 1), n, k);
        std::string w;
        for (const auto& f : rep.failures) w += (w.empty() ? "" : "; ") + f;
        return check(rep.ok(), w);
      });
  S.add(pre + "conjugate_exhaustive", [cfg, p](Rng&) {
    auto T = default_module(cfg, 1)->frobenius_target();
    const std::uint64_t den = T->denominator();
    for (const auto& j : T->basis()) {
      const unsigned n = static_cast<unsigned>((j[0] + p * den - 1) / (p * den));
      if (!in_conjugate_filtration(*T, j, n)) return fail("e_" + T->degree_string(j));
    }
    return pass();
  });
}

// ------------------------------------------------------------------ qderham

struct DeRhamSetup {
  BaseRingPtr base;
  unsigned N;
  int W, W2;
};

DeRhamSetup derham_setup(const SuiteConfig& cfg) {
  const unsigned need = cfg.N * static_cast<unsigned>(cfg.p - 1) + 1;
  DeRhamSetup s;
  s.base = base_ring_create(cfg.p, cfg.N, std::max(cfg.M, need), 0);
  s.N = cfg.N;
  s.W = cfg.effective_window();
  s.W2 = s.W + static_cast<int>(cfg.p * cfg.p);
  return s;
}

FramedAlgebraPtr algebra(const BaseRingPtr& B, const std::string& ring, const std::string& framing = "") {
  RingPresentation pres = parse_presentation(ring);
  if (!framing.empty()) parse_framing(pres, framing);
  return build_algebra(pres, B);
}

LPoly random_lpoly(const FramedAlgebra& P, Rng& rng, int span) {
  LPoly f(P.base(), P.r());
  for (int k = 0; k < 3; ++k) {
    Monomial e(P.r());
    for (unsigned s = 0; s < P.r(); ++s) e[s] = static_cast<int>(pick(rng, P.generators()[s].laurent ? -span : 0, span));
    std::vector<Int> c(P.base()->M());
    for (auto& v : c) v = pick(rng, 0, 20);
    f.add_term(e, BaseElem(P.base(), c));
  }
  return f;
}

bool same_complex(const ChainComplex& a, const ChainComplex& b) {
  if (a.d.size() != b.d.size()) return false;
  for (std::size_t i = 0; i < a.d.size(); ++i) {
    if (a.d[i].size() != b.d[i].size()) return false;
    for (std::size_t k = 0; k < a.d[i].size(); ++k)
      if (a.d[i][k].row != b.d[i][k].row || a.d[i][k].col != b.d[i][k].col || !(a.d[i][k].value == b.d[i][k].value))
        return false;
  }
  return true;
}

void qderham_suite(Suite& S, const SuiteConfig& cfg) {
  const unsigned long p = cfg.p;
  const std::string pre = "qderham.p" + str(p) + ".";
  if (p > 7) {
    S.add(pre + "all", [](Rng&) -> Outcome { throw Skip{"the cyclotomic chain ring is implemented for p <= 7"}; });
    return;
  }
  const DeRhamSetup D = derham_setup(cfg);
  S.add(pre + "gamma_nabla_examples", [D](Rng&) {
    auto P = algebra(D.base, "x^\xC2\xB1" "1");
    const auto& B = D.base;
    const BaseElem q = BaseElem::q(B);
    for (int n = -4; n <= 4; ++n) {
      LPoly xn = LPoly::monomial(B, {n}, BaseElem::one(B));
      if (!(gamma_s(*P, xn, 0) == LPoly::monomial(B, {n}, BaseElem::q_power(B, n)))) return fail("gamma(x^n), n = " + std::to_string(n));
      LPoly nab = nabla_q_s(*P, xn, 0);
      LPoly expect = LPoly::monomial(P->derived(), {n - 1}, signed_q_int(P->derived(), n));
      if (!(nab == expect)) return fail("nabla(x^n) = " + nab.to_string({"x"}) + " at n = " + std::to_string(n));
    }
    LPoly one = LPoly::constant(B, 1, BaseElem::one(B));
    if (!nabla_q_s(*P, one, 0).is_zero()) return fail("nabla(1) != 0");
    (void)q;
    return pass();
  });
  S.add_random(pre + "twisted_leibniz", [D](Rng& rng) {
    auto P = algebra(D.base, "x^\xC2\xB1" "1, y", "y -> y*(1 + p*x)");
    for (int trial = 0; trial < 4; ++trial) {
      LPoly f = random_lpoly(*P, rng, 3), g = random_lpoly(*P, rng, 3);
      for (unsigned s = 0; s < 2; ++s) {
        LPoly lhs = nabla_q_s(*P, f * g, s);
        LPoly rhs = nabla_q_s(*P, f, s) * g.reduce_to(P->derived()) +
                    gamma_s(*P, f, s).reduce_to(P->derived()) * nabla_q_s(*P, g, s);
        if (!(lhs == rhs)) return fail("f = " + f.to_string(P->names()) + ", g = " + g.to_string(P->names()));
      }
    }
    return pass();
  });
  S.add(pre + "complexes_commute", [D](Rng&) {
    for (const char* ring : {"x, y", "x^\xC2\xB1" "1, y", "x, y, z"}) {
      auto P = algebra(D.base, ring);
      build_complex(P, std::min(D.W, 6), ComplexRoute::Monomial);
      build_complex(P, std::min(D.W, 6), ComplexRoute::Substitution);
    }
    auto F = algebra(D.base, "x, y", "x -> x*(1 + p*y); y -> y + p*x");
    build_complex(F, std::min(D.W, 6));
    return pass();
  });
  S.add(pre + "routes_agree", [D](Rng&) {
    for (const char* ring : {"x", "x^\xC2\xB1" "1", "x, y"}) {
      auto P = algebra(D.base, ring);
      const int W = std::min(D.W, 9);
      KoszulComplex a = build_complex(P, W, ComplexRoute::Monomial), b = build_complex(P, W, ComplexRoute::Substitution);
      for (Specialization s : {Specialization::QToOne, Specialization::QToZeta})
        if (!same_complex(specialize(a, s, D.N), specialize(b, s, D.N))) return fail(std::string(ring) + " at " + to_string(s));
    }
    return pass();
  });
  for (const char* ring : {"x", "x, y", "x^\xC2\xB1" "1"})
    S.add(pre + "specialize_commutes." + print_ring(parse_presentation(ring)), [D, ring](Rng&) {
      auto P = algebra(D.base, ring);
      KoszulComplex C = build_complex(P, D.W);
      for (Specialization s : {Specialization::QToOne, Specialization::QToZeta})
        if (!same_complex(specialize(C, s, D.N), build_specialized(P, D.W, s, D.N))) return fail(to_string(s));
      return pass();
    });
  const std::vector<std::pair<std::string, std::string>> crystalline_cases = {
      {"x", ""}, {"x, y", ""}, {"x^\xC2\xB1" "1", ""}, {"x^\xC2\xB1" "1", "x -> x*(1 + p*x)"}, {"x", "x -> x + p"}};
  for (const auto& [ring, framing] : crystalline_cases)
    S.add(pre + "crystalline." + print_ring(parse_presentation(ring)) + (framing.empty() ? "" : "." + framing),
          [D, ring, framing](Rng&) {
            auto P = algebra(D.base, ring, framing);
            CrystallineReport rep = crystalline_reduction_check(P, std::min(D.W, 2 * static_cast<int>(D.base->p() * D.base->p())));
            std::string w;
            for (const auto& f : rep.failures) w += (w.empty() ? "" : "; ") + f;
            return check(rep.ok() && rep.entries > 0, w);
          });
  S.add(pre + "torus_torsion", [D](Rng&) {
    auto P = algebra(D.base, "x^\xC2\xB1" "1");
    CohomologyTable t = cohomology_invariants(P, Specialization::QToOne, D.N, 1, D.W, D.W2);
    for (const auto& [n, h] : t.stable) {
      const unsigned v = n[0] == 0 ? D.N : std::min(D.N, valuation(Int(n[0]), D.base->p()));
      const bool ok = v == D.N ? (h.free_rank == 1 && h.torsion.empty())
                               : (h.free_rank == 0 && (v == 0 ? h.torsion.empty() : h.torsion == std::vector<unsigned>{v}));
      if (!ok) return fail("H^1 at " + label_string(n) + " is " + h.to_string());
    }
    return check(t.unstable.empty(), "unstable labels inside the window");
  });
  for (const char* ring : {"x", "x, y"}) {
    const unsigned r = static_cast<unsigned>(parse_presentation(ring).generators.size());
    for (unsigned i = 0; i <= r; ++i)
      S.add(pre + "hodge_tate." + print_ring(parse_presentation(ring)) + ".H" + str(i), [D, ring, i](Rng&) {
        auto P = algebra(D.base, ring);
        GradedComparison g = hodge_tate_check(P, i, D.N, D.W);
        std::string w;
        for (const auto& f : g.failures) w += (w.empty() ? "" : "; ") + f;
        return check(g.ok(), w);
      });
  }
  for (unsigned r = 1; r <= 2; ++r)
    for (unsigned i = 0; i <= r; ++i)
      S.add(pre + "cartier.r" + str(r) + ".H" + str(i), [p, D, r, i](Rng&) {
        GradedComparison g = cartier_check(r, p, i, D.W);
        std::string w;
        for (const auto& f : g.failures) w += (w.empty() ? "" : "; ") + f;
        return check(g.ok(), w);
      });
  const std::vector<std::pair<std::string, std::string>> framings = {{"x^\xC2\xB1" "1", "x -> x*(1 + p*x)"},
                                                                     {"x", "x -> x + p"}};
  for (const auto& [ring, framing] : framings)
    S.add(pre + "framing_independence." + print_ring(parse_presentation(ring)) + "." + framing, [D, ring, framing](Rng&) {
      auto P = algebra(D.base, ring), alt = algebra(D.base, ring, framing);
      FramingReport rep = framing_independence_check(P, alt, std::min(D.N, 2u), D.W);
      std::string w;
      for (const auto& f : rep.failures) w += (w.empty() ? "" : "; ") + f;
      return check(rep.ok(), w);
    });
  S.add(pre + "pivot_order", [D](Rng&) {
    for (const char* ring : {"x^\xC2\xB1" "1", "x, y"}) {
      auto P = algebra(D.base, ring);
      for (Specialization s : {Specialization::QToOne, Specialization::QToZeta}) {
        ChainComplex C = specialize(build_complex(P, D.W), s, D.N);
        for (unsigned i = 0; i <= P->r(); ++i) {
          auto a = graded_cohomology(C, i, false), b = graded_cohomology(C, i, true);
          for (const auto& [n, h] : a)
            if (!b.at(n).same_module(h)) return fail(std::string(ring) + " H^" + std::to_string(i) + " at " + label_string(n));
        }
      }
    }
    return pass();
  });
}

using SuiteFn = void (*)(Suite&, const SuiteConfig&);

const std::vector<std::pair<std::string, SuiteFn>>& registry() {
  static const std::vector<std::pair<std::string, SuiteFn>> r = {
      {"delta", delta_suite}, {"witt", witt_suite},       {"qanalog", qanalog_suite},
      {"qpd", qpd_suite},     {"nygaard", nygaard_suite}, {"qderham", qderham_suite}};
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& [name, fn] : registry()) n.push_back(name);
    n.push_back("all");
    return n;
  }();
  return names;
}

std::vector<CaseResult> run_suite(const SuiteConfig& cfg) {
  if (!is_prime(cfg.p)) throw std::invalid_argument("p must be prime");
  if (cfg.N == 0 || cfg.M == 0) throw std::invalid_argument("precisions must be positive");
  Suite S;
  bool found = false;
  for (const auto& [name, fn] : registry())
    if (cfg.suite == "all" || cfg.suite == name) {
      fn(S, cfg);
      found = true;
    }
  if (!found) throw std::invalid_argument("unknown suite " + cfg.suite);
  std::vector<CaseResult> out;
  for (auto& c : S.cases()) {
    CaseResult r;
    r.name = c.name;
    const std::uint64_t seed = case_seed(cfg.seed, c.name);
    Rng rng(seed);
    const auto t0 = std::chrono::steady_clock::now();
    try {
      Outcome o = c.fn(rng);
      r.status = o.ok ? "pass" : "fail";
      r.witness = o.witness;
      r.defect = !o.ok;
    } catch (const Skip& s) {
      r.status = "skip";
      r.witness = s.reason;
    } catch (const Defect& e) {
      r.status = "fail";
      r.defect = true;
      r.witness = std::string(e.what()) + (e.witness().empty() ? "" : ": " + e.witness());
    } catch (const std::exception& e) {
      r.status = "fail";
      r.witness = e.what();
    }
    if (c.randomized) r.witness = "seed=" + std::to_string(seed) + (r.witness.empty() ? "" : "; " + r.witness);
    const auto dt = std::chrono::steady_clock::now() - t0;
    r.millis = cfg.timings ? std::chrono::duration_cast<std::chrono::milliseconds>(dt).count() : 0;
    out.push_back(std::move(r));
  }
  std::sort(out.begin(), out.end(), [](const CaseResult& a, const CaseResult& b) { return a.name < b.name; });
  return out;
}

}  // namespace prism
