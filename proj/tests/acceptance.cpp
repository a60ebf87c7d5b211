// Acceptance gate: one line per criterion, exit 0 iff all pass within budget.

#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"

#include "prism/cli.hpp"
#include "prism/delta.hpp"
#include "prism/qcalc.hpp"
#include "prism/qderham.hpp"
#include "prism/qpd.hpp"
#include "prism/witt.hpp"

using namespace prism;
using testing::Gen;

namespace {

struct Verdict {
  bool ok = true;
  std::string note;
  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      note = what;
    }
  }
};

std::string str(unsigned long v) { return std::to_string(v); }

// ------------------------------------------------------------------ 1

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

bool divisible_by(const IntPoly& f, const Int& d) {
  for (const auto& [e, c] : f.terms())
    if (!mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) return false;
  return true;
}

Verdict delta_axioms() {
  Verdict v;
  Gen g(1);
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    const std::string at = " at p=" + str(p);
    auto R = DeltaRing::create(p, {"x", "y"}, 4);
    v.require(delta(DeltaPoly::constant(R, 0)).is_zero() && delta(DeltaPoly::constant(R, 1)).is_zero(),
              "delta(0), delta(1)" + at);
    for (int trial = 0; trial < 10; ++trial) {
      DeltaPoly f = random_delta(R, g, 1), h = random_delta(R, g, 1);
      DeltaPoly corr(R, exact_div((f.pow(p) + h.pow(p) - (f + h).pow(p)).poly(), Int(p)));
      v.require(delta(f + h) == delta(f) + delta(h) + corr, "sum rule" + at);
      v.require(delta(f * h) == f.pow(p) * delta(h) + h.pow(p) * delta(f) + Int(p) * (delta(f) * delta(h)),
                "product rule" + at);
      v.require(phi(f + h) == phi(f) + phi(h) && phi(f * h) == phi(f) * phi(h), "phi homomorphism" + at);
      v.require(divisible_by((phi(f) - f.pow(p)).poly(), Int(p)), "Frobenius lift mod p" + at);
    }
    DeltaPoly x = DeltaPoly::gen(R, 0);
    DeltaPoly lhs = x;
    for (unsigned n = 0; n <= 3; ++n) {
      DeltaPoly rhs = DeltaPoly::constant(R, 0);
      for (unsigned k = 0; k <= n; ++k)
        rhs = rhs + ipow(Int(p), k) * joyal_delta_n(x, k).pow(ipow(Int(p), n - k).get_ui());
      v.require(lhs == rhs, "Joyal identity n=" + str(n) + at);
      if (n < 3) lhs = phi(lhs);
    }
    for (unsigned n = 0; n <= 3; ++n) {
      PowerDivisibility c = delta_power_divisibility(p, n);
      v.require(divisible_by(c.delta_value.poly(), ipow(Int(p), n)), "delta(x^(p^n)) n=" + str(n) + at);
      v.require(ipow(Int(p), n) * c.quotient == c.delta_value, "quotient n=" + str(n) + at);
    }
  }
  return v;
}

// ------------------------------------------------------------------ 2

Verdict witt_suite() {
  Verdict v;
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    auto vars = make_vars({"x0", "x1", "y0", "y1"});
    auto ring = std::make_shared<const PolyRing>(vars);
    auto var = [&](int i) { return IntPoly::variable(vars, i); };
    WittVec<PolyRing> a(ring, p, {var(0), var(1)}), b(ring, p, {var(2), var(3)});
    IntPoly s1 = var(1) + var(3) + exact_div(var(0).pow(p) + var(2).pow(p) - (var(0) + var(2)).pow(p), Int(p));
    IntPoly m1 = var(0).pow(p) * var(3) + var(2).pow(p) * var(1) + Int(p) * var(1) * var(3);
    WittVec<PolyRing> S = witt_add(a, b), P = witt_mul(a, b);
    v.require(S[0] == var(0) + var(2) && S[1] == s1, "W_2 sum at p=" + str(p));
    v.require(P[0] == var(0) * var(2) && P[1] == m1, "W_2 product at p=" + str(p));
  }
  // Ghost components of the universal polynomials.
  for (unsigned long p : {2UL, 3UL})
    for (unsigned m = 1; m <= 4; ++m) {
      const WittPolys& W = witt_polys(p, m);
      auto ring = std::make_shared<const PolyRing>(W.vars);
      std::vector<IntPoly> xs, ys;
      for (unsigned i = 0; i < m; ++i) {
        xs.push_back(IntPoly::variable(W.vars, static_cast<int>(i)));
        ys.push_back(IntPoly::variable(W.vars, static_cast<int>(m + i)));
      }
      WittVec<PolyRing> a(ring, p, xs), b(ring, p, ys);
      auto ga = ghost(a), gb = ghost(b), gs = ghost(witt_add(a, b)), gm = ghost(witt_mul(a, b));
      for (unsigned i = 0; i < m; ++i)
        v.require(gs[i] == ga[i] + gb[i] && gm[i] == ga[i] * gb[i],
                  "ghost component " + str(i) + " at p=" + str(p) + ", m=" + str(m));
    }
  // x -> (delta_0 x, delta_1 x, delta_2 x) into W_3.
  Gen g(2);
  for (unsigned long p : {2UL, 3UL}) {
    auto R = DeltaRing::create(p, {"x", "y"}, 4);
    auto ring = std::make_shared<const PolyRing>(R->vars());
    auto w = [&](const DeltaPoly& f) {
      std::vector<IntPoly> c;
      for (unsigned n = 0; n < 3; ++n) c.push_back(joyal_delta_n(f, n).poly());
      return WittVec<PolyRing>(ring, p, std::move(c));
    };
    for (int trial = 0; trial < 3; ++trial) {
      DeltaPoly f = random_delta(R, g, 0), h = random_delta(R, g, 0);
      v.require(w(f + h) == witt_add(w(f), w(h)), "w additive at p=" + str(p));
      v.require(w(f * h) == witt_mul(w(f), w(h)), "w multiplicative at p=" + str(p));
    }
  }
  // W_2(F_2[x]/(x^2)).
  auto D = std::make_shared<const DualField>(2);
  auto tx = teichmuller(D, 2, D->epsilon(), 2);
  const auto zero = WittVec<DualField>::zero(D, 2, 2);
  v.require(witt_mul(tx, tx) == zero, "[x]^2 = 0");
  v.require(witt_F_char_p(tx) == zero, "F([x]) = 0");
  std::size_t nonunits = 0, killed = 0;
  for (std::uint64_t a = 0; a < D->size(); ++a)
    for (std::uint64_t b = 0; b < D->size(); ++b) {
      WittVec<DualField> y(D, 2, {D->element(a), D->element(b)});
      v.require(witt_mul(tx, witt_V(y)) == zero, "[x] V(y) = 0");
      if (D->is_unit(y[0])) continue;
      ++nonunits;
      bool annihilated = false;
      for (std::uint64_t c = 0; c < D->size() && !annihilated; ++c)
        for (std::uint64_t d = 0; d < D->size() && !annihilated; ++d) {
          WittVec<DualField> z(D, 2, {D->element(c), D->element(d)});
          annihilated = !(z == zero) && witt_mul(y, z) == zero;
        }
      if (annihilated) ++killed;
    }
  v.require(nonunits == 8 && killed == 8, "every non-unit of W_2(F_2[x]/(x^2)) is a zero divisor");
  ZeroDivisorReport r = no_nonzerodivisor_witness(2, 2);
  v.require(r.size == 16 && r.nonunits == 8 && r.every_nonunit_annihilated, "no_nonzerodivisor_witness(2, 2)");
  return v;
}

// ------------------------------------------------------------------ 3

Verdict divided_powers() {
  Verdict v;
  for (unsigned long p : {2UL, 3UL}) {
    const unsigned top = static_cast<unsigned>(p * p * p);
    auto certs = divided_power_certificates(p, top);
    std::set<unsigned> seen;
    for (const auto& c : certs) {
      seen.insert(c.n);
      v.require(c.integral && c.verified, "certificate n=" + str(c.n) + " at p=" + str(p));
    }
    for (unsigned n = 1; n <= top; ++n) v.require(seen.count(n) == 1, "missing n=" + str(n) + " at p=" + str(p));
  }
  return v;
}

// ------------------------------------------------------------------ 4

Verdict q_factorials() {
  Verdict v;
  for (unsigned long p : {2UL, 3UL, 5UL}) {
    for (unsigned long m = 0; m <= 8; ++m) {
      UnitCertificate c = verify_frobenius_factorial(p, m);
      UPoly back = c.cofactor * testing::q_to_power(testing::q_factorial_oracle(m), p) *
                   testing::q_int_oracle(p).pow(m);
      Int at_one = testing::factorial(m * p) / (testing::factorial(m) * ipow(Int(p), m));
      v.require(c.unit && back == testing::q_factorial_oracle(m * p) && c.value_at_one == at_one &&
                    testing::vp(at_one, p) == 0,
                "[mp]_q! at p=" + str(p) + ", m=" + str(m));
    }
    for (unsigned K = 1; K <= 2; ++K) {
      const unsigned long den = ipow(Int(p), K).get_ui();
      for (unsigned long num = 0; num <= (p + 1) * den; ++num) {
        FloorFactorial f = verify_floor_factorial(p, num, K);
        v.require(f.floor_i == num / den && f.floor_ip == num * p / den && f.cert.unit &&
                      f.cert.cofactor * testing::q_factorial_oracle(f.floor_i * p) ==
                          testing::q_factorial_oracle(f.floor_ip),
                  "floor factorial " + str(num) + "/" + str(den));
      }
    }
  }
  return v;
}

// ------------------------------------------------------------------ 5

Verdict nygaard() {
  Verdict v;
  for (unsigned long p : {2UL, 3UL}) {
    auto B = base_ring_create(p, 3, 4, 2);
    auto m = QPDModule::create(B, 1, p * p + p);
    auto m2 = kunneth_product(m, m);
    const std::uint64_t den = m->denominator();
    for (unsigned n = 0; n <= 3; ++n) {
      const std::string at = " at p=" + str(p) + ", n=" + str(n);
      NygaardReport r1 = nygaard_verify(m, n);
      v.require(r1.divisible, "(a) divisibility" + at);
      v.require(r1.image, "(b) image" + at);
      v.require(r1.minimal, "(c) minimality" + at);
      v.require(r1.ok(), "graded rank" + at);
      std::set<Exponents> got(r1.image_degrees.begin(), r1.image_degrees.end());
      std::set<Exponents> below;
      for (const auto& i : m->basis())
        if (i[0] * p < p * (n + 1) * den) below.insert({static_cast<std::uint32_t>(i[0] * p)});
      v.require(got == below, "image degrees differ from {j : j < p(n+1)}" + at);
      v.require(got == testing::nygaard_image_oracle(*m, n), "image degrees differ from oracle" + at);

      NygaardReport r2 = nygaard_verify(m2, n);
      v.require(r2.ok(), "r=2" + at);
      std::set<Exponents> got2(r2.image_degrees.begin(), r2.image_degrees.end());
      v.require(got2 == testing::nygaard_image_oracle(*m2, n), "r=2 image degrees differ from oracle" + at);
      for (const auto& i : m2->basis()) {
        const std::uint64_t floors = m2->floor_of(i[0]) + m2->floor_of(i[1]);
        v.require(nygaard_power(*m2, i, n) == (floors >= n ? 0u : n - floors), "r=2 generator power" + at);
      }
    }
  }
  return v;
}

// ------------------------------------------------------------------ 6-9

BaseRingPtr base(unsigned long p, unsigned N) { return base_ring_create(p, N, N * static_cast<unsigned>(p - 1) + 1, 0); }

FramedAlgebraPtr algebra(const BaseRingPtr& B, const std::string& ring, const std::string& framing = "") {
  RingPresentation pres = parse_presentation(ring);
  if (!framing.empty()) parse_framing(pres, framing);
  return build_algebra(pres, B);
}

const std::string kTorus = "x^\xC2\xB1" "1";

Verdict crystalline() {
  Verdict v;
  for (unsigned long p : {2UL, 3UL}) {
    auto B = base(p, 2);
    const int W = static_cast<int>(2 * p * p);
    for (auto [ring, framing] : std::vector<std::pair<std::string, std::string>>{
             {"x", ""}, {"x, y", ""}, {kTorus, ""}, {kTorus, "x -> x*(1 + p*x)"}}) {
      CrystallineReport r = crystalline_reduction_check(algebra(B, ring, framing), W);
      v.require(r.ok() && r.entries > 0, ring + " " + framing + " at p=" + str(p) +
                                             (r.failures.empty() ? "" : ": " + r.failures.front()));
    }
  }
  return v;
}

void compare_graded(Verdict& v, const GradedComparison& g, unsigned long p, const std::string& what) {
  v.require(g.ok(), what + (g.failures.empty() ? "" : ": " + g.failures.front()));
  for (const auto& [n, h] : g.actual) {
    v.require(h.torsion.empty(), what + ": torsion at " + label_string(n));
    v.require(h.free_rank == testing::twisted_rank(n, g.degree, p), what + ": rank at " + label_string(n));
  }
  v.require(!g.actual.empty(), what + ": empty stable core");
}

Verdict hodge_tate() {
  Verdict v;
  for (unsigned long p : {2UL, 3UL}) {
    auto B = base(p, 2);
    const int W = static_cast<int>(2 * p * p);
    for (const std::string ring : {std::string("x"), std::string("x, y")}) {
      auto P = algebra(B, ring);
      for (unsigned i = 0; i <= P->r(); ++i) {
        GradedComparison g = hodge_tate_check(P, i, 2, W);
        compare_graded(v, g, p, "H^" + str(i) + " of " + ring + " at p=" + str(p));
        v.require(g.twist == -static_cast<int>(i), "twist of H^" + str(i));
      }
    }
  }
  return v;
}

Verdict cartier() {
  Verdict v;
  for (unsigned long p : {2UL, 3UL})
    for (unsigned r = 1; r <= 2; ++r)
      for (unsigned i = 0; i <= r; ++i)
        compare_graded(v, cartier_check(r, p, i, static_cast<int>(2 * p * p)), p,
                       "H^" + str(i) + " of F_" + str(p) + "[" + str(r) + " vars]");
  return v;
}

Verdict framings() {
  Verdict v;
  auto B = base(3, 2);
  const int W = 18;
  for (auto [ring, framing] :
       std::vector<std::pair<std::string, std::string>>{{kTorus, "x -> x*(1 + p*x)"}, {"x", "x -> x + p"}}) {
    FramingReport r = framing_independence_check(algebra(B, ring), algebra(B, ring, framing), 2, W);
    v.require(r.ok(), ring + " vs " + framing + (r.failures.empty() ? "" : ": " + r.failures.front()));
    std::set<std::pair<int, unsigned>> rows;
    for (const auto& row : r.rows) {
      rows.insert({static_cast<int>(row.at), row.degree});
      v.require(!row.first.stable.empty(), ring + " H^" + str(row.degree) + ": empty stable core");
      v.require(row.equal && row.first.stable == row.second.stable,
                ring + " H^" + str(row.degree) + " at " + to_string(row.at));
    }
    v.require(rows.size() == 4, ring + ": expected H^0, H^1 at both specializations");
  }
  return v;
}

// ------------------------------------------------------------------ 10, 11

Verdict tate_twists() {
  Verdict v;
  for (unsigned long q : {2UL, 3UL, 4UL, 9UL})
    for (unsigned m = 1; m <= 3; ++m)
      for (unsigned n = 0; n <= 1 && n + 1 <= m; ++n) {
        TateTwistResult t = tate_twist_invariants(q, m, n);
        testing::TateOracle o = testing::tate_twist_oracle(q, m, n);
        v.require(testing::cyclic_type(t.h0, t.length) == o.h0 && testing::cyclic_type(t.h1, t.length) == o.h1,
                  "q=" + str(q) + ", m=" + str(m) + ", n=" + str(n));
      }
  return v;
}

Verdict determinism() {
  Verdict v;
  const std::vector<std::string> args = {"verify", "--suite", "all", "--seed", "7"};
  std::ostringstream a, b, ea, eb;
  const int ca = run_cli(args, a, ea), cb = run_cli(args, b, eb);
  v.require(ca == cb, "exit codes differ");
  v.require(ca == 0, "verify --suite all exited " + std::to_string(ca));
  v.require(!a.str().empty() && a.str() == b.str(), "reports differ");
  return v;
}

struct Criterion {
  const char* name;
  double budget;  // seconds, 0 for none
  std::function<Verdict()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all = {
      {"delta-ring axioms, p in {2,3,5}", 5, delta_axioms},
      {"Witt vectors: W_2 formulas, ghosts, (delta_0,delta_1,delta_2), W_2(F_2[x]/x^2)", 10, witt_suite},
      {"divided power certificates, n <= p^3, p in {2,3}", 30, divided_powers},
      {"q-factorial unit certificates and floor factorials", 10, q_factorials},
      {"Nygaard filtration, K=2, D=p^2+p, n <= 3, r in {1,2}", 60, nygaard},
      {"crystalline reduction: A^1, A^2, G_m, substituted framing", 10, crystalline},
      {"Hodge-Tate: A^1, A^2 over Z[zeta_p]/p^2", 60, hodge_tate},
      {"Cartier: F_p[x], F_p[x,y]", 10, cartier},
      {"framing independence at p=3, N=2", 120, framings},
      {"Z_p(n) against enumeration", 10, tate_twists},
      {"determinism of verify --suite all", 0, determinism},
  };
  int failed = 0;
  for (std::size_t k = 0; k < all.size(); ++k) {
    const auto& c = all[k];
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v.ok = false;
      v.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (v.ok && c.budget > 0 && secs > c.budget) {
      v.ok = false;
      v.note = "over budget";
    }
    if (!v.ok) ++failed;
    char budget[32];
    if (c.budget > 0)
      std::snprintf(budget, sizeof budget, "< %gs", c.budget);
    else
      std::snprintf(budget, sizeof budget, "no budget");
    std::printf("%s  %2zu  %-78s %8.2fs  (%s)%s%s\n", v.ok ? "PASS" : "FAIL", k + 1, c.name, secs, budget,
                v.note.empty() ? "" : "  ", v.note.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(all.size()) - failed, all.size());
  return failed == 0 ? 0 : 1;
}
