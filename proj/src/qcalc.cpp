#include "prism/qcalc.hpp"

#include <map>
#include <mutex>

namespace prism {

UPoly q_int(unsigned long n) {
  std::vector<Int> c(n, Int(1));
  return UPoly(std::move(c));
}

const UPoly& q_factorial(unsigned long n) {
  static std::mutex mu;
  static std::vector<std::unique_ptr<UPoly>> table;
  std::lock_guard<std::mutex> lock(mu);
  if (table.empty()) table.push_back(std::make_unique<UPoly>(1));
  while (table.size() <= n) {
    const unsigned long k = table.size();
    // [k]_q = (q^k - 1)/(q - 1), produced by exact division.
    UPoly num = UPoly::monomial(1, k) - UPoly(1);
    UPoly qk = exact_div(num, UPoly(std::vector<Int>{Int(-1), Int(1)}));
    table.push_back(std::make_unique<UPoly>(*table.back() * qk));
  }
  return *table[n];
}

UPoly q_binomial(unsigned long a, unsigned long b) {
  if (b > a) throw std::invalid_argument("q_binomial: b > a");
  try {
    return exact_div(q_factorial(a), q_factorial(b) * q_factorial(a - b));
  } catch (const NotDivisible& e) {
    throw Defect("q-binomial [" + std::to_string(a) + " choose " + std::to_string(b) + "] is not integral",
                 e.witness());
  }
}

UPoly q_frobenius(const UPoly& f, unsigned long p) { return f.compose_power(p); }

namespace {

UnitCertificate certify_unit(UPoly cofactor, unsigned long p) {
  UnitCertificate c;
  c.value_at_one = cofactor.eval(Int(1));
  c.unit = !mpz_divisible_ui_p(c.value_at_one.get_mpz_t(), p);
  c.cofactor = std::move(cofactor);
  return c;
}

}  // namespace

UnitCertificate verify_frobenius_factorial(unsigned long p, unsigned long m) {
  UPoly denom = q_frobenius(q_factorial(m), p) * q_int(p).pow(m);
  UPoly u;
  try {
    u = exact_div(q_factorial(m * p), denom);
  } catch (const NotDivisible& e) {
    throw Defect("[" + std::to_string(m * p) + "]_q! is not divisible by phi([m]_q!) [p]_q^m", e.witness());
  }
  UnitCertificate c = certify_unit(std::move(u), p);
  if (!c.unit) throw Defect("Frobenius factorial cofactor is not a unit", c.cofactor.to_string());
  return c;
}

FloorFactorial verify_floor_factorial(unsigned long p, unsigned long numerator, unsigned K) {
  const unsigned long denom = ipow(Int(p), K).get_ui();
  FloorFactorial out;
  out.floor_i = numerator / denom;
  out.floor_ip = numerator * p / denom;
  const unsigned long lo = out.floor_i * p;
  if (out.floor_ip < lo) throw Defect("floor(ip) < floor(i) p");
  UPoly v;
  try {
    v = exact_div(q_factorial(out.floor_ip), q_factorial(lo));
  } catch (const NotDivisible& e) {
    throw Defect("floor factorial division is inexact", e.witness());
  }
  out.cert = certify_unit(std::move(v), p);
  if (!out.cert.unit) throw Defect("floor factorial cofactor is not a unit", out.cert.cofactor.to_string());
  return out;
}

UPoly q_delta(const UPoly& f, unsigned long p) {
  UPoly num = q_frobenius(f, p) - f.pow(p);
  std::vector<Int> c = num.coeffs();
  for (auto& v : c) {
    if (!mpz_divisible_ui_p(v.get_mpz_t(), p)) throw Defect("phi(f) - f^p is not divisible by p", f.to_string());
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
  }
  return UPoly(std::move(c));
}

UPoly q_gamma(const UPoly& x, unsigned long p) {
  UPoly phix = q_frobenius(x, p);
  UDivision d = divmod(phix, q_int(p));
  if (!d.exact)
    throw NotDivisible("phi(x) is not divisible by [p]_q; x admits no q-divided power", d.remainder.to_string());
  return d.quotient - q_delta(x, p);
}

bool gamma_sum_identity(const UPoly& x, const UPoly& y, unsigned long p) {
  UPoly carry = (x + y).pow(p) - x.pow(p) - y.pow(p);
  std::vector<Int> c = carry.coeffs();
  for (auto& v : c) mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
  return q_gamma(x + y, p) == q_gamma(x, p) + q_gamma(y, p) + UPoly(std::move(c));
}

bool gamma_scale_identity(const UPoly& f, const UPoly& x, unsigned long p) {
  return q_gamma(f * x, p) == q_frobenius(f, p) * q_gamma(x, p) - x.pow(p) * q_delta(f, p);
}

namespace {

using QPoly = std::vector<Rat>;

void trim(QPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

QPoly rat_mod(QPoly a, const QPoly& b) {
  trim(a);
  while (a.size() >= b.size() && !a.empty()) {
    Rat f = a.back() / b.back();
    const std::size_t shift = a.size() - b.size();
    for (std::size_t j = 0; j < b.size(); ++j) a[shift + j] -= f * b[j];
    trim(a);
  }
  return a;
}

}  // namespace

UPoly gcd_over_rationals(const UPoly& a, const UPoly& b) {
  QPoly x, y;
  for (const auto& c : a.coeffs()) x.emplace_back(c);
  for (const auto& c : b.coeffs()) y.emplace_back(c);
  trim(x);
  trim(y);
  while (!y.empty()) {
    QPoly r = rat_mod(x, y);
    x = std::move(y);
    y = std::move(r);
  }
  if (x.empty()) return UPoly();
  // Clear denominators and divide by the content.
  Int l = 1;
  for (const auto& c : x) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Int> out;
  Int g = 0;
  for (const auto& c : x) {
    Rat s = c * Rat(l);
    out.push_back(s.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), out.back().get_mpz_t());
  }
  for (auto& c : out) c /= g;
  if (out.back() < 0)
    for (auto& c : out) c = -c;
  return UPoly(std::move(out));
}

NonZeroDivisorCheck frobenius_factorial_nonzerodivisor(unsigned long p, unsigned long m) {
  NonZeroDivisorCheck out;
  out.m = m;
  UPoly f = q_frobenius(q_factorial(m), p);
  out.remainder = divmod(f, q_int(p)).remainder;
  out.gcd_over_q = gcd_over_rationals(f, q_int(p));
  // Z[q]/([p]_q) is a domain, so nonzero means nonzerodivisor.
  out.nonzerodivisor = !out.remainder.is_zero() && out.gcd_over_q == UPoly(1);
  return out;
}

}  // namespace prism
