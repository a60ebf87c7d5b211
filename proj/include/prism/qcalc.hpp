#pragma once

// q-integers, q-factorials and q-binomials in Z[q], the Frobenius
// factorial identities, and the q-divided power operator
//   gamma(x) = phi(x)/[p]_q - delta(x)
// on Z[q] with phi(q) = q^p.

#include <string>

#include "prism/poly.hpp"

namespace prism {

UPoly q_int(unsigned long n);
/// Cached; safe for concurrent use.
const UPoly& q_factorial(unsigned long n);
/// [a]!/([b]! [a-b]!), division asserted exact (Defect otherwise).
UPoly q_binomial(unsigned long a, unsigned long b);

/// phi on Z[q]: q -> q^p.
UPoly q_frobenius(const UPoly& f, unsigned long p);

struct UnitCertificate {
  UPoly cofactor;
  Int value_at_one;  // the cofactor at q = 1
  bool unit = false;  // p does not divide value_at_one
};

/// u = [mp]_q! / (phi([m]_q!) [p]_q^m); throws Defect unless exact with u(1)
/// prime to p.
UnitCertificate verify_frobenius_factorial(unsigned long p, unsigned long m);

/// For i = numerator / p^K: the cofactor [floor(ip)]_q! / [floor(i) p]_q!
/// (always the larger over the smaller). Throws Defect unless it is a unit.
struct FloorFactorial {
  unsigned long floor_i, floor_ip;
  UnitCertificate cert;
};
FloorFactorial verify_floor_factorial(unsigned long p, unsigned long numerator, unsigned K);

/// delta on Z[q] with delta(q) = 0: (phi(f) - f^p)/p.
UPoly q_delta(const UPoly& f, unsigned long p);

/// gamma(x); throws NotDivisible if [p]_q does not divide phi(x).
UPoly q_gamma(const UPoly& x, unsigned long p);

/// gamma(x+y) = gamma(x) + gamma(y) + ((x+y)^p - x^p - y^p)/p.
bool gamma_sum_identity(const UPoly& x, const UPoly& y, unsigned long p);
/// gamma(f x) = phi(f) gamma(x) - x^p delta(f).
bool gamma_scale_identity(const UPoly& f, const UPoly& x, unsigned long p);

/// phi([m]_q!) is a nonzerodivisor in Z[q]/([p]_q), checked two ways: the
/// remainder modulo the monic [p]_q is nonzero, and the gcd over Q is 1.
struct NonZeroDivisorCheck {
  unsigned long m;
  UPoly remainder;       // phi([m]_q!) mod [p]_q
  UPoly gcd_over_q;      // monic gcd, normalized to a primitive integer polynomial
  bool nonzerodivisor = false;
};
NonZeroDivisorCheck frobenius_factorial_nonzerodivisor(unsigned long p, unsigned long m);

/// gcd over Q, returned as a primitive integer polynomial with positive
/// leading coefficient.
UPoly gcd_over_rationals(const UPoly& a, const UPoly& b);

}  // namespace prism
