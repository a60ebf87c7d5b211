#pragma once

// Free delta-rings Z{x_0..x_(g-1)} = Z[v(i,j)] with v(i,j) = delta^j(x_i),
// the Frobenius lift phi, delta, Joyal's delta_n, distinguished elements of
// the truncated base ring, and the divided-power certificate recursion.

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "prism/base_ring.hpp"
#include "prism/poly.hpp"

namespace prism {

class DeltaRing;
using DeltaRingPtr = std::shared_ptr<const DeltaRing>;

class DeltaRing {
 public:
  static DeltaRingPtr create(unsigned long p, std::vector<std::string> generators, unsigned depth = 4);

  unsigned long p() const { return p_; }
  std::size_t generators() const { return gens_.size(); }
  unsigned depth() const { return depth_; }
  const VarList& vars() const { return vars_; }
  std::size_t index(std::size_t i, unsigned j) const { return i * depth_ + j; }
  std::string describe() const;

 private:
  DeltaRing(unsigned long p, std::vector<std::string> gens, unsigned depth);
  unsigned long p_;
  std::vector<std::string> gens_;
  unsigned depth_;
  VarList vars_;
};

class DeltaPoly {
 public:
  DeltaPoly(DeltaRingPtr ring, IntPoly poly);
  static DeltaPoly constant(const DeltaRingPtr& ring, const Int& c);
  /// delta^j(x_i).
  static DeltaPoly gen(const DeltaRingPtr& ring, std::size_t i, unsigned j = 0);

  const DeltaRingPtr& ring() const { return ring_; }
  const IntPoly& poly() const { return poly_; }
  bool is_zero() const { return poly_.is_zero(); }

  friend DeltaPoly operator+(const DeltaPoly& a, const DeltaPoly& b);
  friend DeltaPoly operator-(const DeltaPoly& a, const DeltaPoly& b);
  friend DeltaPoly operator*(const DeltaPoly& a, const DeltaPoly& b);
  friend DeltaPoly operator*(const Int& s, const DeltaPoly& a);
  friend DeltaPoly operator-(const DeltaPoly& a);
  friend bool operator==(const DeltaPoly& a, const DeltaPoly& b) { return a.poly_ == b.poly_; }
  DeltaPoly pow(std::uint64_t k) const;

  /// Largest j with some v(i,j) present, or -1 for constants.
  int max_level() const;
  std::string to_string() const { return poly_.to_string(); }

 private:
  DeltaRingPtr ring_;
  IntPoly poly_;
};

/// Ring map with v(i,j) -> v(i,j)^p + p v(i,j+1). Throws DepthExceeded when
/// the top level depth-1 occurs.
DeltaPoly phi(const DeltaPoly& f);
/// (phi(f) - f^p) / p, exact.
DeltaPoly delta(const DeltaPoly& f);
/// Joyal's delta_n, solved from phi^n = sum_k p^k delta_k^(p^(n-k)).
DeltaPoly joyal_delta_n(const DeltaPoly& f, unsigned n);
/// x -> (x, delta(x)) respects the W_2 sum and product for (f, g).
bool w2_check(const DeltaPoly& f, const DeltaPoly& g);

/// delta(x^(p^n)) / p^n in the free delta-ring on one generator.
struct PowerDivisibility {
  unsigned n;
  DeltaPoly delta_value;
  DeltaPoly quotient;
};
PowerDivisibility delta_power_divisibility(unsigned long p, unsigned n);

/// Generic Frobenius lift on a polynomial ring with variables laid out as
/// groups of `depth` consecutive levels: index(i,j) = i*depth + j.
template <class Coeff>
SparsePoly<Coeff> phi_levels(const SparsePoly<Coeff>& f, unsigned long p, unsigned depth);

/// delta on the truncated base, via the canonical lift to Z[t]. The result
/// lives in B(p, N-1, M, K); throws PrecisionLoss when N = 1.
BaseElem base_delta(const BaseElem& x);

bool is_distinguished(const BaseElem& d);

struct MembershipResult {
  bool member = false;
  // p = a*d + b*phi(d) when member.
  std::optional<BaseElem> a, b;
};

/// Solves p = a d + b phi(d) as a linear system over Z/p^N of rank 2M -> M.
/// Requires d to be a non-unit and p^N < 2^62.
MembershipResult distinguished_membership_check(const BaseElem& d);

/// gamma_n(x) = x^n/n! written as a Z_(p)-polynomial in x_j = delta^j(x) and
/// z_j = delta^j(phi(x)/p).
struct DividedPowerCertificate {
  unsigned long p;
  unsigned n;
  RatPoly expression;  // over the variables x, dx, ..., z, dz, ...
  /// Units u_k = p!^k k!/(kp)! used at each recursion step, by k.
  std::vector<std::pair<unsigned, Rat>> units;
  bool integral = false;  // all denominators prime to p
  bool verified = false;  // expression equals x^n/n! after substituting z_j
};

/// Throws NonIntegralCoefficient or Mismatch on failure.
DividedPowerCertificate divided_power_certificate(unsigned long p, unsigned n);
/// Certificates for every n <= n_max, sharing the recursion cache.
std::vector<DividedPowerCertificate> divided_power_certificates(unsigned long p, unsigned n_max);

/// u_k = p!^k k! / (kp)!, the unit in gamma_{kp} = u_k gamma_k(gamma_p).
Rat divided_power_unit(unsigned long p, unsigned k);

}  // namespace prism
