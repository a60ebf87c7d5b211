#pragma once

// The truncated q-deformation ring B(p,N,M,K) = (Z/p^N)[t]/((t-1)^M) with
// q = t^(p^K). It is a finite-precision stand-in for Z_p[[q-1]] (K = 0) and
// for the perfected base Z_p[q^(1/p^inf)]^ at root depth K.
//
// Elements are stored in the (t-1)-power basis. The truncation ideal is
// ((t-1)^M); since q-1 lies in (t-1) this is finer than ((q-1)^M).

#include <memory>
#include <string>
#include <vector>

#include "prism/poly.hpp"

namespace prism {

class BaseRing;
using BaseRingPtr = std::shared_ptr<const BaseRing>;
class BaseElem;

class BaseRing : public std::enable_shared_from_this<BaseRing> {
 public:
  unsigned long p() const { return p_; }
  unsigned N() const { return N_; }
  unsigned M() const { return M_; }
  unsigned K() const { return K_; }
  const Int& modulus() const { return modulus_; }

  /// Number of elements, p^(N*M).
  Int cardinality() const;

  bool operator==(const BaseRing& o) const {
    return p_ == o.p_ && N_ == o.N_ && M_ == o.M_ && K_ == o.K_;
  }

  std::string describe() const;

  // Cached (t-1)-basis coefficients of q = t^(p^K).
  const std::vector<Int>& q_coeffs() const { return q_coeffs_; }
  // Cached (t-1)-basis coefficients of t^p - 1, the image of t-1 under Frobenius.
  const std::vector<Int>& frob_t_minus_one() const { return frob_tm1_; }

 private:
  friend BaseRingPtr base_ring_create(unsigned long, unsigned, unsigned, unsigned);
  BaseRing(unsigned long p, unsigned N, unsigned M, unsigned K);

  unsigned long p_;
  unsigned N_, M_, K_;
  Int modulus_;
  std::vector<Int> q_coeffs_;
  std::vector<Int> frob_tm1_;
};

/// Throws std::invalid_argument for a non-prime p or zero precision.
BaseRingPtr base_ring_create(unsigned long p, unsigned N, unsigned M, unsigned K);

class BaseElem {
 public:
  BaseElem() = default;
  explicit BaseElem(BaseRingPtr ring);
  BaseElem(BaseRingPtr ring, const Int& c);
  BaseElem(BaseRingPtr ring, std::vector<Int> coeffs);

  static BaseElem zero(BaseRingPtr ring) { return BaseElem(std::move(ring)); }
  static BaseElem one(BaseRingPtr ring) { return BaseElem(std::move(ring), Int(1)); }
  static BaseElem q(const BaseRingPtr& ring);
  static BaseElem t(const BaseRingPtr& ring);
  /// q^k for an integer k (negative allowed: q is a unit).
  static BaseElem q_power(const BaseRingPtr& ring, long k);
  /// t^e expanded in the (t-1)-basis, e >= 0.
  static BaseElem t_power(const BaseRingPtr& ring, unsigned long e);
  /// Image of a polynomial in t.
  static BaseElem from_t_poly(const BaseRingPtr& ring, const UPoly& f);
  /// Image of a polynomial in q (q = t^(p^K)).
  static BaseElem from_q_poly(const BaseRingPtr& ring, const UPoly& f);

  const BaseRingPtr& ring() const { return ring_; }
  const std::vector<Int>& coeffs() const { return c_; }
  const Int& operator[](std::size_t j) const { return c_[j]; }

  bool is_zero() const;
  /// True iff the constant (t-1)-coefficient is invertible mod p.
  bool is_unit() const;
  /// Largest v with x in ((t-1)^v); M for zero.
  unsigned t_adic_valuation() const;

  BaseElem& operator+=(const BaseElem& o);
  BaseElem& operator-=(const BaseElem& o);
  BaseElem& operator*=(const BaseElem& o);
  BaseElem& operator*=(const Int& s);
  friend BaseElem operator+(BaseElem a, const BaseElem& b) { return a += b; }
  friend BaseElem operator-(BaseElem a, const BaseElem& b) { return a -= b; }
  friend BaseElem operator*(BaseElem a, const BaseElem& b) { return a *= b; }
  friend BaseElem operator*(BaseElem a, const Int& s) { return a *= s; }
  friend BaseElem operator*(const Int& s, BaseElem a) { return a *= s; }
  friend BaseElem operator-(const BaseElem& a);
  friend bool operator==(const BaseElem& a, const BaseElem& b);

  BaseElem pow(std::uint64_t k) const;
  /// Inverse of a unit; throws std::domain_error otherwise.
  BaseElem inverse() const;

  /// Canonical lift to Z[t]: sum of a_j (t-1)^j with a_j in [0, p^N).
  UPoly lift() const;

  /// Exact division by t-1. The quotient is only determined modulo
  /// (t-1)^(M-1), so it lives in B(p,N,M-1,K). Throws NotDivisible if the
  /// constant coefficient is nonzero.
  BaseElem divide_by_t_minus_one() const;

  /// Reduction to a coarser ring B(p,N',M',K) with N' <= N, M' <= M.
  BaseElem reduce_to(const BaseRingPtr& coarser) const;

  std::string to_string() const;

 private:
  void normalize();
  void check_same(const BaseElem& o) const;

  BaseRingPtr ring_;
  std::vector<Int> c_;
};

/// The ring endomorphism t -> t^p (so q -> q^p).
BaseElem base_frobenius(const BaseElem& x);

/// q-integer [n]_q = 1 + q + ... + q^(n-1) inside B.
BaseElem base_q_int(const BaseRingPtr& ring, unsigned long n);

/// [n]_{q^(1/p^j)} for j <= K, i.e. [n] evaluated at t^(p^(K-j)).
BaseElem base_q_root_int(const BaseRingPtr& ring, unsigned long n, unsigned j);

bool is_unit(const BaseElem& x);

}  // namespace prism
