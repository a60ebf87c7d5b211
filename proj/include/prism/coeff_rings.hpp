#pragma once

// Coefficient rings for Witt vectors. Each ring is a small value type with a
// nested Elem and the operations zero/one/from_int/add/sub/mul/eq.

#include <cstdint>
#include <string>
#include <vector>

#include "prism/poly.hpp"

namespace prism {

/// The integers.
class IntegerRing {
 public:
  using Elem = Int;
  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(const Int& c) const { return c; }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  std::string to_string(const Elem& a) const { return a.get_str(); }
  std::string describe() const { return "Z"; }
  bool operator==(const IntegerRing&) const { return true; }
};

/// Z/p^N with canonical residues.
class ZmodRing {
 public:
  using Elem = Int;
  ZmodRing(unsigned long p, unsigned N);
  unsigned long p() const { return p_; }
  unsigned N() const { return N_; }
  const Int& modulus() const { return mod_; }
  Elem zero() const { return 0; }
  Elem one() const { return mod_ == 1 ? Int(0) : Int(1); }
  Elem from_int(const Int& c) const;
  Elem add(const Elem& a, const Elem& b) const { return from_int(a + b); }
  Elem sub(const Elem& a, const Elem& b) const { return from_int(a - b); }
  Elem mul(const Elem& a, const Elem& b) const { return from_int(a * b); }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  bool is_unit(const Elem& a) const { return !mpz_divisible_ui_p(a.get_mpz_t(), p_); }
  std::string to_string(const Elem& a) const { return a.get_str(); }
  std::string describe() const;
  bool operator==(const ZmodRing& o) const { return p_ == o.p_ && N_ == o.N_; }

 private:
  unsigned long p_;
  unsigned N_;
  Int mod_;
};

/// Integer polynomials in a fixed variable list.
class PolyRing {
 public:
  using Elem = IntPoly;
  explicit PolyRing(VarList vars) : vars_(std::move(vars)) {}
  const VarList& vars() const { return vars_; }
  Elem zero() const { return IntPoly(vars_); }
  Elem one() const { return IntPoly::constant(vars_, 1); }
  Elem from_int(const Int& c) const { return IntPoly::constant(vars_, c); }
  Elem add(const Elem& a, const Elem& b) const { return a + b; }
  Elem sub(const Elem& a, const Elem& b) const { return a - b; }
  Elem mul(const Elem& a, const Elem& b) const { return a * b; }
  bool eq(const Elem& a, const Elem& b) const { return a == b; }
  std::string to_string(const Elem& a) const { return a.to_string(); }
  std::string describe() const;
  bool operator==(const PolyRing& o) const { return *vars_ == *o.vars_; }

 private:
  VarList vars_;
};

/// GF(p^k) = F_p[x]/(f) for a monic irreducible f of degree k. Elements are
/// encoded as integers in [0, q) whose base-p digits are the coefficients.
class GaloisField {
 public:
  using Elem = std::uint32_t;
  /// q must be a prime power; fixed moduli x^2+x+1 for q=4 and x^2+1 for q=9,
  /// otherwise the lexicographically first monic irreducible polynomial.
  explicit GaloisField(unsigned long q);

  unsigned long p() const { return p_; }
  unsigned k() const { return k_; }
  unsigned long size() const { return q_; }
  const std::vector<unsigned>& modulus() const { return f_; }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem from_int(const Int& c) const;
  Elem add(Elem a, Elem b) const;
  Elem sub(Elem a, Elem b) const;
  Elem mul(Elem a, Elem b) const;
  Elem pow(Elem a, std::uint64_t e) const;
  Elem inverse(Elem a) const;
  bool eq(Elem a, Elem b) const { return a == b; }
  bool is_unit(Elem a) const { return a != 0; }
  Elem frobenius(Elem a) const { return pow(a, p_); }
  /// The unique b with b^p = a.
  Elem pth_root(Elem a) const;
  /// The class of x.
  Elem generator() const { return k_ > 1 ? static_cast<Elem>(p_) : 1; }
  Elem element(std::uint64_t index) const { return static_cast<Elem>(index); }
  std::string to_string(Elem a) const;
  std::string describe() const;
  bool operator==(const GaloisField& o) const { return q_ == o.q_ && f_ == o.f_; }

 private:
  std::vector<unsigned> digits(Elem a) const;
  Elem encode(const std::vector<unsigned>& d) const;

  unsigned long p_;
  unsigned k_;
  unsigned long q_;
  std::vector<unsigned> f_;  // monic modulus, low degree first, size k+1
};

/// GF(q)[e]/(e^2). Elements a + b e are encoded as a + q b.
class DualField {
 public:
  using Elem = std::uint32_t;
  explicit DualField(unsigned long q) : F_(q) {}

  const GaloisField& field() const { return F_; }
  unsigned long p() const { return F_.p(); }
  unsigned long size() const { return F_.size() * F_.size(); }

  Elem make(GaloisField::Elem a, GaloisField::Elem b) const {
    return static_cast<Elem>(a + F_.size() * b);
  }
  GaloisField::Elem re(Elem x) const { return static_cast<GaloisField::Elem>(x % F_.size()); }
  GaloisField::Elem eps(Elem x) const { return static_cast<GaloisField::Elem>(x / F_.size()); }

  Elem zero() const { return 0; }
  Elem one() const { return 1; }
  Elem epsilon() const { return make(0, 1); }
  Elem from_int(const Int& c) const { return make(F_.from_int(c), 0); }
  Elem add(Elem a, Elem b) const { return make(F_.add(re(a), re(b)), F_.add(eps(a), eps(b))); }
  Elem sub(Elem a, Elem b) const { return make(F_.sub(re(a), re(b)), F_.sub(eps(a), eps(b))); }
  Elem mul(Elem a, Elem b) const;
  Elem pow(Elem a, std::uint64_t e) const;
  bool eq(Elem a, Elem b) const { return a == b; }
  bool is_unit(Elem a) const { return re(a) != 0; }
  Elem frobenius(Elem a) const { return pow(a, F_.p()); }
  Elem element(std::uint64_t index) const { return static_cast<Elem>(index); }
  std::string to_string(Elem a) const;
  std::string describe() const;
  bool operator==(const DualField& o) const { return F_ == o.F_; }

 private:
  GaloisField F_;
};

/// Splits q = p^k; throws std::invalid_argument if q is not a prime power.
std::pair<unsigned long, unsigned> prime_power(unsigned long q);

}  // namespace prism
