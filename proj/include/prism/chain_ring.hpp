#pragma once

// Finite chain rings: Z/p^N (uniformizer p) and Z[zeta_p]/p^N (uniformizer
// zeta_p - 1). Elements of the cyclotomic ring are stored in the basis of
// powers of pi = u - 1, where the Eisenstein relation
//   pi^(p-1) = -sum_{j<p-1} binom(p, j+1) pi^j
// makes the valuation a closed-form minimum over the coordinates.

#include <array>
#include <cstdint>
#include <string>

#include "prism/poly.hpp"

namespace prism {

struct ChainElem {
  static constexpr std::size_t kMaxDegree = 6;
  std::array<std::int64_t, kMaxDegree> c{};
  friend bool operator==(const ChainElem&, const ChainElem&) = default;
};

class ChainRing {
 public:
  enum class Kind { Zmod, Cyclotomic };

  static ChainRing zmod(unsigned long p, unsigned N);
  static ChainRing cyclotomic(unsigned long p, unsigned N);

  Kind kind() const { return kind_; }
  unsigned long p() const { return p_; }
  unsigned N() const { return N_; }
  /// Rank over Z/p^N: 1 or p-1.
  unsigned degree() const { return d_; }
  /// e with pi^e = 0 and pi^(e-1) != 0.
  unsigned nilpotency() const { return d_ * N_; }
  std::int64_t modulus() const { return mod_; }
  std::string describe() const;

  friend bool operator==(const ChainRing& a, const ChainRing& b) {
    return a.kind_ == b.kind_ && a.p_ == b.p_ && a.N_ == b.N_;
  }

  ChainElem zero() const { return {}; }
  ChainElem one() const { return from_int(1); }
  ChainElem from_int(long long v) const;
  ChainElem from_int(const Int& v) const;
  /// Element from pi-basis coordinates (integers reduced mod p^N).
  ChainElem from_pi_coords(const std::vector<Int>& coords) const;
  ChainElem uniformizer() const;
  ChainElem pi_power(unsigned k) const;
  /// zeta_p in the cyclotomic ring (1 + pi); 1 in Z/p^N.
  ChainElem zeta() const;

  ChainElem add(const ChainElem& a, const ChainElem& b) const;
  ChainElem sub(const ChainElem& a, const ChainElem& b) const;
  ChainElem neg(const ChainElem& a) const;
  ChainElem mul(const ChainElem& a, const ChainElem& b) const;
  ChainElem pow(const ChainElem& a, std::uint64_t k) const;

  bool is_zero(const ChainElem& a) const;
  bool is_unit(const ChainElem& a) const { return valuation(a) == 0; }
  /// Largest v <= nilpotency with a in (pi^v).
  unsigned valuation(const ChainElem& a) const;
  ChainElem inverse(const ChainElem& unit) const;
  /// Some y with pi^k * y = a; requires valuation(a) >= k. The quotient is
  /// unique modulo pi^(e-k); the representative returned is canonical.
  ChainElem div_pi(const ChainElem& a, unsigned k) const;
  /// Unit part: a = unit(a) * pi^valuation(a). Zero maps to one.
  ChainElem unit_part(const ChainElem& a) const;

  std::string to_string(const ChainElem& a) const;

 private:
  ChainRing(Kind kind, unsigned long p, unsigned N);
  std::int64_t reduce(std::int64_t v) const {
    v %= mod_;
    return v < 0 ? v + mod_ : v;
  }
  std::int64_t mulmod(std::int64_t a, std::int64_t b) const {
    return static_cast<std::int64_t>((static_cast<__int128>(a) * b) % mod_);
  }

  Kind kind_;
  unsigned long p_;
  unsigned N_;
  unsigned d_;
  std::int64_t mod_;
  // pi^d = sum relation_[j] pi^j, and w with p * w = pi^d.
  std::array<std::int64_t, ChainElem::kMaxDegree> relation_{};
  ChainElem w_;
  ChainElem w_inv_;
};

}  // namespace prism
