#pragma once

// Truncated p-typical Witt vectors W_m(R). Sums, products and Frobenius use
// universal integer structure polynomials computed once per (p, m) from the
// ghost equations.

#include <memory>
#include <string>
#include <vector>

#include "prism/coeff_rings.hpp"
#include "prism/homology.hpp"
#include "prism/poly.hpp"

namespace prism {

struct WittPolys {
  unsigned long p;
  unsigned m;
  VarList vars;                 // x0..x(m-1), y0..y(m-1)
  std::vector<IntPoly> S, P;    // sum and product components
  VarList fvars;                // x0..xm
  std::vector<IntPoly> F;       // F_i(x0..x(i+1)), i < m
};

/// Cached structure polynomials; safe to call concurrently. Throws Defect if a
/// ghost division is inexact.
const WittPolys& witt_polys(unsigned long p, unsigned m);

/// Ghost polynomial w_n = sum_{j<=n} p^j x_j^(p^(n-j)) in the given variables.
IntPoly ghost_polynomial(const VarList& vars, std::size_t offset, unsigned long p, unsigned n);

template <class R>
typename R::Elem eval_poly(const R& ring, const IntPoly& f, const std::vector<typename R::Elem>& args) {
  using E = typename R::Elem;
  std::vector<std::vector<E>> powers(args.size());
  E acc = ring.zero();
  for (const auto& [e, c] : f.terms()) {
    E term = ring.from_int(c);
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      auto& pw = powers[i];
      if (pw.empty()) pw.push_back(ring.one());
      while (pw.size() <= e[i]) pw.push_back(ring.mul(pw.back(), args[i]));
      term = ring.mul(term, pw[e[i]]);
    }
    acc = ring.add(acc, term);
  }
  return acc;
}

template <class R>
class WittVec {
 public:
  using Elem = typename R::Elem;

  WittVec(std::shared_ptr<const R> ring, unsigned long p, std::vector<Elem> c)
      : ring_(std::move(ring)), p_(p), c_(std::move(c)) {}

  static WittVec zero(std::shared_ptr<const R> ring, unsigned long p, unsigned m) {
    std::vector<Elem> c(m, ring->zero());
    return WittVec(std::move(ring), p, std::move(c));
  }

  const std::shared_ptr<const R>& ring() const { return ring_; }
  unsigned long p() const { return p_; }
  unsigned length() const { return static_cast<unsigned>(c_.size()); }
  const std::vector<Elem>& coords() const { return c_; }
  const Elem& operator[](std::size_t i) const { return c_[i]; }

  friend bool operator==(const WittVec& a, const WittVec& b) {
    if (a.c_.size() != b.c_.size()) return false;
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      if (!a.ring_->eq(a.c_[i], b.c_[i])) return false;
    return true;
  }

  std::string to_string() const {
    std::string s = "(";
    for (std::size_t i = 0; i < c_.size(); ++i) s += (i ? ", " : "") + ring_->to_string(c_[i]);
    return s + ")";
  }

 private:
  std::shared_ptr<const R> ring_;
  unsigned long p_;
  std::vector<Elem> c_;
};

namespace detail {
template <class R>
void check_compatible(const WittVec<R>& a, const WittVec<R>& b) {
  if (a.p() != b.p() || a.length() != b.length() || !(*a.ring() == *b.ring()))
    throw MixedRings("Witt vectors over " + a.ring()->describe() + " and " + b.ring()->describe());
}

template <class R>
WittVec<R> apply_binary(const WittVec<R>& a, const WittVec<R>& b, const std::vector<IntPoly>& polys) {
  check_compatible(a, b);
  std::vector<typename R::Elem> args(a.coords());
  args.insert(args.end(), b.coords().begin(), b.coords().end());
  std::vector<typename R::Elem> out;
  out.reserve(a.length());
  for (unsigned i = 0; i < a.length(); ++i) out.push_back(eval_poly(*a.ring(), polys[i], args));
  return WittVec<R>(a.ring(), a.p(), std::move(out));
}
}  // namespace detail

template <class R>
WittVec<R> witt_add(const WittVec<R>& a, const WittVec<R>& b) {
  if (a.length() == 0) return a;
  return detail::apply_binary(a, b, witt_polys(a.p(), a.length()).S);
}

template <class R>
WittVec<R> witt_mul(const WittVec<R>& a, const WittVec<R>& b) {
  if (a.length() == 0) return a;
  return detail::apply_binary(a, b, witt_polys(a.p(), a.length()).P);
}

/// The image of an integer: ghost components all equal to c.
template <class R>
WittVec<R> witt_from_int(std::shared_ptr<const R> ring, unsigned long p, unsigned m, const Int& c) {
  std::vector<Int> z;
  for (unsigned n = 0; n < m; ++n) {
    Int rest = c;
    for (unsigned j = 0; j < n; ++j) rest -= ipow(Int(p), j) * ipow(z[j], ipow(Int(p), n - j).get_ui());
    Int pn = ipow(Int(p), n);
    if (!mpz_divisible_p(rest.get_mpz_t(), pn.get_mpz_t())) throw Defect("witt_from_int: inexact ghost division");
    z.push_back(rest / pn);
  }
  std::vector<typename R::Elem> out;
  for (const auto& v : z) out.push_back(ring->from_int(v));
  return WittVec<R>(std::move(ring), p, std::move(out));
}

template <class R>
WittVec<R> witt_neg(const WittVec<R>& a) {
  return witt_mul(witt_from_int(a.ring(), a.p(), a.length(), Int(-1)), a);
}

template <class R>
WittVec<R> witt_sub(const WittVec<R>& a, const WittVec<R>& b) {
  return witt_add(a, witt_neg(b));
}

template <class R>
WittVec<R> witt_scale(const Int& c, const WittVec<R>& a) {
  return witt_mul(witt_from_int(a.ring(), a.p(), a.length(), c), a);
}

template <class R>
WittVec<R> witt_pow(const WittVec<R>& a, std::uint64_t k) {
  WittVec<R> r = witt_from_int(a.ring(), a.p(), a.length(), Int(1));
  WittVec<R> b = a;
  while (k) {
    if (k & 1) r = witt_mul(r, b);
    k >>= 1;
    if (k) b = witt_mul(b, b);
  }
  return r;
}

/// [a] = (a, 0, ..., 0).
template <class R>
WittVec<R> teichmuller(std::shared_ptr<const R> ring, unsigned long p, const typename R::Elem& a, unsigned m) {
  std::vector<typename R::Elem> c(m, ring->zero());
  if (m > 0) c[0] = a;
  return WittVec<R>(std::move(ring), p, std::move(c));
}

/// V(a_0, ..., a_(m-1)) = (0, a_0, ..., a_(m-2)).
template <class R>
WittVec<R> witt_V(const WittVec<R>& a) {
  std::vector<typename R::Elem> c;
  if (a.length() > 0) {
    c.push_back(a.ring()->zero());
    c.insert(c.end(), a.coords().begin(), a.coords().end() - 1);
  }
  return WittVec<R>(a.ring(), a.p(), std::move(c));
}

/// Universal Frobenius W_m -> W_(m-1): gh_i(F(a)) = gh_(i+1)(a).
template <class R>
WittVec<R> witt_F(const WittVec<R>& a) {
  if (a.length() == 0) throw std::invalid_argument("witt_F: empty Witt vector");
  const unsigned m = a.length() - 1;
  std::vector<typename R::Elem> out;
  if (m > 0) {
    const auto& polys = witt_polys(a.p(), m);
    for (unsigned i = 0; i < m; ++i) out.push_back(eval_poly(*a.ring(), polys.F[i], a.coords()));
  }
  return WittVec<R>(a.ring(), a.p(), std::move(out));
}

/// Frobenius over a ring of characteristic p: coordinatewise p-th powers.
template <class R>
WittVec<R> witt_F_char_p(const WittVec<R>& a) {
  std::vector<typename R::Elem> out;
  for (const auto& c : a.coords()) out.push_back(a.ring()->frobenius(c));
  return WittVec<R>(a.ring(), a.p(), std::move(out));
}

/// Restriction W_m -> W_k, k <= m.
template <class R>
WittVec<R> witt_truncate(const WittVec<R>& a, unsigned k) {
  std::vector<typename R::Elem> c(a.coords().begin(), a.coords().begin() + k);
  return WittVec<R>(a.ring(), a.p(), std::move(c));
}

/// Ghost components gh_0..gh_(m-1) evaluated in R.
template <class R>
std::vector<typename R::Elem> ghost(const WittVec<R>& a) {
  const auto& ring = *a.ring();
  std::vector<typename R::Elem> out;
  for (unsigned n = 0; n < a.length(); ++n) {
    typename R::Elem acc = ring.zero();
    for (unsigned j = 0; j <= n; ++j) {
      typename R::Elem t = a[j];
      for (unsigned k = 0; k < n - j; ++k) {
        typename R::Elem b = ring.one();
        for (unsigned long e = 0; e < a.p(); ++e) b = ring.mul(b, t);
        t = b;
      }
      acc = ring.add(acc, ring.mul(ring.from_int(ipow(Int(a.p()), j)), t));
    }
    out.push_back(acc);
  }
  return out;
}

/// Length-two Witt vectors over integer polynomials via the closed formulas
///   (x,y) + (x',y') = (x+x', y+y' + (x^p + x'^p - (x+x')^p)/p)
///   (x,y) * (x',y') = (xx', x^p y' + x'^p y + p y y').
struct W2Pair {
  IntPoly x, y;
  friend bool operator==(const W2Pair& a, const W2Pair& b) { return a.x == b.x && a.y == b.y; }
};
W2Pair w2_add(const W2Pair& a, const W2Pair& b, unsigned long p);
W2Pair w2_mul(const W2Pair& a, const W2Pair& b, unsigned long p);

/// delta(d) = (F(d) - d^p)/p in W_(m-1)(GF(q)) for d in W_m(GF(q)), m >= 2.
/// Computes F both coordinatewise and by the universal polynomials and
/// throws Mismatch if they disagree.
WittVec<GaloisField> witt_delta_perfect(const WittVec<GaloisField>& d);

/// Coefficient of p in the Teichmuller expansion d = sum [c_i] p^i.
GaloisField::Elem teichmuller_p_coefficient(const WittVec<GaloisField>& d);

struct ZeroDivisorReport {
  unsigned long p;
  unsigned m;
  std::size_t size = 0, units = 0, nonunits = 0;
  std::size_t maximal_ideal = 0;
  bool every_nonunit_annihilated = false;
  // (non-unit, a nonzero annihilator) pairs, encoded as coordinate strings.
  std::vector<std::pair<std::string, std::string>> annihilators;
};

/// Exhaustive check over W_m(F_p[x]/(x^2)) that every non-unit is a zero
/// divisor.
ZeroDivisorReport no_nonzerodivisor_witness(unsigned long p, unsigned m);

struct TateTwistResult {
  unsigned long q;
  unsigned m, n;
  unsigned length;  // m - n, the length of source and target
  InvariantFactors h0, h1;
  ChainMatrix matrix;  // the map in the Teichmuller-lift basis over Z/p^length
};

/// Cohomology of y -> F(y) - p^n y on W_(m-n)(F_q), the crystalline
/// instance of Z_p(n) in the coordinate x = p^n y.
TateTwistResult tate_twist_invariants(unsigned long q, unsigned m, unsigned n);

}  // namespace prism
