#pragma once

// Sparse multivariate polynomials over Z and Q, plus a dense univariate
// integer polynomial used for q- and t-expansions.

#include <gmpxx.h>

#include <cstdint>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "prism/errors.hpp"

namespace prism {

using Int = mpz_class;
using Rat = mpq_class;

using Exponents = std::vector<std::uint32_t>;
using VarList = std::shared_ptr<const std::vector<std::string>>;

VarList make_vars(std::vector<std::string> names);

namespace detail {
inline std::string coeff_str(const Int& c) { return c.get_str(); }
inline std::string coeff_str(const Rat& c) { return c.get_str(); }
inline bool is_one(const Int& c) { return c == 1; }
inline bool is_one(const Rat& c) { return c == 1; }
}  // namespace detail

template <class Coeff>
class SparsePoly {
 public:
  using TermMap = std::map<Exponents, Coeff>;

  SparsePoly() : vars_(make_vars({})) {}
  explicit SparsePoly(VarList vars) : vars_(std::move(vars)) {}

  static SparsePoly constant(VarList vars, const Coeff& c) {
    SparsePoly r(std::move(vars));
    r.add_term(Exponents(r.nvars(), 0), c);
    return r;
  }

  static SparsePoly variable(VarList vars, std::size_t i, std::uint32_t power = 1) {
    SparsePoly r(std::move(vars));
    Exponents e(r.nvars(), 0);
    e.at(i) = power;
    r.add_term(e, Coeff(1));
    return r;
  }

  std::size_t nvars() const { return vars_->size(); }
  const VarList& vars() const { return vars_; }
  const TermMap& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }

  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && is_zero_exponent(terms_.begin()->first));
  }

  Coeff constant_term() const {
    auto it = terms_.find(Exponents(nvars(), 0));
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  Coeff coefficient(const Exponents& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Coeff(0) : it->second;
  }

  void add_term(const Exponents& e, const Coeff& c) {
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  // Lex-greatest term; the polynomial must be nonzero.
  const std::pair<const Exponents, Coeff>& leading_term() const { return *terms_.rbegin(); }

  SparsePoly& operator+=(const SparsePoly& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
  }

  SparsePoly& operator-=(const SparsePoly& o) {
    check_vars(o);
    for (const auto& [e, c] : o.terms_) add_term(e, Coeff(-c));
    return *this;
  }

  SparsePoly& operator*=(const Coeff& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend SparsePoly operator+(SparsePoly a, const SparsePoly& b) { return a += b; }
  friend SparsePoly operator-(SparsePoly a, const SparsePoly& b) { return a -= b; }
  friend SparsePoly operator-(SparsePoly a) {
    for (auto& [e, c] : a.terms_) c = -c;
    return a;
  }
  friend SparsePoly operator*(SparsePoly a, const Coeff& s) { return a *= s; }
  friend SparsePoly operator*(const Coeff& s, SparsePoly a) { return a *= s; }

  friend SparsePoly operator*(const SparsePoly& a, const SparsePoly& b) {
    a.check_vars(b);
    SparsePoly r(a.vars_);
    if (a.is_zero() || b.is_zero()) return r;
    const std::size_t n = a.nvars();
    Exponents e(n);
    Coeff prod;
    for (const auto& [ea, ca] : a.terms_) {
      for (const auto& [eb, cb] : b.terms_) {
        for (std::size_t i = 0; i < n; ++i) e[i] = ea[i] + eb[i];
        prod = ca * cb;
        r.add_term(e, prod);
      }
    }
    return r;
  }

  SparsePoly& operator*=(const SparsePoly& o) { return *this = *this * o; }

  SparsePoly pow(std::uint64_t k) const {
    SparsePoly result = constant(vars_, Coeff(1));
    SparsePoly base = *this;
    while (k > 0) {
      if (k & 1) result *= base;
      k >>= 1;
      if (k) base *= base;
    }
    return result;
  }

  friend bool operator==(const SparsePoly& a, const SparsePoly& b) {
    return a.nvars() == b.nvars() && a.terms_ == b.terms_;
  }

  // Ring map sending variable i to images[i].
  SparsePoly substitute(const std::vector<SparsePoly>& images) const {
    if (images.size() != nvars()) throw MixedRings("substitute: image count mismatch");
    VarList target = images.empty() ? vars_ : images.front().vars();
    SparsePoly result(target);
    std::vector<std::vector<SparsePoly>> powers(nvars());
    for (const auto& [e, c] : terms_) {
      SparsePoly term = constant(target, c);
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        auto& cache = powers[i];
        if (cache.empty()) cache.push_back(constant(target, Coeff(1)));
        while (cache.size() <= e[i]) cache.push_back(cache.back() * images[i]);
        term *= cache[e[i]];
      }
      result += term;
    }
    return result;
  }

  std::uint32_t degree_in(std::size_t i) const {
    std::uint32_t d = 0;
    for (const auto& [e, c] : terms_) d = std::max(d, e[i]);
    return d;
  }

  template <class F>
  auto map_coeffs(F&& f) const {
    using Out = decltype(f(std::declval<const Coeff&>()));
    SparsePoly<Out> r(vars_);
    for (const auto& [e, c] : terms_) r.add_term(e, f(c));
    return r;
  }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
      const auto& [e, c] = *it;
      Coeff mag = c < 0 ? Coeff(-c) : c;
      os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
      first = false;
      bool unit_coeff = detail::is_one(mag);
      bool monomial_empty = is_zero_exponent(e);
      if (!unit_coeff || monomial_empty) os << detail::coeff_str(mag);
      bool need_star = !unit_coeff;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] == 0) continue;
        if (need_star) os << "*";
        os << (*vars_)[i];
        if (e[i] > 1) os << "^" << e[i];
        need_star = true;
      }
    }
    return os.str();
  }

 private:
  static bool is_zero_exponent(const Exponents& e) {
    for (auto x : e)
      if (x) return false;
    return true;
  }

  void check_vars(const SparsePoly& o) const {
    if (vars_ != o.vars_ && *vars_ != *o.vars_) throw MixedRings("polynomials over different variable sets");
  }

  VarList vars_;
  TermMap terms_;
};

using IntPoly = SparsePoly<Int>;
using RatPoly = SparsePoly<Rat>;

/// Exact division in Z[vars]. Throws NotDivisible carrying the remainder of
/// the lex division algorithm when `y` does not divide `x`.
IntPoly exact_div(const IntPoly& x, const IntPoly& y);

/// Exact division by an integer scalar.
IntPoly exact_div(const IntPoly& x, const Int& d);

RatPoly to_rat(const IntPoly& f);

/// Dense univariate polynomial over Z, coefficients stored low degree first.
class UPoly {
 public:
  UPoly() = default;
  UPoly(long c) : UPoly(Int(c)) {}
  UPoly(const Int& c) {
    if (c != 0) c_.push_back(c);
  }
  explicit UPoly(std::vector<Int> coeffs) : c_(std::move(coeffs)) { trim(); }

  static UPoly monomial(const Int& c, std::size_t deg) {
    std::vector<Int> v(deg + 1);
    v[deg] = c;
    return UPoly(std::move(v));
  }

  const std::vector<Int>& coeffs() const { return c_; }
  long degree() const { return static_cast<long>(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  Int operator[](std::size_t i) const { return i < c_.size() ? c_[i] : Int(0); }
  const Int& leading() const { return c_.back(); }

  UPoly& operator+=(const UPoly& o);
  UPoly& operator-=(const UPoly& o);
  UPoly& operator*=(const Int& s);
  friend UPoly operator+(UPoly a, const UPoly& b) { return a += b; }
  friend UPoly operator-(UPoly a, const UPoly& b) { return a -= b; }
  friend UPoly operator-(UPoly a) {
    for (auto& c : a.c_) c = -c;
    return a;
  }
  friend UPoly operator*(UPoly a, const Int& s) { return a *= s; }
  friend UPoly operator*(const Int& s, UPoly a) { return a *= s; }
  friend UPoly operator*(const UPoly& a, const UPoly& b);
  UPoly& operator*=(const UPoly& o) { return *this = *this * o; }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  UPoly pow(std::uint64_t k) const;

  /// f(x^k).
  UPoly compose_power(std::size_t k) const;

  Int eval(const Int& x) const;
  Rat eval(const Rat& x) const;

  std::string to_string(const std::string& var = "q") const;

 private:
  void trim() {
    while (!c_.empty() && c_.back() == 0) c_.pop_back();
  }
  std::vector<Int> c_;
};

struct UDivision {
  UPoly quotient;
  UPoly remainder;
  bool exact = false;  // remainder == 0 and the algorithm ran to completion
};

/// Long division. Proceeds while the divisor's leading coefficient divides the
/// running leading coefficient; with a monic divisor this is ordinary division
/// with remainder.
UDivision divmod(const UPoly& a, const UPoly& b);

/// Exact quotient in Z[x]; throws NotDivisible (remainder as witness).
UPoly exact_div(const UPoly& a, const UPoly& b);

IntPoly to_intpoly(const UPoly& f, VarList vars, std::size_t var_index = 0);
UPoly to_upoly(const IntPoly& f, std::size_t var_index = 0);

Int binomial(std::uint64_t n, std::uint64_t k);
Int ipow(const Int& b, std::uint64_t e);

/// p-adic valuation of a nonzero integer.
unsigned valuation(const Int& x, unsigned long p);

bool is_prime(unsigned long n);

}  // namespace prism
