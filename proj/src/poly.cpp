#include "prism/poly.hpp"

#include <algorithm>

namespace prism {

VarList make_vars(std::vector<std::string> names) {
  return std::make_shared<const std::vector<std::string>>(std::move(names));
}

namespace {

bool divides(const Exponents& a, const Exponents& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

}  // namespace

IntPoly exact_div(const IntPoly& x, const IntPoly& y) {
  if (y.is_zero()) throw std::invalid_argument("exact_div: division by zero polynomial");
  if (x.nvars() != y.nvars()) throw MixedRings("exact_div: variable sets differ");
  const auto& [ey, cy] = y.leading_term();
  IntPoly rem = x;
  IntPoly quotient(x.vars());
  IntPoly witness(x.vars());
  Exponents e(x.nvars());
  while (!rem.is_zero()) {
    const auto [er, cr] = rem.leading_term();
    if (divides(ey, er) && mpz_divisible_p(cr.get_mpz_t(), cy.get_mpz_t())) {
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = er[i] - ey[i];
      Int c = cr / cy;
      IntPoly t(x.vars());
      t.add_term(e, c);
      quotient += t;
      rem -= t * y;
    } else {
      IntPoly lt(x.vars());
      lt.add_term(er, cr);
      witness += lt;
      rem -= lt;
    }
  }
  if (!witness.is_zero())
    throw NotDivisible("polynomial is not divisible by " + y.to_string(), witness.to_string());
  return quotient;
}

IntPoly exact_div(const IntPoly& x, const Int& d) {
  if (d == 0) throw std::invalid_argument("exact_div: division by zero");
  IntPoly q(x.vars());
  IntPoly witness(x.vars());
  for (const auto& [e, c] : x.terms()) {
    if (mpz_divisible_p(c.get_mpz_t(), d.get_mpz_t())) {
      q.add_term(e, Int(c / d));
    } else {
      Int r = c % d;
      witness.add_term(e, r);
    }
  }
  if (!witness.is_zero())
    throw NotDivisible("polynomial is not divisible by " + d.get_str(), witness.to_string());
  return q;
}

RatPoly to_rat(const IntPoly& f) {
  return f.map_coeffs([](const Int& c) { return Rat(c); });
}

UPoly& UPoly::operator+=(const UPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

UPoly& UPoly::operator-=(const UPoly& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

UPoly& UPoly::operator*=(const Int& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& c : c_) c *= s;
  return *this;
}

UPoly operator*(const UPoly& a, const UPoly& b) {
  if (a.is_zero() || b.is_zero()) return {};
  std::vector<Int> r(a.c_.size() + b.c_.size() - 1);
  // Zero coefficients are common (compose_power output), so skip them.
  std::vector<std::size_t> nzb;
  for (std::size_t j = 0; j < b.c_.size(); ++j)
    if (b.c_[j] != 0) nzb.push_back(j);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (auto j : nzb) mpz_addmul(r[i + j].get_mpz_t(), a.c_[i].get_mpz_t(), b.c_[j].get_mpz_t());
  }
  return UPoly(std::move(r));
}

UPoly UPoly::pow(std::uint64_t k) const {
  UPoly result(1);
  UPoly base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

UPoly UPoly::compose_power(std::size_t k) const {
  if (k == 0) {
    Int s = 0;
    for (const auto& c : c_) s += c;
    return UPoly(s);
  }
  if (c_.empty()) return {};
  std::vector<Int> r((c_.size() - 1) * k + 1);
  for (std::size_t i = 0; i < c_.size(); ++i) r[i * k] = c_[i];
  return UPoly(std::move(r));
}

Int UPoly::eval(const Int& x) const {
  Int acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
  return acc;
}

Rat UPoly::eval(const Rat& x) const {
  Rat acc = 0;
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + Rat(*it);
  return acc;
}

std::string UPoly::to_string(const std::string& var) const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = 0; i < c_.size(); ++i) {
    const Int& c = c_[i];
    if (c == 0) continue;
    Int mag = abs(c);
    os << (first ? (c < 0 ? "-" : "") : (c < 0 ? " - " : " + "));
    first = false;
    if (i == 0 || mag != 1) os << mag.get_str();
    if (i > 0) {
      if (mag != 1) os << "*";
      os << var;
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

UDivision divmod(const UPoly& a, const UPoly& b) {
  if (b.is_zero()) throw std::invalid_argument("divmod: division by zero polynomial");
  std::vector<Int> rem = a.coeffs();
  const auto& bc = b.coeffs();
  const std::size_t db = bc.size() - 1;
  const Int& lb = bc.back();
  std::vector<Int> quot(rem.size() >= bc.size() ? rem.size() - db : 0);
  std::vector<std::size_t> nzb;
  for (std::size_t j = 0; j < db; ++j)
    if (bc[j] != 0) nzb.push_back(j);
  bool stuck = false;
  for (std::size_t i = rem.size(); i-- > db;) {
    if (rem[i] == 0) continue;
    if (!mpz_divisible_p(rem[i].get_mpz_t(), lb.get_mpz_t())) {
      stuck = true;
      break;
    }
    Int c = rem[i] / lb;
    const std::size_t shift = i - db;
    quot[shift] = c;
    rem[i] = 0;
    for (auto j : nzb) mpz_submul(rem[shift + j].get_mpz_t(), c.get_mpz_t(), bc[j].get_mpz_t());
  }
  UDivision out{UPoly(std::move(quot)), UPoly(std::move(rem)), false};
  out.exact = !stuck && out.remainder.is_zero();
  return out;
}

UPoly exact_div(const UPoly& a, const UPoly& b) {
  UDivision d = divmod(a, b);
  if (!d.exact)
    throw NotDivisible("(" + a.to_string() + ") is not divisible by (" + b.to_string() + ")",
                       d.remainder.to_string());
  return d.quotient;
}

IntPoly to_intpoly(const UPoly& f, VarList vars, std::size_t var_index) {
  IntPoly r(std::move(vars));
  Exponents e(r.nvars(), 0);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) {
    e.at(var_index) = static_cast<std::uint32_t>(i);
    r.add_term(e, f.coeffs()[i]);
  }
  return r;
}

UPoly to_upoly(const IntPoly& f, std::size_t var_index) {
  std::vector<Int> c;
  for (const auto& [e, v] : f.terms()) {
    for (std::size_t i = 0; i < e.size(); ++i)
      if (i != var_index && e[i] != 0) throw MixedRings("to_upoly: polynomial is not univariate");
    std::size_t d = e.at(var_index);
    if (c.size() <= d) c.resize(d + 1);
    c[d] += v;
  }
  return UPoly(std::move(c));
}

Int binomial(std::uint64_t n, std::uint64_t k) {
  Int r;
  mpz_bin_uiui(r.get_mpz_t(), n, k);
  return r;
}

Int ipow(const Int& b, std::uint64_t e) {
  Int r;
  mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
  return r;
}

unsigned valuation(const Int& x, unsigned long p) {
  if (x == 0) throw std::invalid_argument("valuation of zero");
  Int y = x;
  unsigned v = 0;
  while (mpz_divisible_ui_p(y.get_mpz_t(), p)) {
    mpz_divexact_ui(y.get_mpz_t(), y.get_mpz_t(), p);
    ++v;
  }
  return v;
}

bool is_prime(unsigned long n) {
  if (n < 2) return false;
  for (unsigned long d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

}  // namespace prism
