#include "prism/coeff_rings.hpp"

#include <sstream>
#include <stdexcept>

namespace prism {

ZmodRing::ZmodRing(unsigned long p, unsigned N) : p_(p), N_(N), mod_(ipow(Int(p), N)) {
  if (!is_prime(p)) throw std::invalid_argument("Z/p^N: p is not prime");
}

ZmodRing::Elem ZmodRing::from_int(const Int& c) const {
  Int r;
  mpz_mod(r.get_mpz_t(), c.get_mpz_t(), mod_.get_mpz_t());
  return r;
}

std::string ZmodRing::describe() const {
  return "Z/" + std::to_string(p_) + "^" + std::to_string(N_);
}

std::string PolyRing::describe() const {
  std::string s = "Z[";
  for (std::size_t i = 0; i < vars_->size(); ++i) s += (i ? "," : "") + (*vars_)[i];
  return s + "]";
}

std::pair<unsigned long, unsigned> prime_power(unsigned long q) {
  if (q < 2) throw std::invalid_argument("not a prime power: " + std::to_string(q));
  unsigned long p = 2;
  while (q % p != 0) ++p;
  unsigned k = 0;
  unsigned long r = q;
  while (r % p == 0) {
    r /= p;
    ++k;
  }
  if (r != 1) throw std::invalid_argument("not a prime power: " + std::to_string(q));
  return {p, k};
}

namespace {

using Coeffs = std::vector<unsigned>;

// Remainder of a modulo the monic b over F_p; both low degree first.
Coeffs poly_mod(Coeffs a, const Coeffs& b, unsigned long p) {
  const std::size_t db = b.size() - 1;
  for (std::size_t i = a.size(); i-- > db;) {
    unsigned c = a[i] % p;
    if (c == 0) continue;
    for (std::size_t j = 0; j <= db; ++j) a[i - db + j] = static_cast<unsigned>((a[i - db + j] + (p - c) * b[j]) % p);
  }
  a.resize(std::min(a.size(), db));
  return a;
}

bool is_irreducible(const Coeffs& f, unsigned long p) {
  const std::size_t k = f.size() - 1;
  // Trial division by every monic polynomial of degree 1..k/2.
  for (std::size_t d = 1; 2 * d <= k; ++d) {
    unsigned long count = 1;
    for (std::size_t i = 0; i < d; ++i) count *= p;
    for (unsigned long idx = 0; idx < count; ++idx) {
      Coeffs g(d + 1);
      unsigned long x = idx;
      for (std::size_t i = 0; i < d; ++i) {
        g[i] = static_cast<unsigned>(x % p);
        x /= p;
      }
      g[d] = 1;
      Coeffs r = poly_mod(f, g, p);
      bool zero = true;
      for (auto c : r)
        if (c) zero = false;
      if (zero) return false;
    }
  }
  return true;
}

}  // namespace

GaloisField::GaloisField(unsigned long q) {
  auto [p, k] = prime_power(q);
  p_ = p;
  k_ = k;
  q_ = q;
  if (q > (1ul << 20)) throw std::invalid_argument("GF(q): q too large");
  if (k == 1) {
    f_ = {0, 1};
  } else if (q == 4) {
    f_ = {1, 1, 1};
  } else if (q == 9) {
    f_ = {1, 0, 1};
  } else {
    unsigned long count = 1;
    for (unsigned i = 0; i < k; ++i) count *= p;
    for (unsigned long idx = 0; idx < count; ++idx) {
      Coeffs f(k + 1);
      unsigned long x = idx;
      for (unsigned i = 0; i < k; ++i) {
        f[i] = static_cast<unsigned>(x % p);
        x /= p;
      }
      f[k] = 1;
      if (is_irreducible(f, p)) {
        f_ = f;
        break;
      }
    }
  }
}

std::vector<unsigned> GaloisField::digits(Elem a) const {
  std::vector<unsigned> d(k_);
  for (unsigned i = 0; i < k_; ++i) {
    d[i] = static_cast<unsigned>(a % p_);
    a = static_cast<Elem>(a / p_);
  }
  return d;
}

GaloisField::Elem GaloisField::encode(const std::vector<unsigned>& d) const {
  Elem a = 0;
  for (std::size_t i = d.size(); i-- > 0;) a = static_cast<Elem>(a * p_ + d[i] % p_);
  return a;
}

GaloisField::Elem GaloisField::from_int(const Int& c) const {
  Int r;
  mpz_mod_ui(r.get_mpz_t(), c.get_mpz_t(), p_);
  return static_cast<Elem>(r.get_ui());
}

GaloisField::Elem GaloisField::add(Elem a, Elem b) const {
  auto x = digits(a), y = digits(b);
  for (unsigned i = 0; i < k_; ++i) x[i] = static_cast<unsigned>((x[i] + y[i]) % p_);
  return encode(x);
}

GaloisField::Elem GaloisField::sub(Elem a, Elem b) const {
  auto x = digits(a), y = digits(b);
  for (unsigned i = 0; i < k_; ++i) x[i] = static_cast<unsigned>((x[i] + p_ - y[i]) % p_);
  return encode(x);
}

GaloisField::Elem GaloisField::mul(Elem a, Elem b) const {
  if (k_ == 1) return static_cast<Elem>((static_cast<std::uint64_t>(a) * b) % p_);
  auto x = digits(a), y = digits(b);
  Coeffs prod(2 * k_ - 1);
  for (unsigned i = 0; i < k_; ++i)
    for (unsigned j = 0; j < k_; ++j) prod[i + j] = static_cast<unsigned>((prod[i + j] + x[i] * y[j]) % p_);
  return encode(poly_mod(prod, f_, p_));
}

GaloisField::Elem GaloisField::pow(Elem a, std::uint64_t e) const {
  Elem r = one();
  while (e) {
    if (e & 1) r = mul(r, a);
    e >>= 1;
    if (e) a = mul(a, a);
  }
  return r;
}

GaloisField::Elem GaloisField::inverse(Elem a) const {
  if (a == 0) throw std::domain_error("GF(q): zero is not invertible");
  return pow(a, q_ - 2);
}

GaloisField::Elem GaloisField::pth_root(Elem a) const { return pow(a, q_ / p_); }

std::string GaloisField::to_string(Elem a) const {
  if (k_ == 1) return std::to_string(a);
  auto d = digits(a);
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = d.size(); i-- > 0;) {
    if (!d[i]) continue;
    os << (first ? "" : "+");
    first = false;
    if (i == 0 || d[i] != 1) os << d[i];
    if (i >= 1) os << "a" << (i > 1 ? "^" + std::to_string(i) : "");
  }
  return first ? "0" : os.str();
}

std::string GaloisField::describe() const { return "GF(" + std::to_string(q_) + ")"; }

DualField::Elem DualField::mul(Elem a, Elem b) const {
  auto a0 = re(a), a1 = eps(a), b0 = re(b), b1 = eps(b);
  return make(F_.mul(a0, b0), F_.add(F_.mul(a0, b1), F_.mul(a1, b0)));
}

DualField::Elem DualField::pow(Elem a, std::uint64_t e) const {
  Elem r = one();
  while (e) {
    if (e & 1) r = mul(r, a);
    e >>= 1;
    if (e) a = mul(a, a);
  }
  return r;
}

std::string DualField::to_string(Elem a) const {
  return "(" + F_.to_string(re(a)) + ")+(" + F_.to_string(eps(a)) + ")e";
}

std::string DualField::describe() const { return F_.describe() + "[e]/(e^2)"; }

}  // namespace prism
