#include "prism/chain_ring.hpp"

#include <sstream>
#include <stdexcept>

namespace prism {

namespace {

unsigned vp(std::int64_t x, unsigned long p) {
  unsigned v = 0;
  while (x % static_cast<std::int64_t>(p) == 0) {
    x /= static_cast<std::int64_t>(p);
    ++v;
  }
  return v;
}

}  // namespace

ChainRing::ChainRing(Kind kind, unsigned long p, unsigned N) : kind_(kind), p_(p), N_(N) {
  if (!is_prime(p)) throw std::invalid_argument("chain ring: p is not prime");
  if (N == 0) throw std::invalid_argument("chain ring: N must be >= 1");
  d_ = kind == Kind::Zmod ? 1 : static_cast<unsigned>(p - 1);
  if (d_ > ChainElem::kMaxDegree) throw std::invalid_argument("chain ring: cyclotomic degree too large");
  Int m = ipow(Int(p), N);
  if (m > Int(std::int64_t{1} << 62)) throw std::invalid_argument("chain ring: p^N too large");
  mod_ = m.get_si();
  if (kind == Kind::Zmod) {
    relation_[0] = reduce(static_cast<std::int64_t>(p));
    w_ = one();
  } else {
    for (unsigned j = 0; j < d_; ++j) {
      std::int64_t b = binomial(p, j + 1).get_si();
      relation_[j] = reduce(-b);
      w_.c[j] = reduce(-(b / static_cast<std::int64_t>(p)));
    }
  }
  w_inv_ = inverse(w_);
}

ChainRing ChainRing::zmod(unsigned long p, unsigned N) { return ChainRing(Kind::Zmod, p, N); }
ChainRing ChainRing::cyclotomic(unsigned long p, unsigned N) { return ChainRing(Kind::Cyclotomic, p, N); }

std::string ChainRing::describe() const {
  std::ostringstream os;
  os << (kind_ == Kind::Zmod ? "Zmod(" : "Cyclotomic(") << p_ << "," << N_ << ")";
  return os.str();
}

ChainElem ChainRing::from_int(long long v) const {
  ChainElem e;
  e.c[0] = reduce(static_cast<std::int64_t>(v % mod_));
  return e;
}

ChainElem ChainRing::from_int(const Int& v) const {
  Int r;
  mpz_mod(r.get_mpz_t(), v.get_mpz_t(), Int(mod_).get_mpz_t());
  ChainElem e;
  e.c[0] = r.get_si();
  return e;
}

ChainElem ChainRing::uniformizer() const {
  if (kind_ == Kind::Zmod) return from_int(static_cast<long long>(p_));
  ChainElem e;
  if (d_ == 1) {
    // Z[zeta_2] = Z, pi = zeta_2 - 1 = -2.
    e.c[0] = reduce(-2);
    return e;
  }
  e.c[1] = 1;
  return e;
}

ChainElem ChainRing::from_pi_coords(const std::vector<Int>& coords) const {
  const ChainElem pi = uniformizer();
  ChainElem acc = zero();
  for (std::size_t j = coords.size(); j-- > 0;) acc = add(mul(acc, pi), from_int(coords[j]));
  return acc;
}

ChainElem ChainRing::pi_power(unsigned k) const {
  if (k >= nilpotency()) return zero();
  return pow(uniformizer(), k);
}

ChainElem ChainRing::zeta() const { return add(one(), kind_ == Kind::Zmod ? zero() : uniformizer()); }

ChainElem ChainRing::add(const ChainElem& a, const ChainElem& b) const {
  ChainElem r;
  for (unsigned j = 0; j < d_; ++j) {
    std::int64_t s = a.c[j] + b.c[j];
    r.c[j] = s >= mod_ ? s - mod_ : s;
  }
  return r;
}

ChainElem ChainRing::sub(const ChainElem& a, const ChainElem& b) const {
  ChainElem r;
  for (unsigned j = 0; j < d_; ++j) {
    std::int64_t s = a.c[j] - b.c[j];
    r.c[j] = s < 0 ? s + mod_ : s;
  }
  return r;
}

ChainElem ChainRing::neg(const ChainElem& a) const { return sub(zero(), a); }

ChainElem ChainRing::mul(const ChainElem& a, const ChainElem& b) const {
  if (kind_ == Kind::Zmod || d_ == 1) {
    ChainElem r;
    r.c[0] = mulmod(a.c[0], b.c[0]);
    return r;
  }
  std::array<__int128, 2 * ChainElem::kMaxDegree> acc{};
  for (unsigned i = 0; i < d_; ++i) {
    if (!a.c[i]) continue;
    for (unsigned j = 0; j < d_; ++j) acc[i + j] += static_cast<__int128>(a.c[i]) * b.c[j] % mod_;
  }
  for (unsigned k = 2 * d_ - 2; k >= d_; --k) {
    std::int64_t top = static_cast<std::int64_t>(acc[k] % mod_);
    acc[k] = 0;
    if (top == 0) continue;
    for (unsigned j = 0; j < d_; ++j) acc[k - d_ + j] += static_cast<__int128>(top) * relation_[j] % mod_;
  }
  ChainElem r;
  for (unsigned j = 0; j < d_; ++j) {
    std::int64_t v = static_cast<std::int64_t>(acc[j] % mod_);
    r.c[j] = v < 0 ? v + mod_ : v;
  }
  return r;
}

ChainElem ChainRing::pow(const ChainElem& a, std::uint64_t k) const {
  ChainElem result = one();
  ChainElem base = a;
  while (k) {
    if (k & 1) result = mul(result, base);
    k >>= 1;
    if (k) base = mul(base, base);
  }
  return result;
}

bool ChainRing::is_zero(const ChainElem& a) const {
  for (unsigned j = 0; j < d_; ++j)
    if (a.c[j]) return false;
  return true;
}

unsigned ChainRing::valuation(const ChainElem& a) const {
  unsigned best = nilpotency();
  for (unsigned j = 0; j < d_; ++j) {
    if (!a.c[j]) continue;
    unsigned v = d_ * vp(a.c[j], p_) + (kind_ == Kind::Zmod ? 0 : j);
    if (d_ == 1 && kind_ == Kind::Cyclotomic) v = vp(a.c[j], p_);
    best = std::min(best, v);
  }
  return best;
}

ChainElem ChainRing::inverse(const ChainElem& u) const {
  if (valuation(u) != 0) throw std::domain_error("ChainRing::inverse: not a unit in " + describe());
  Int c0(static_cast<long>(u.c[0])), inv;
  mpz_invert(inv.get_mpz_t(), c0.get_mpz_t(), Int(mod_).get_mpz_t());
  ChainElem y = from_int(inv);
  const ChainElem two = from_int(2);
  for (int it = 0; it < 64; ++it) {
    ChainElem uy = mul(u, y);
    if (uy == one()) return y;
    y = mul(y, sub(two, uy));
  }
  throw std::logic_error("ChainRing::inverse: Newton iteration did not converge");
}

ChainElem ChainRing::div_pi(const ChainElem& a, unsigned k) const {
  if (k == 0) return a;
  if (valuation(a) < k) throw NotDivisible("element is not divisible by pi^" + std::to_string(k), to_string(a));
  if (kind_ == Kind::Zmod || d_ == 1) {
    // pi = p (Zmod) or -2 (Z[zeta_2]); divide the integer representative.
    std::int64_t x = a.c[0];
    std::int64_t unit_sign = (kind_ == Kind::Cyclotomic && (k % 2 == 1)) ? -1 : 1;
    for (unsigned i = 0; i < k; ++i) x /= static_cast<std::int64_t>(p_);
    return from_int(static_cast<long long>(x * unit_sign));
  }
  ChainElem acc = zero();
  const ChainElem pi = uniformizer();
  for (unsigned j = 0; j < d_; ++j) {
    if (!a.c[j]) continue;
    unsigned v = vp(a.c[j], p_);
    std::int64_t u = a.c[j];
    for (unsigned i = 0; i < v; ++i) u /= static_cast<std::int64_t>(p_);
    // c_j pi^j = u * w^(-v) * pi^(d v + j)
    ChainElem term = mul(from_int(static_cast<long long>(u)), pow(w_inv_, v));
    term = mul(term, pow(pi, d_ * v + j - k));
    acc = add(acc, term);
  }
  return acc;
}

ChainElem ChainRing::unit_part(const ChainElem& a) const {
  unsigned v = valuation(a);
  if (v >= nilpotency()) return one();
  return div_pi(a, v);
}

std::string ChainRing::to_string(const ChainElem& a) const {
  if (d_ == 1) return std::to_string(a.c[0]);
  std::ostringstream os;
  os << "[";
  for (unsigned j = 0; j < d_; ++j) os << (j ? ", " : "") << a.c[j];
  os << "]";
  return os.str();
}

}  // namespace prism
