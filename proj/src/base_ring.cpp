#include "prism/base_ring.hpp"

#include <sstream>
#include <stdexcept>

namespace prism {

namespace {

// binom(e, j) mod m for j < count.
std::vector<Int> binomial_row(const Int& e, unsigned count, const Int& m) {
  std::vector<Int> out(count);
  Int b = 1;
  for (unsigned j = 0; j < count; ++j) {
    if (j > 0) {
      b *= (e - (j - 1));
      b /= j;
    }
    out[j] = b;
    mpz_mod(out[j].get_mpz_t(), out[j].get_mpz_t(), m.get_mpz_t());
    if (b == 0) break;
  }
  return out;
}

}  // namespace

BaseRing::BaseRing(unsigned long p, unsigned N, unsigned M, unsigned K) : p_(p), N_(N), M_(M), K_(K) {
  modulus_ = ipow(Int(p), N);
  q_coeffs_ = binomial_row(ipow(Int(p), K), M, modulus_);
  frob_tm1_ = binomial_row(Int(p), M, modulus_);
  frob_tm1_[0] = 0;
}

BaseRingPtr base_ring_create(unsigned long p, unsigned N, unsigned M, unsigned K) {
  if (!is_prime(p)) throw std::invalid_argument("base ring: p = " + std::to_string(p) + " is not prime");
  if (N == 0 || M == 0) throw std::invalid_argument("base ring: precision N and truncation M must be >= 1");
  return BaseRingPtr(new BaseRing(p, N, M, K));
}

Int BaseRing::cardinality() const { return ipow(modulus_, M_); }

std::string BaseRing::describe() const {
  std::ostringstream os;
  os << "B(p=" << p_ << ",N=" << N_ << ",M=" << M_ << ",K=" << K_ << ")";
  return os.str();
}

BaseElem::BaseElem(BaseRingPtr ring) : ring_(std::move(ring)), c_(ring_->M()) {}

BaseElem::BaseElem(BaseRingPtr ring, const Int& c) : BaseElem(std::move(ring)) {
  c_[0] = c;
  normalize();
}

BaseElem::BaseElem(BaseRingPtr ring, std::vector<Int> coeffs) : ring_(std::move(ring)), c_(std::move(coeffs)) {
  c_.resize(ring_->M());
  normalize();
}

void BaseElem::normalize() {
  for (auto& c : c_) mpz_mod(c.get_mpz_t(), c.get_mpz_t(), ring_->modulus().get_mpz_t());
}

void BaseElem::check_same(const BaseElem& o) const {
  if (ring_ != o.ring_ && !(*ring_ == *o.ring_))
    throw MixedRings("base elements from " + ring_->describe() + " and " + o.ring_->describe());
}

BaseElem BaseElem::q(const BaseRingPtr& ring) { return BaseElem(ring, ring->q_coeffs()); }

BaseElem BaseElem::t(const BaseRingPtr& ring) { return t_power(ring, 1); }

BaseElem BaseElem::t_power(const BaseRingPtr& ring, unsigned long e) {
  return BaseElem(ring, binomial_row(Int(e), ring->M(), ring->modulus()));
}

BaseElem BaseElem::q_power(const BaseRingPtr& ring, long k) {
  if (k >= 0) return t_power(ring, static_cast<unsigned long>(k) * ipow(Int(ring->p()), ring->K()).get_ui());
  return q_power(ring, -k).inverse();
}

BaseElem BaseElem::from_t_poly(const BaseRingPtr& ring, const UPoly& f) {
  std::vector<Int> acc(ring->M());
  const auto& c = f.coeffs();
  for (std::size_t e = 0; e < c.size(); ++e) {
    if (c[e] == 0) continue;
    auto row = binomial_row(Int(static_cast<unsigned long>(e)), ring->M(), ring->modulus());
    for (unsigned j = 0; j < ring->M(); ++j) acc[j] += c[e] * row[j];
  }
  return BaseElem(ring, std::move(acc));
}

BaseElem BaseElem::from_q_poly(const BaseRingPtr& ring, const UPoly& f) {
  const unsigned long stride = ipow(Int(ring->p()), ring->K()).get_ui();
  std::vector<Int> acc(ring->M());
  const auto& c = f.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    auto row = binomial_row(Int(static_cast<unsigned long>(k * stride)), ring->M(), ring->modulus());
    for (unsigned j = 0; j < ring->M(); ++j) acc[j] += c[k] * row[j];
  }
  return BaseElem(ring, std::move(acc));
}

bool BaseElem::is_zero() const {
  for (const auto& c : c_)
    if (c != 0) return false;
  return true;
}

bool BaseElem::is_unit() const { return !mpz_divisible_ui_p(c_[0].get_mpz_t(), ring_->p()); }

unsigned BaseElem::t_adic_valuation() const {
  for (unsigned j = 0; j < c_.size(); ++j)
    if (c_[j] != 0) return j;
  return ring_->M();
}

BaseElem& BaseElem::operator+=(const BaseElem& o) {
  check_same(o);
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] += o.c_[j];
  normalize();
  return *this;
}

BaseElem& BaseElem::operator-=(const BaseElem& o) {
  check_same(o);
  for (std::size_t j = 0; j < c_.size(); ++j) c_[j] -= o.c_[j];
  normalize();
  return *this;
}

BaseElem& BaseElem::operator*=(const BaseElem& o) {
  check_same(o);
  const std::size_t m = c_.size();
  std::vector<Int> r(m);
  for (std::size_t i = 0; i < m; ++i) {
    if (c_[i] == 0) continue;
    for (std::size_t j = 0; i + j < m; ++j)
      mpz_addmul(r[i + j].get_mpz_t(), c_[i].get_mpz_t(), o.c_[j].get_mpz_t());
  }
  c_ = std::move(r);
  normalize();
  return *this;
}

BaseElem& BaseElem::operator*=(const Int& s) {
  for (auto& c : c_) c *= s;
  normalize();
  return *this;
}

BaseElem operator-(const BaseElem& a) {
  BaseElem r(a.ring_);
  return r -= a;
}

bool operator==(const BaseElem& a, const BaseElem& b) {
  if (!a.ring_ || !b.ring_) return a.c_ == b.c_;
  return *a.ring_ == *b.ring_ && a.c_ == b.c_;
}

BaseElem BaseElem::pow(std::uint64_t k) const {
  BaseElem result = one(ring_);
  BaseElem base = *this;
  while (k > 0) {
    if (k & 1) result *= base;
    k >>= 1;
    if (k) base *= base;
  }
  return result;
}

BaseElem BaseElem::inverse() const {
  if (!is_unit()) throw std::domain_error("BaseElem::inverse: element is not a unit");
  Int a0inv;
  mpz_invert(a0inv.get_mpz_t(), c_[0].get_mpz_t(), ring_->modulus().get_mpz_t());
  BaseElem y(ring_, a0inv);
  const BaseElem two(ring_, Int(2));
  // Newton: the error x*y - 1 lies in (t-1); each step squares it.
  for (unsigned prec = 1; prec < ring_->M() * 2; prec *= 2) y = y * (two - *this * y);
  return y;
}

UPoly BaseElem::lift() const {
  UPoly acc;
  const UPoly tm1(std::vector<Int>{Int(-1), Int(1)});
  for (std::size_t j = c_.size(); j-- > 0;) acc = acc * tm1 + UPoly(c_[j]);
  return acc;
}

BaseElem BaseElem::divide_by_t_minus_one() const {
  if (c_[0] != 0) throw NotDivisible("element is not divisible by (t-1)", to_string());
  if (ring_->M() < 2) throw PrecisionLoss("division by (t-1) needs M >= 2");
  auto coarser = base_ring_create(ring_->p(), ring_->N(), ring_->M() - 1, ring_->K());
  std::vector<Int> c(c_.begin() + 1, c_.end());
  return BaseElem(coarser, std::move(c));
}

BaseElem BaseElem::reduce_to(const BaseRingPtr& coarser) const {
  if (coarser->p() != ring_->p() || coarser->K() != ring_->K() || coarser->N() > ring_->N() ||
      coarser->M() > ring_->M())
    throw MixedRings("cannot reduce " + ring_->describe() + " to " + coarser->describe());
  std::vector<Int> c(c_.begin(), c_.begin() + coarser->M());
  return BaseElem(coarser, std::move(c));
}

std::string BaseElem::to_string() const {
  std::ostringstream os;
  os << "[";
  for (std::size_t j = 0; j < c_.size(); ++j) os << (j ? ", " : "") << c_[j].get_str();
  os << "]";
  return os.str();
}

BaseElem base_frobenius(const BaseElem& x) {
  const auto& ring = x.ring();
  const BaseElem tau(ring, ring->frob_t_minus_one());
  BaseElem acc(ring);
  for (std::size_t j = x.coeffs().size(); j-- > 0;) {
    acc *= tau;
    acc += BaseElem(ring, x.coeffs()[j]);
  }
  return acc;
}

BaseElem base_q_int(const BaseRingPtr& ring, unsigned long n) {
  BaseElem acc(ring);
  const BaseElem q = BaseElem::q(ring);
  BaseElem power = BaseElem::one(ring);
  for (unsigned long i = 0; i < n; ++i) {
    acc += power;
    power *= q;
  }
  return acc;
}

BaseElem base_q_root_int(const BaseRingPtr& ring, unsigned long n, unsigned j) {
  if (j > ring->K()) throw RootDepthUnsupported("q^(1/p^j) needs root depth K >= j");
  const unsigned long stride = ipow(Int(ring->p()), ring->K() - j).get_ui();
  BaseElem acc(ring);
  for (unsigned long i = 0; i < n; ++i) acc += BaseElem::t_power(ring, i * stride);
  return acc;
}

bool is_unit(const BaseElem& x) { return x.is_unit(); }

}  // namespace prism
