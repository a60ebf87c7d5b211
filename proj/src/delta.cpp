#include "prism/delta.hpp"

#include <map>
#include <sstream>

#include "prism/chain_ring.hpp"
#include "prism/homology.hpp"
#include "prism/witt.hpp"

namespace prism {

namespace {

std::string level_name(const std::string& g, unsigned j) {
  if (j == 0) return g;
  if (j == 1) return "d" + g;
  return "d" + std::to_string(j) + g;
}

}  // namespace

DeltaRing::DeltaRing(unsigned long p, std::vector<std::string> gens, unsigned depth)
    : p_(p), gens_(std::move(gens)), depth_(depth) {
  std::vector<std::string> names;
  for (const auto& g : gens_)
    for (unsigned j = 0; j < depth_; ++j) names.push_back(level_name(g, j));
  vars_ = make_vars(std::move(names));
}

DeltaRingPtr DeltaRing::create(unsigned long p, std::vector<std::string> generators, unsigned depth) {
  if (!is_prime(p)) throw std::invalid_argument("delta ring: p is not prime");
  if (depth == 0) throw std::invalid_argument("delta ring: depth must be >= 1");
  return DeltaRingPtr(new DeltaRing(p, std::move(generators), depth));
}

std::string DeltaRing::describe() const {
  std::ostringstream os;
  os << "Z{";
  for (std::size_t i = 0; i < gens_.size(); ++i) os << (i ? "," : "") << gens_[i];
  os << "} p=" << p_ << " depth=" << depth_;
  return os.str();
}

DeltaPoly::DeltaPoly(DeltaRingPtr ring, IntPoly poly) : ring_(std::move(ring)), poly_(std::move(poly)) {
  if (poly_.nvars() != ring_->vars()->size()) throw MixedRings("DeltaPoly: polynomial over the wrong variables");
}

DeltaPoly DeltaPoly::constant(const DeltaRingPtr& ring, const Int& c) {
  return DeltaPoly(ring, IntPoly::constant(ring->vars(), c));
}

DeltaPoly DeltaPoly::gen(const DeltaRingPtr& ring, std::size_t i, unsigned j) {
  if (j >= ring->depth()) throw DepthExceeded("delta^" + std::to_string(j) + " exceeds depth bound");
  return DeltaPoly(ring, IntPoly::variable(ring->vars(), ring->index(i, j)));
}

namespace {
void check_same(const DeltaPoly& a, const DeltaPoly& b) {
  if (a.ring() != b.ring() && a.ring()->describe() != b.ring()->describe())
    throw MixedRings("delta polynomials over " + a.ring()->describe() + " and " + b.ring()->describe());
}
}  // namespace

DeltaPoly operator+(const DeltaPoly& a, const DeltaPoly& b) {
  check_same(a, b);
  return DeltaPoly(a.ring_, a.poly_ + b.poly_);
}
DeltaPoly operator-(const DeltaPoly& a, const DeltaPoly& b) {
  check_same(a, b);
  return DeltaPoly(a.ring_, a.poly_ - b.poly_);
}
DeltaPoly operator*(const DeltaPoly& a, const DeltaPoly& b) {
  check_same(a, b);
  return DeltaPoly(a.ring_, a.poly_ * b.poly_);
}
DeltaPoly operator*(const Int& s, const DeltaPoly& a) { return DeltaPoly(a.ring_, a.poly_ * s); }
DeltaPoly operator-(const DeltaPoly& a) { return DeltaPoly(a.ring_, -a.poly_); }

DeltaPoly DeltaPoly::pow(std::uint64_t k) const { return DeltaPoly(ring_, poly_.pow(k)); }

int DeltaPoly::max_level() const {
  int best = -1;
  const unsigned depth = ring_->depth();
  for (const auto& [e, c] : poly_.terms())
    for (std::size_t v = 0; v < e.size(); ++v)
      if (e[v]) best = std::max(best, static_cast<int>(v % depth));
  return best;
}

template <class Coeff>
SparsePoly<Coeff> phi_levels(const SparsePoly<Coeff>& f, unsigned long p, unsigned depth) {
  const VarList& vars = f.vars();
  const std::size_t n = f.nvars();
  std::vector<SparsePoly<Coeff>> images;
  images.reserve(n);
  for (std::size_t v = 0; v < n; ++v) {
    const unsigned j = static_cast<unsigned>(v % depth);
    if (j + 1 == depth) {
      if (f.degree_in(v) > 0)
        throw DepthExceeded("phi of " + (*vars)[v] + " needs delta level " + std::to_string(depth));
      images.push_back(SparsePoly<Coeff>::variable(vars, v));
      continue;
    }
    images.push_back(SparsePoly<Coeff>::variable(vars, v, static_cast<std::uint32_t>(p)) +
                     SparsePoly<Coeff>::variable(vars, v + 1) * Coeff(static_cast<long>(p)));
  }
  return f.substitute(images);
}

template IntPoly phi_levels<Int>(const IntPoly&, unsigned long, unsigned);
template RatPoly phi_levels<Rat>(const RatPoly&, unsigned long, unsigned);

DeltaPoly phi(const DeltaPoly& f) {
  return DeltaPoly(f.ring(), phi_levels(f.poly(), f.ring()->p(), f.ring()->depth()));
}

DeltaPoly delta(const DeltaPoly& f) {
  const unsigned long p = f.ring()->p();
  IntPoly num = phi(f).poly() - f.poly().pow(p);
  try {
    return DeltaPoly(f.ring(), exact_div(num, Int(p)));
  } catch (const NotDivisible& e) {
    throw Defect("phi(f) - f^p is not divisible by p", e.witness());
  }
}

DeltaPoly joyal_delta_n(const DeltaPoly& f, unsigned n) {
  const unsigned long p = f.ring()->p();
  std::vector<DeltaPoly> d{f};
  DeltaPoly phin = f;
  for (unsigned m = 1; m <= n; ++m) {
    phin = phi(phin);
    IntPoly rest = phin.poly();
    for (unsigned k = 0; k < m; ++k)
      rest -= d[k].poly().pow(ipow(Int(p), m - k).get_ui()) * ipow(Int(p), k);
    try {
      d.emplace_back(f.ring(), exact_div(rest, ipow(Int(p), m)));
    } catch (const NotDivisible& e) {
      throw Defect("Joyal delta_" + std::to_string(m) + " is not integral", e.witness());
    }
  }
  return d[n];
}

bool w2_check(const DeltaPoly& f, const DeltaPoly& g) {
  const unsigned long p = f.ring()->p();
  W2Pair wf{f.poly(), delta(f).poly()};
  W2Pair wg{g.poly(), delta(g).poly()};
  W2Pair sum{(f + g).poly(), delta(f + g).poly()};
  W2Pair prod{(f * g).poly(), delta(f * g).poly()};
  return w2_add(wf, wg, p) == sum && w2_mul(wf, wg, p) == prod;
}

PowerDivisibility delta_power_divisibility(unsigned long p, unsigned n) {
  auto ring = DeltaRing::create(p, {"x"}, 2);
  DeltaPoly x = DeltaPoly::gen(ring, 0);
  DeltaPoly d = delta(x.pow(ipow(Int(p), n).get_ui()));
  try {
    return {n, d, DeltaPoly(ring, exact_div(d.poly(), ipow(Int(p), n)))};
  } catch (const NotDivisible& e) {
    throw Defect("delta(x^(p^" + std::to_string(n) + ")) is not divisible by p^" + std::to_string(n), e.witness());
  }
}

BaseElem base_delta(const BaseElem& x) {
  const auto& ring = x.ring();
  if (ring->N() < 2) throw PrecisionLoss("delta on B(p,N,M,K) needs N >= 2: it consumes one p-adic digit");
  const unsigned long p = ring->p();
  UPoly lift = x.lift();
  UPoly num = lift.compose_power(p) - lift.pow(p);
  std::vector<Int> c = num.coeffs();
  for (auto& v : c) {
    if (!mpz_divisible_ui_p(v.get_mpz_t(), p)) throw Defect("phi(x) - x^p is not divisible by p in Z[t]", x.to_string());
    mpz_divexact_ui(v.get_mpz_t(), v.get_mpz_t(), p);
  }
  auto coarser = base_ring_create(p, ring->N() - 1, ring->M(), ring->K());
  return BaseElem::from_t_poly(coarser, UPoly(std::move(c)));
}

bool is_distinguished(const BaseElem& d) { return base_delta(d).is_unit(); }

MembershipResult distinguished_membership_check(const BaseElem& d) {
  const auto& ring = d.ring();
  if (d.is_unit()) throw std::invalid_argument("distinguished_membership_check: d must be a non-unit");
  const unsigned M = ring->M();
  ChainRing R = ChainRing::zmod(ring->p(), ring->N());
  const BaseElem phid = base_frobenius(d);
  ChainMatrix A(R, M, 2 * M);
  for (unsigned j = 0; j < M; ++j) {
    std::vector<Int> ej(M);
    ej[j] = 1;
    const BaseElem basis(ring, ej);
    const BaseElem c1 = d * basis, c2 = phid * basis;
    for (unsigned i = 0; i < M; ++i) {
      A.at(i, j) = R.from_int(c1[i]);
      A.at(i, M + j) = R.from_int(c2[i]);
    }
  }
  std::vector<ChainElem> rhs(M, R.zero());
  rhs[0] = R.from_int(static_cast<long long>(ring->p()));
  std::vector<ChainElem> sol;
  MembershipResult out;
  if (!solve_linear(A, rhs, sol)) return out;
  std::vector<Int> a(M), b(M);
  for (unsigned j = 0; j < M; ++j) {
    a[j] = Int(static_cast<long>(sol[j].c[0]));
    b[j] = Int(static_cast<long>(sol[M + j].c[0]));
  }
  out.member = true;
  out.a = BaseElem(ring, a);
  out.b = BaseElem(ring, b);
  if (!(*out.a * d + *out.b * phid == BaseElem(ring, Int(ring->p()))))
    throw Defect("membership witness does not reproduce p", d.to_string());
  return out;
}

Rat divided_power_unit(unsigned long p, unsigned k) {
  Int pf, kf, kpf;
  mpz_fac_ui(pf.get_mpz_t(), p);
  mpz_fac_ui(kf.get_mpz_t(), k);
  mpz_fac_ui(kpf.get_mpz_t(), k * p);
  Rat u(ipow(pf, k) * kf, kpf);
  u.canonicalize();
  return u;
}

namespace {

Int factorial(unsigned long n) {
  Int f;
  mpz_fac_ui(f.get_mpz_t(), n);
  return f;
}

// Free delta-ring on x and z = phi(x)/p with rational coefficients; levels
// x_j = delta^j(x), z_j = delta^j(z).
class DividedPowerContext {
 public:
  static constexpr unsigned kDepth = 6;

  explicit DividedPowerContext(unsigned long p) : p_(p) {
    std::vector<std::string> names;
    for (const char* g : {"x", "z"})
      for (unsigned j = 0; j < kDepth; ++j) names.push_back(level_name(g, j));
    vars_ = make_vars(names);
    G_.push_back(var(0, 0));
  }

  const VarList& vars() const { return vars_; }
  RatPoly var(unsigned group, unsigned level) const {
    return RatPoly::variable(vars_, group * kDepth + level);
  }

  RatPoly delta(const RatPoly& f) const {
    RatPoly num = phi_levels(f, p_, kDepth) - f.pow(p_);
    return num * Rat(1, static_cast<long>(p_));
  }

  // G_j = gamma_p iterated j times on x.
  const RatPoly& level(unsigned j) {
    while (G_.size() <= j) {
      const std::size_t i = G_.size() - 1;
      const Rat fact(factorial(p_ - 1));
      if (i == 0) {
        G_.push_back((var(1, 0) - var(0, 1)) * Rat(1 / fact));
      } else {
        const RatPoly& y = G_[i - 1];
        const RatPoly& G = G_[i];
        RatPoly Z = G * fact + delta(y);
        RatPoly num = Z.pow(p_) * Rat(ipow(Int(p_), p_ - 2)) - delta(G * fact);
        Rat denom = Rat(ipow(factorial(p_ - 1), p_ + 1));
        G_.push_back(num * Rat(1 / denom));
      }
    }
    return G_[j];
  }

  // gamma_k(G_j).
  RatPoly gamma(unsigned j, unsigned long k) {
    auto key = std::make_pair(j, k);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    RatPoly result(vars_);
    if (k < p_) {
      result = level(j).pow(k) * Rat(1, factorial(k));
    } else {
      const unsigned long m = k / p_, r = k % p_;
      const Rat u = divided_power_unit(p_, static_cast<unsigned>(m));
      Rat cofactor(factorial(m * p_), factorial(k));
      cofactor.canonicalize();
      result = gamma(j + 1, m) * level(j).pow(r) * (u * cofactor);
    }
    memo_.emplace(key, result);
    return result;
  }

  // Substitute z_j -> delta^j(phi(x)/p) inside Q[x_j].
  RatPoly specialize(const RatPoly& f) {
    unsigned needed = 0;
    for (unsigned j = 0; j < kDepth; ++j)
      if (f.degree_in(kDepth + j) > 0) needed = j + 1;
    if (z_images_.empty())
      z_images_.push_back((var(0, 0).pow(p_) + var(0, 1) * Rat(static_cast<long>(p_))) *
                          Rat(1, static_cast<long>(p_)));
    while (z_images_.size() < needed) z_images_.push_back(delta(z_images_.back()));
    std::vector<RatPoly> images;
    for (unsigned j = 0; j < kDepth; ++j) images.push_back(var(0, j));
    for (unsigned j = 0; j < kDepth; ++j) images.push_back(j < z_images_.size() ? z_images_[j] : var(1, j));
    return f.substitute(images);
  }

 private:
  unsigned long p_;
  VarList vars_;
  std::vector<RatPoly> G_;
  std::map<std::pair<unsigned, unsigned long>, RatPoly> memo_;
  std::vector<RatPoly> z_images_;
};

DividedPowerCertificate certify(DividedPowerContext& ctx, unsigned long p, unsigned n) {
  DividedPowerCertificate cert;
  cert.p = p;
  cert.n = n;
  try {
    cert.expression = ctx.gamma(0, n);
  } catch (const DepthExceeded& e) {
    throw DepthExceeded("divided_power_certificate(" + std::to_string(n) + "): " + e.what());
  }
  for (unsigned long k = n; k >= p; k /= p) cert.units.emplace_back(k / p, divided_power_unit(p, k / p));
  for (const auto& [e, c] : cert.expression.terms()) {
    if (mpz_divisible_ui_p(c.get_den_mpz_t(), p)) {
      RatPoly witness(cert.expression.vars());
      witness.add_term(e, c);
      throw NonIntegralCoefficient("gamma_" + std::to_string(n) + " has a coefficient with p in the denominator",
                                   witness.to_string());
    }
  }
  cert.integral = true;
  RatPoly target = RatPoly::variable(ctx.vars(), 0, n) * Rat(1, factorial(n));
  RatPoly value = ctx.specialize(cert.expression);
  if (!(value == target)) throw Mismatch("gamma_" + std::to_string(n) + " certificate does not evaluate to x^n/n!", (value - target).to_string());
  cert.verified = true;
  return cert;
}

}  // namespace

DividedPowerCertificate divided_power_certificate(unsigned long p, unsigned n) {
  if (!is_prime(p)) throw std::invalid_argument("divided_power_certificate: p is not prime");
  DividedPowerContext ctx(p);
  return certify(ctx, p, n);
}

std::vector<DividedPowerCertificate> divided_power_certificates(unsigned long p, unsigned n_max) {
  if (!is_prime(p)) throw std::invalid_argument("divided_power_certificates: p is not prime");
  DividedPowerContext ctx(p);
  std::vector<DividedPowerCertificate> out;
  for (unsigned n = 0; n <= n_max; ++n) out.push_back(certify(ctx, p, n));
  return out;
}

}  // namespace prism
