#include "prism/qpd.hpp"

#include <mutex>
#include <numeric>
#include <sstream>
#include <tuple>

#include "prism/errors.hpp"
#include "prism/qcalc.hpp"

namespace prism {

QPDModule::QPDModule(BaseRingPtr base, std::vector<Block> blocks) : base_(std::move(base)), blocks_(std::move(blocks)) {
  if (base_->K() < 1) throw RootDepthUnsupported("the q-PD envelope needs root depth K >= 1");
  for (const auto& b : blocks_) r_ += b.vars;
  denom_ = ipow(Int(base_->p()), base_->K()).get_ui();
}

QPDModulePtr QPDModule::create(BaseRingPtr base, unsigned r, std::uint64_t D) {
  if (r == 0) throw std::invalid_argument("QPDModule: r must be positive");
  const std::uint64_t denom = ipow(Int(base->p()), base->K()).get_ui();
  return from_blocks(std::move(base), {Block{r, D * denom}});
}

QPDModulePtr QPDModule::from_blocks(BaseRingPtr base, std::vector<Block> blocks) {
  return QPDModulePtr(new QPDModule(std::move(base), std::move(blocks)));
}

bool QPDModule::in_range(const Exponents& e) const {
  if (e.size() != r_) return false;
  std::size_t pos = 0;
  for (const auto& b : blocks_) {
    std::uint64_t s = 0;
    for (unsigned k = 0; k < b.vars; ++k) s += e[pos++];
    if (s > b.bound) return false;
  }
  return true;
}

namespace {

void enumerate_block(unsigned vars, std::uint64_t bound, Exponents& cur, std::vector<Exponents>& out) {
  if (cur.size() == vars) {
    out.push_back(cur);
    return;
  }
  for (std::uint64_t a = 0; a <= bound; ++a) {
    cur.push_back(static_cast<std::uint32_t>(a));
    enumerate_block(vars, bound - a, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<Exponents> QPDModule::basis() const {
  std::vector<Exponents> acc{Exponents{}};
  for (const auto& b : blocks_) {
    std::vector<Exponents> part;
    Exponents cur;
    enumerate_block(b.vars, b.bound, cur, part);
    std::vector<Exponents> next;
    next.reserve(acc.size() * part.size());
    for (const auto& a : acc)
      for (const auto& q : part) {
        Exponents e = a;
        e.insert(e.end(), q.begin(), q.end());
        next.push_back(std::move(e));
      }
    acc = std::move(next);
  }
  return acc;
}

std::size_t QPDModule::basis_size() const {
  std::size_t total = 1;
  for (const auto& b : blocks_) {
    // Compositions of at most `bound` into `vars` parts: C(bound + vars, vars).
    Int c;
    mpz_bin_uiui(c.get_mpz_t(), b.bound + b.vars, b.vars);
    total *= c.get_ui();
  }
  return total;
}

QPDModulePtr QPDModule::frobenius_target() const {
  std::vector<Block> blocks = blocks_;
  for (auto& b : blocks) b.bound *= p();
  return from_blocks(base_, std::move(blocks));
}

std::string QPDModule::degree_string(const Exponents& e) const {
  std::ostringstream os;
  os << "(";
  for (std::size_t s = 0; s < e.size(); ++s) {
    if (s) os << ",";
    const std::uint64_t g = std::gcd<std::uint64_t, std::uint64_t>(e[s], denom_);
    if (e[s] == 0)
      os << 0;
    else if (g == denom_)
      os << e[s] / denom_;
    else
      os << e[s] / g << "/" << denom_ / g;
  }
  os << ")";
  return os.str();
}

std::string QPDModule::describe() const {
  std::ostringstream os;
  os << "QPD(" << base_->describe() << "; r=" << r_ << "; bounds";
  for (const auto& b : blocks_) os << " " << b.vars << ":" << b.bound << "/" << denom_;
  os << ")";
  return os.str();
}

bool QPDModule::operator==(const QPDModule& o) const {
  if (!(*base_ == *o.base_) || blocks_.size() != o.blocks_.size()) return false;
  for (std::size_t k = 0; k < blocks_.size(); ++k)
    if (blocks_[k].vars != o.blocks_[k].vars || blocks_[k].bound != o.blocks_[k].bound) return false;
  return true;
}

namespace {

void check_module(const QPDModulePtr& a, const QPDModulePtr& b) {
  if (a != b && !(*a == *b)) throw MixedRings("q-PD elements from different modules: " + a->describe() + " vs " + b->describe());
}

std::mutex cache_mu;

/// [c]!/([a]! [b]!) in Z[q].
UPoly factorial_ratio(unsigned long a, unsigned long b, unsigned long c) {
  static std::map<std::tuple<unsigned long, unsigned long, unsigned long>, UPoly> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto it = cache.find({a, b, c});
    if (it != cache.end()) return it->second;
  }
  UPoly v;
  try {
    v = exact_div(q_factorial(c), q_factorial(a) * q_factorial(b));
  } catch (const NotDivisible& e) {
    throw Defect("structure constant [" + std::to_string(c) + "]!/([" + std::to_string(a) + "]![" +
                     std::to_string(b) + "]!) is not integral",
                 e.witness());
  }
  std::lock_guard<std::mutex> lock(cache_mu);
  return cache.emplace(std::make_tuple(a, b, c), std::move(v)).first->second;
}

/// [fip]! / phi([fi]!) in Z[q].
UPoly frobenius_ratio(unsigned long p, unsigned long fi, unsigned long fip) {
  static std::map<std::tuple<unsigned long, unsigned long, unsigned long>, UPoly> cache;
  {
    std::lock_guard<std::mutex> lock(cache_mu);
    auto it = cache.find({p, fi, fip});
    if (it != cache.end()) return it->second;
  }
  UPoly v;
  try {
    v = exact_div(q_factorial(fip), q_frobenius(q_factorial(fi), p));
  } catch (const NotDivisible& e) {
    throw Defect("[" + std::to_string(fip) + "]_q! is not divisible by phi([" + std::to_string(fi) + "]_q!)",
                 e.witness());
  }
  std::lock_guard<std::mutex> lock(cache_mu);
  return cache.emplace(std::make_tuple(p, fi, fip), std::move(v)).first->second;
}

}  // namespace

QPDElem::QPDElem(QPDModulePtr module) : module_(std::move(module)) {}

QPDElem QPDElem::basis(const QPDModulePtr& module, const Exponents& e) {
  return basis(module, e, BaseElem::one(module->base()));
}

QPDElem QPDElem::basis(const QPDModulePtr& module, const Exponents& e, const BaseElem& c) {
  if (!module->in_range(e)) throw DegreeOverflow("degree " + module->degree_string(e) + " is outside " + module->describe());
  QPDElem x(module);
  x.add_term(e, c);
  return x;
}

QPDElem QPDElem::one(const QPDModulePtr& module) { return basis(module, Exponents(module->r(), 0)); }

BaseElem QPDElem::coefficient(const Exponents& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? BaseElem::zero(module_->base()) : it->second;
}

void QPDElem::add_term(const Exponents& e, const BaseElem& c) {
  if (!module_->in_range(e)) throw DegreeOverflow("degree " + module_->degree_string(e) + " is outside " + module_->describe());
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

QPDElem& QPDElem::operator+=(const QPDElem& o) {
  check_module(module_, o.module_);
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

QPDElem& QPDElem::operator-=(const QPDElem& o) {
  check_module(module_, o.module_);
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

QPDElem operator*(const BaseElem& s, const QPDElem& a) {
  QPDElem out(a.module_);
  for (const auto& [e, c] : a.terms_) out.add_term(e, s * c);
  return out;
}

bool operator==(const QPDElem& a, const QPDElem& b) {
  if (!(*a.module_ == *b.module_)) return false;
  return a.terms_ == b.terms_;
}

std::string QPDElem::to_string() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.to_string() + ")*e" + module_->degree_string(e);
  }
  return out;
}

UPoly qpd_structure_constant(const QPDModule& m, const Exponents& i, const Exponents& j) {
  UPoly c(1);
  for (std::size_t s = 0; s < i.size(); ++s)
    c *= factorial_ratio(m.floor_of(i[s]), m.floor_of(j[s]), m.floor_of(i[s] + j[s]));
  return c;
}

UPoly qpd_frobenius_constant(const QPDModule& m, const Exponents& i) {
  UPoly c(1);
  for (std::size_t s = 0; s < i.size(); ++s)
    c *= frobenius_ratio(m.p(), m.floor_of(i[s]), m.floor_of(i[s] * m.p()));
  return c;
}

QPDElem qpd_mul(const QPDElem& a, const QPDElem& b) {
  check_module(a.module(), b.module());
  const QPDModule& m = *a.module();
  QPDElem out(a.module());
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      Exponents e(ea.size());
      for (std::size_t s = 0; s < e.size(); ++s) e[s] = ea[s] + eb[s];
      if (!m.in_range(e)) throw DegreeOverflow("product degree " + m.degree_string(e) + " exceeds " + m.describe());
      BaseElem c = BaseElem::from_q_poly(m.base(), qpd_structure_constant(m, ea, eb));
      out.add_term(e, c * ca * cb);
    }
  return out;
}

QPDElem qpd_pow(const QPDElem& a, unsigned k) {
  QPDElem acc = QPDElem::one(a.module());
  for (unsigned j = 0; j < k; ++j) acc = qpd_mul(acc, a);
  return acc;
}

QPDElem qpd_frobenius(const QPDElem& a) {
  const QPDModule& m = *a.module();
  QPDModulePtr target = m.frobenius_target();
  QPDElem out(target);
  for (const auto& [e, c] : a.terms()) {
    Exponents pe(e.size());
    for (std::size_t s = 0; s < e.size(); ++s) pe[s] = static_cast<std::uint32_t>(e[s] * m.p());
    BaseElem lam = BaseElem::from_q_poly(m.base(), qpd_frobenius_constant(m, e));
    out.add_term(pe, lam * base_frobenius(c));
  }
  return out;
}

PowerDivisibilityCertificate q_power_divisibility(const QPDModulePtr& m, unsigned n) {
  if (m->r() != 1) throw std::invalid_argument("q_power_divisibility needs the one-variable module");
  PowerDivisibilityCertificate out;
  out.n = n;
  const std::uint32_t d = static_cast<std::uint32_t>(m->denominator());
  QPDElem y = QPDElem::basis(m, {d});
  QPDElem lhs = qpd_pow(y, n);
  QPDElem rhs = QPDElem::basis(m, {d * n}, BaseElem::from_q_poly(m->base(), q_factorial(n)));
  out.basis_identity = lhs == rhs;
  out.nonzerodivisors = true;
  for (unsigned long k = 0; k * m->p() <= n; ++k) {
    out.checked_m.push_back(k);
    if (!frobenius_factorial_nonzerodivisor(m->p(), k).nonzerodivisor) out.nonzerodivisors = false;
  }
  return out;
}

GammaOfY qpd_gamma_Y(const QPDModulePtr& m) {
  if (m->r() != 1) throw std::invalid_argument("qpd_gamma_Y needs the one-variable module");
  const std::uint32_t d = static_cast<std::uint32_t>(m->denominator());
  QPDElem phiy = qpd_frobenius(QPDElem::basis(m, {d}));
  const QPDModulePtr& target = phiy.module();
  const UPoly lam = qpd_frobenius_constant(*m, {d});
  UPoly c;
  try {
    c = exact_div(lam, q_int(m->p()));
  } catch (const NotDivisible& e) {
    throw Defect("phi(Y) is not divisible by [p]_q", e.witness());
  }
  // The e_p coordinate of phi(Y) in the base must be the image of lam.
  const Exponents ep{static_cast<std::uint32_t>(d * m->p())};
  if (!(phiy.coefficient(ep) == BaseElem::from_q_poly(m->base(), lam)))
    throw Mismatch("phi(Y) disagrees with its structure constant", phiy.to_string());
  return GammaOfY{c, QPDElem::basis(target, ep, BaseElem::from_q_poly(m->base(), c))};
}

unsigned nygaard_power(const QPDModule& m, const Exponents& i, unsigned n) {
  std::uint64_t f = 0;
  for (auto a : i) f += m.floor_of(a);
  return f >= n ? 0u : static_cast<unsigned>(n - f);
}

std::vector<NygaardGenerator> nygaard_filtration(const QPDModulePtr& m, unsigned n) {
  const BaseElem root = base_q_root_int(m->base(), m->p(), 1);
  std::vector<NygaardGenerator> out;
  for (auto& i : m->basis()) {
    const unsigned e = nygaard_power(*m, i, n);
    QPDElem g = QPDElem::basis(m, i, root.pow(e));
    out.push_back(NygaardGenerator{std::move(i), e, std::move(g)});
  }
  return out;
}

bool in_conjugate_filtration(const QPDModule& target, const Exponents& j, unsigned n) {
  std::uint64_t f = 0;
  for (auto a : j) f += a / (target.denominator() * target.p());
  return f <= n;
}

namespace {

struct CoordinateData {
  UPoly lambda_t;
  unsigned valuation = 0;  // Phi-adic valuation of lambda_t
  Int at_one;
};

unsigned phi_valuation(UPoly f, const UPoly& phi) {
  unsigned v = 0;
  while (!f.is_zero()) {
    UDivision d = divmod(f, phi);
    if (!d.exact) break;
    f = std::move(d.quotient);
    ++v;
  }
  return v;
}

}  // namespace

NygaardReport nygaard_verify(const QPDModulePtr& mp, unsigned n) {
  const QPDModule& m = *mp;
  for (const auto& b : m.blocks())
    if ((n + 1ULL) * m.denominator() > b.bound)
      throw std::invalid_argument("nygaard_verify: need n + 1 <= D so that no truncation reaches the image");
  const unsigned long p = m.p();
  const std::uint64_t pk = m.denominator();
  const UPoly Phi = q_int(p).compose_power(pk);      // [p]_q as a polynomial in t
  const UPoly PhiN = Phi.pow(n);

  NygaardReport rep;
  rep.n = n;
  std::map<std::uint32_t, CoordinateData> coords;
  auto coord = [&](std::uint32_t a) -> const CoordinateData& {
    auto it = coords.find(a);
    if (it != coords.end()) return it->second;
    CoordinateData c;
    const UPoly lam = frobenius_ratio(p, m.floor_of(a), m.floor_of(a * p));
    c.lambda_t = lam.compose_power(pk);
    c.valuation = phi_valuation(c.lambda_t, Phi);
    c.at_one = lam.eval(Int(1));
    return coords.emplace(a, std::move(c)).first->second;
  };
  auto fail = [&](bool& flag, const std::string& msg) {
    flag = false;
    if (rep.failures.size() < 20) rep.failures.push_back(msg);
  };

  for (const auto& i : m.basis()) {
    ++rep.degrees;
    const unsigned e = nygaard_power(m, i, n);
    std::uint64_t floors = 0;
    unsigned val = e;
    Rat at_one(1);
    for (auto a : i) {
      const auto& c = coord(a);
      floors += m.floor_of(a);
      val += c.valuation;
      at_one *= Rat(c.at_one);
    }
    const std::string deg = m.degree_string(i);
    if (val < n) fail(rep.divisible, "phi(g) not divisible by [p]_q^n at " + deg);
    bool nonzero = val == n;

    if (i.size() == 1) {
      // Direct route: divide phi(g) by [p]_q^n in Z[t] and reduce mod [p]_q.
      const auto& c = coord(i[0]);
      UPoly image = Phi.pow(e) * c.lambda_t;
      UDivision q = divmod(image, PhiN);
      if (!q.exact) {
        fail(rep.divisible, "exact division by [p]_q^n fails at " + deg);
      } else {
        const bool direct = !divmod(q.quotient, Phi).remainder.is_zero();
        if (direct != nonzero) fail(rep.image, "valuation and direct reduction disagree at " + deg);
        nonzero = direct;
      }
      if (e > 0 && divmod(Phi.pow(e - 1) * c.lambda_t, PhiN).exact)
        fail(rep.minimal, "generator power can be lowered at " + deg);
    }
    if (e > 0 && val - 1 >= n) fail(rep.minimal, "generator power can be lowered at " + deg);

    const bool expected = floors <= n;
    if (nonzero != expected)
      fail(rep.image, std::string("image mod [p]_q is ") + (nonzero ? "nonzero" : "zero") + " at " + deg);
    if (expected) ++rep.expected_rank;
    if (nonzero) {
      Exponents target(i.size());
      for (std::size_t s = 0; s < i.size(); ++s) target[s] = static_cast<std::uint32_t>(i[s] * p);
      rep.image_degrees.push_back(std::move(target));
      // The residue is a unit of Z_p[zeta] iff its value at t = 1 is prime to p.
      Rat u = at_one * Rat(ipow(Int(p), e)) / Rat(ipow(Int(p), n));
      if (u.get_den() != 1 || mpz_divisible_ui_p(u.get_num().get_mpz_t(), p))
        fail(rep.graded, "gr^n coefficient is not a unit at " + deg);
      else
        ++rep.gr_rank;
    }
  }
  return rep;
}

FiltrationProductReport nygaard_multiplicativity(const QPDModulePtr& mp, unsigned n, unsigned k) {
  const QPDModule& m = *mp;
  const std::uint64_t pk = m.denominator();
  const UPoly Psi = q_int(m.p()).compose_power(pk / m.p());  // [p]_{q^(1/p)} in t
  FiltrationProductReport rep;
  const auto basis = m.basis();
  for (const auto& i : basis) {
    const unsigned en = nygaard_power(m, i, n), en1 = nygaard_power(m, i, n + 1);
    if (!divmod(Psi.pow(en1), Psi.pow(en)).exact) {
      rep.decreasing = false;
      rep.failures.push_back("Fil^(n+1) not in Fil^n at " + m.degree_string(i));
    }
    for (const auto& j : basis) {
      Exponents ij(i.size());
      for (std::size_t s = 0; s < i.size(); ++s) ij[s] = i[s] + j[s];
      if (!m.in_range(ij)) continue;
      ++rep.pairs;
      const unsigned a = en, b = nygaard_power(m, j, k), c = nygaard_power(m, ij, n + k);
      UPoly prod = Psi.pow(a + b) * qpd_structure_constant(m, i, j).compose_power(pk);
      if (!divmod(prod, Psi.pow(c)).exact) {
        rep.multiplicative = false;
        if (rep.failures.size() < 20)
          rep.failures.push_back("Fil^n Fil^k not in Fil^(n+k) at " + m.degree_string(i) + " * " + m.degree_string(j));
      }
    }
  }
  return rep;
}

QPDModulePtr kunneth_product(const QPDModulePtr& a, const QPDModulePtr& b) {
  if (!(*a->base() == *b->base()))
    throw MixedRings("Kunneth product over different bases: " + a->base()->describe() + " vs " + b->base()->describe());
  std::vector<QPDModule::Block> blocks = a->blocks();
  blocks.insert(blocks.end(), b->blocks().begin(), b->blocks().end());
  return QPDModule::from_blocks(a->base(), std::move(blocks));
}

QPDElem qpd_tensor(const QPDModulePtr& product, const QPDElem& a, const QPDElem& b) {
  if (product->r() != a.module()->r() + b.module()->r())
    throw MixedRings("tensor factors do not match the product module");
  QPDElem out(product);
  for (const auto& [ea, ca] : a.terms())
    for (const auto& [eb, cb] : b.terms()) {
      Exponents e = ea;
      e.insert(e.end(), eb.begin(), eb.end());
      out.add_term(e, ca * cb);
    }
  return out;
}

}  // namespace prism
