#include "prism/qderham.hpp"

#include <algorithm>
#include <bit>
#include <mutex>
#include <set>
#include <sstream>
#include <tuple>

#include "prism/errors.hpp"

namespace prism {

namespace {

BaseRingPtr ring_with_M(const BaseRingPtr& ring, unsigned M) {
  static std::mutex mu;
  static std::map<std::tuple<unsigned long, unsigned, unsigned, unsigned>, BaseRingPtr> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_tuple(ring->p(), ring->N(), M, ring->K());
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  return cache.emplace(key, base_ring_create(ring->p(), ring->N(), M, ring->K())).first->second;
}

void check_cap(const LPoly& f, int cap) {
  if (f.spread() > cap)
    throw WindowOverflow("exponent beyond the ambient bound " + std::to_string(cap) + " during a framing computation");
}

Monomial unit_vector(unsigned r, unsigned s, int v = 1) {
  Monomial e(r, 0);
  e[s] = v;
  return e;
}

}  // namespace

// ---------------------------------------------------------------- LPoly

LPoly::LPoly(BaseRingPtr ring, unsigned nvars) : ring_(std::move(ring)), nvars_(nvars) {}

LPoly LPoly::constant(const BaseRingPtr& ring, unsigned nvars, const BaseElem& c) {
  LPoly f(ring, nvars);
  f.add_term(Monomial(nvars, 0), c);
  return f;
}

LPoly LPoly::monomial(const BaseRingPtr& ring, const Monomial& e, const BaseElem& c) {
  LPoly f(ring, static_cast<unsigned>(e.size()));
  f.add_term(e, c);
  return f;
}

LPoly LPoly::variable(const BaseRingPtr& ring, unsigned nvars, unsigned s) {
  return monomial(ring, unit_vector(nvars, s), BaseElem::one(ring));
}

BaseElem LPoly::coefficient(const Monomial& e) const {
  auto it = terms_.find(e);
  return it == terms_.end() ? BaseElem::zero(ring_) : it->second;
}

int LPoly::spread() const {
  int m = 0;
  for (const auto& [e, c] : terms_)
    for (int v : e) m = std::max(m, std::abs(v));
  return m;
}

void LPoly::add_term(const Monomial& e, const BaseElem& c) {
  if (c.is_zero()) return;
  auto [it, fresh] = terms_.emplace(e, c);
  if (!fresh) {
    it->second += c;
    if (it->second.is_zero()) terms_.erase(it);
  }
}

LPoly& LPoly::operator+=(const LPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LPoly& LPoly::operator-=(const LPoly& o) {
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

LPoly operator*(const LPoly& a, const LPoly& b) {
  LPoly out(a.ring_, a.nvars_);
  Monomial e(a.nvars_);
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      for (unsigned s = 0; s < a.nvars_; ++s) e[s] = ea[s] + eb[s];
      out.add_term(e, ca * cb);
    }
  return out;
}

LPoly operator*(const BaseElem& s, const LPoly& a) {
  LPoly out(a.ring_, a.nvars_);
  for (const auto& [e, c] : a.terms_) out.add_term(e, s * c);
  return out;
}

bool operator==(const LPoly& a, const LPoly& b) { return a.nvars_ == b.nvars_ && a.terms_ == b.terms_; }

LPoly LPoly::shifted(const Monomial& d) const {
  LPoly out(ring_, nvars_);
  for (const auto& [e, c] : terms_) {
    Monomial f = e;
    for (unsigned s = 0; s < nvars_; ++s) f[s] += d[s];
    out.terms_.emplace(std::move(f), c);
  }
  return out;
}

LPoly LPoly::reduce_to(const BaseRingPtr& coarser) const {
  if (ring_ == coarser || *ring_ == *coarser) return *this;
  LPoly out(coarser, nvars_);
  for (const auto& [e, c] : terms_) out.add_term(e, c.reduce_to(coarser));
  return out;
}

std::string LPoly::to_string(const std::vector<std::string>& names) const {
  if (terms_.empty()) return "0";
  std::string out;
  for (const auto& [e, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += c.to_string();
    for (unsigned s = 0; s < nvars_; ++s) {
      if (e[s] == 0) continue;
      out += "*" + (s < names.size() ? names[s] : "x" + std::to_string(s));
      if (e[s] != 1) out += "^" + std::to_string(e[s]);
    }
  }
  return out;
}

LPoly invert_unit_perturbation(const LPoly& f, int cap) {
  const auto& ring = f.ring();
  const Monomial* lead = nullptr;
  BaseElem c;
  for (const auto& [e, v] : f.terms()) {
    if (!v.is_unit()) continue;
    if (lead) throw Defect("not a unit perturbation of a monomial (two unit terms)", f.to_string({}));
    lead = &e;
    c = v;
  }
  if (!lead) throw Defect("not a unit perturbation of a monomial (no unit term)", f.to_string({}));
  Monomial neg = *lead;
  for (auto& v : neg) v = -v;
  const LPoly lead_inv = LPoly::monomial(ring, neg, c.inverse());
  LPoly m = f * lead_inv;
  m -= LPoly::constant(ring, f.nvars(), BaseElem::one(ring));
  for (const auto& [e, v] : m.terms())
    if (v.is_unit()) throw Defect("perturbation is not in the maximal ideal", f.to_string({}));
  LPoly minus_m = BaseElem(ring, Int(-1)) * m;
  LPoly acc = LPoly::constant(ring, f.nvars(), BaseElem::one(ring));
  LPoly term = acc;
  const unsigned limit = ring->N() + ring->M() + 1;
  for (unsigned k = 1;; ++k) {
    term = term * minus_m;
    check_cap(term, cap);
    if (term.is_zero()) break;
    if (k > limit) throw Defect("geometric series did not terminate", f.to_string({}));
    acc += term;
  }
  return acc * lead_inv;
}

LPoly substitute(const LPoly& f, const std::vector<LPoly>& images, const std::vector<LPoly>& inverse_images, int cap) {
  const auto& ring = f.ring();
  const unsigned r = f.nvars();
  const unsigned out_vars = images.empty() ? r : images[0].nvars();
  std::vector<std::map<int, LPoly>> powers(r);
  auto power = [&](unsigned j, int k) -> const LPoly& {
    auto& table = powers[j];
    if (table.empty()) table.emplace(0, LPoly::constant(ring, out_vars, BaseElem::one(ring)));
    const int step = k > 0 ? 1 : -1;
    int have = 0;
    while (table.count(have + step) && have != k) have += step;
    if (have != k) {
      const LPoly& base = step > 0 ? images[j] : inverse_images.at(j);
      if (base.nvars() == 0) throw Defect("negative power of a polynomial generator");
      const LPoly b = base.reduce_to(ring);
      for (; have != k; have += step) {
        LPoly next = table.at(have) * b;
        check_cap(next, cap);
        table.emplace(have + step, std::move(next));
      }
    }
    return table.at(k);
  };
  LPoly out(ring, out_vars);
  for (const auto& [e, c] : f.terms()) {
    LPoly term = LPoly::constant(ring, out_vars, c);
    for (unsigned j = 0; j < r; ++j)
      if (e[j] != 0) term = term * power(j, e[j]);
    out += term;
  }
  check_cap(out, cap);
  return out;
}

// ---------------------------------------------------------------- FramedAlgebra

FramedAlgebraPtr FramedAlgebra::create(BaseRingPtr base, std::vector<Generator> gens, std::vector<LPoly> coordinates,
                                       int cap) {
  if (base->K() != 0) throw RootDepthUnsupported("q-de Rham complexes are built at root depth K = 0");
  if (base->M() < 2) throw PrecisionLoss("q-de Rham complexes need M >= 2 to divide by q - 1");
  if (gens.empty()) throw std::invalid_argument("framed algebra needs at least one generator");
  const unsigned r = static_cast<unsigned>(gens.size());
  std::set<std::string> seen;
  for (const auto& g : gens)
    if (!seen.insert(g.name).second) throw std::invalid_argument("duplicate generator " + g.name);

  std::shared_ptr<FramedAlgebra> P(new FramedAlgebra());
  P->base_ = base;
  P->derived_ = ring_with_M(base, base->M() - 1);
  P->gens_ = std::move(gens);
  P->cap_ = cap;
  if (coordinates.empty())
    for (unsigned s = 0; s < r; ++s) coordinates.push_back(LPoly::variable(base, r, s));
  if (coordinates.size() != r) throw std::invalid_argument("one coordinate per generator is required");

  const unsigned limit = base->N() + base->M() + 2;
  std::vector<LPoly> perturb;
  for (unsigned s = 0; s < r; ++s) {
    LPoly E = coordinates[s].reduce_to(base);
    if (E.nvars() != r) throw std::invalid_argument("coordinate has the wrong number of variables");
    P->check_element(E);
    LPoly n = E - LPoly::variable(base, r, s);
    for (const auto& [e, c] : n.terms())
      if (c.is_unit())
        throw std::invalid_argument("coordinate for " + P->gens_[s].name +
                                    " is not a unit perturbation: a coefficient lies outside (p, q-1)");
    CoordinateKind kind;
    if (n.is_zero()) {
      kind = CoordinateKind::Identity;
    } else if (P->gens_[s].laurent) {
      kind = CoordinateKind::Laurent;
    } else {
      bool all_pos = true, all_zero = true;
      for (const auto& [e, c] : n.terms()) {
        all_pos = all_pos && e[s] >= 1;
        all_zero = all_zero && e[s] == 0;
      }
      if (all_pos)
        kind = CoordinateKind::Multiplicative;
      else if (all_zero)
        kind = CoordinateKind::Additive;
      else
        throw std::invalid_argument("coordinate for polynomial generator " + P->gens_[s].name +
                                    " must be x*(1+m) or x+m with m free of x");
    }
    P->kinds_.push_back(kind);
    P->coords_.push_back(E);
    perturb.push_back(std::move(n));
  }
  for (unsigned s = 0; s < r; ++s) {
    P->coords_inv_.push_back(P->gens_[s].laurent ? invert_unit_perturbation(P->coords_[s], cap) : LPoly());
    if (P->kinds_[s] == CoordinateKind::Multiplicative) {
      LPoly u = P->coords_[s].shifted(unit_vector(r, s, -1));
      P->unit_inv_.push_back(invert_unit_perturbation(u, cap));
    } else {
      P->unit_inv_.push_back(LPoly());
    }
  }

  // x = x' - n(x), solved by fixed-point iteration in the coordinates.
  std::vector<LPoly> X, Xinv(r);
  for (unsigned s = 0; s < r; ++s) X.push_back(LPoly::variable(base, r, s));
  auto refresh_inv = [&]() {
    for (unsigned s = 0; s < r; ++s)
      if (P->gens_[s].laurent) Xinv[s] = invert_unit_perturbation(X[s], cap);
  };
  refresh_inv();
  bool converged = false;
  for (unsigned it = 0; it <= limit && !converged; ++it) {
    std::vector<LPoly> next;
    for (unsigned s = 0; s < r; ++s) next.push_back(LPoly::variable(base, r, s) - substitute(perturb[s], X, Xinv, cap));
    converged = next == X;
    X = std::move(next);
    refresh_inv();
  }
  if (!converged) throw Defect("inverse coordinates did not converge");
  P->inverse_ = X;
  P->inverse_inv_ = Xinv;

  // gamma_s: x' -> q^(delta) x', re-expanded in the generators.
  const BaseElem q = BaseElem::q(base), qinv = BaseElem::q_power(base, -1);
  for (unsigned s = 0; s < r; ++s) {
    std::vector<LPoly> img = P->coords_, img_inv = P->coords_inv_;
    img[s] = q * img[s];
    if (P->gens_[s].laurent) img_inv[s] = qinv * img_inv[s];
    std::vector<LPoly> g, ginv(r);
    for (unsigned j = 0; j < r; ++j) {
      g.push_back(substitute(P->inverse_[j], img, img_inv, cap));
      P->check_element(g.back());
      if (P->gens_[j].laurent) ginv[j] = invert_unit_perturbation(g.back(), cap);
    }
    P->gamma_.push_back(std::move(g));
    P->gamma_inv_.push_back(std::move(ginv));
  }
  return P;
}

std::vector<std::string> FramedAlgebra::names() const {
  std::vector<std::string> out;
  for (const auto& g : gens_) out.push_back(g.name);
  return out;
}

bool FramedAlgebra::is_standard() const {
  for (auto k : kinds_)
    if (k != CoordinateKind::Identity) return false;
  return true;
}

std::string FramedAlgebra::describe() const {
  std::ostringstream os;
  os << base_->describe() << "[";
  for (unsigned s = 0; s < r(); ++s) os << (s ? ", " : "") << gens_[s].name << (gens_[s].laurent ? "^+-1" : "");
  os << "]";
  if (!is_standard()) {
    os << " framed by";
    for (unsigned s = 0; s < r(); ++s) os << " " << gens_[s].name << "' = " << coords_[s].to_string(names()) << ";";
  }
  return os.str();
}

void FramedAlgebra::check_element(const LPoly& f) const {
  for (const auto& [e, c] : f.terms())
    for (unsigned s = 0; s < e.size(); ++s)
      if (e[s] < 0 && !gens_[s].laurent)
        throw std::invalid_argument("negative power of polynomial generator " + gens_[s].name);
}

LPoly FramedAlgebra::coordinate_monomial(const Monomial& k) const {
  return substitute(LPoly::monomial(base_, k, BaseElem::one(base_)), coords_, coords_inv_, cap_);
}

LPoly FramedAlgebra::to_coordinates(const LPoly& g) const { return substitute(g, inverse_, inverse_inv_, cap_); }

LPoly gamma_s(const FramedAlgebra& P, const LPoly& f, unsigned s) {
  return substitute(f, P.gamma_images(s), P.gamma_inverse_images(s), P.cap());
}

LPoly nabla_q_s(const FramedAlgebra& P, const LPoly& f, unsigned s) {
  const BaseRingPtr& ring = f.ring();
  if (ring->M() < 2) throw PrecisionLoss("nabla_q needs M >= 2");
  const BaseRingPtr out_ring = ring_with_M(ring, ring->M() - 1);
  const unsigned r = P.r();
  LPoly diff = gamma_s(P, f, s) - f;
  LPoly quo(out_ring, r);
  for (const auto& [e, c] : diff.terms()) {
    if (c[0] != 0) throw NotDivisible("gamma_s(f) - f is not divisible by q - 1", diff.to_string(P.names()));
    std::vector<Int> shifted(c.coeffs().begin() + 1, c.coeffs().end());
    quo.add_term(e, BaseElem(out_ring, std::move(shifted)));
  }
  const Monomial down = unit_vector(r, s, -1);
  auto divide_by_x = [&](const LPoly& g) {
    if (!P.generators()[s].laurent)
      for (const auto& [e, c] : g.terms())
        if (e[s] == 0) throw NotDivisible("not divisible by " + P.generators()[s].name, g.to_string(P.names()));
    return g.shifted(down);
  };
  switch (P.kind(s)) {
    case FramedAlgebra::CoordinateKind::Laurent:
      return quo * P.coords_inv_[s].reduce_to(out_ring);
    case FramedAlgebra::CoordinateKind::Identity:
      return P.generators()[s].laurent ? quo * P.coords_inv_[s].reduce_to(out_ring) : divide_by_x(quo);
    case FramedAlgebra::CoordinateKind::Multiplicative:
      return divide_by_x(quo) * P.unit_inv_[s].reduce_to(out_ring);
    case FramedAlgebra::CoordinateKind::Additive: {
      // Long division by x_s + c with c free of x_s.
      const LPoly c = (P.coordinate(s) - LPoly::variable(P.base(), r, s)).reduce_to(out_ring);
      LPoly rem = quo, out(out_ring, r);
      for (;;) {
        int top = 0;
        for (const auto& [e, v] : rem.terms()) top = std::max(top, e[s]);
        if (top == 0) break;
        LPoly slice(out_ring, r);
        for (const auto& [e, v] : rem.terms())
          if (e[s] == top) slice.add_term(e, v);
        LPoly h = slice.shifted(down);
        out += h;
        rem -= slice;
        rem -= h * c;
      }
      if (!rem.is_zero()) throw NotDivisible("not divisible by the coordinate", rem.to_string(P.names()));
      return out;
    }
  }
  return quo;
}

BaseElem signed_q_int(const BaseRingPtr& ring, long n) {
  if (n >= 0) return base_q_int(ring, static_cast<unsigned long>(n));
  return -(BaseElem::q_power(ring, n) * base_q_int(ring, static_cast<unsigned long>(-n)));
}

// ---------------------------------------------------------------- complexes

namespace {

struct CellLayout {
  std::vector<Monomial> labels;
  std::map<Monomial, std::size_t> label_index;
  std::vector<std::vector<KoszulCell>> cells;
  std::vector<std::map<std::pair<std::size_t, unsigned>, std::size_t>> cell_index;
};

void enumerate_labels(const std::vector<Generator>& gens, int W, Monomial& cur, std::vector<Monomial>& out) {
  if (cur.size() == gens.size()) {
    out.push_back(cur);
    return;
  }
  const int lo = gens[cur.size()].laurent ? -W : 0;
  for (int v = lo; v <= W; ++v) {
    cur.push_back(v);
    enumerate_labels(gens, W, cur, out);
    cur.pop_back();
  }
}

CellLayout layout(const FramedAlgebra& P, int W) {
  if (W < 0) throw std::invalid_argument("window must be nonnegative");
  const unsigned r = P.r();
  CellLayout L;
  Monomial cur;
  enumerate_labels(P.generators(), W, cur, L.labels);
  for (std::size_t k = 0; k < L.labels.size(); ++k) L.label_index.emplace(L.labels[k], k);
  L.cells.resize(r + 1);
  L.cell_index.resize(r + 1);
  for (std::size_t k = 0; k < L.labels.size(); ++k)
    for (unsigned S = 0; S < (1u << r); ++S) {
      bool ok = true;
      for (unsigned s = 0; s < r; ++s)
        if ((S >> s & 1) && !P.generators()[s].laurent && L.labels[k][s] < 1) ok = false;
      if (!ok) continue;
      const unsigned i = static_cast<unsigned>(std::popcount(S));
      L.cell_index[i].emplace(std::make_pair(k, S), L.cells[i].size());
      L.cells[i].push_back(KoszulCell{L.labels[k], S});
    }
  return L;
}

int koszul_sign(unsigned S, unsigned s) { return std::popcount(S & ((1u << s) - 1)) % 2 ? -1 : 1; }

Monomial minus_subset(Monomial n, unsigned S) {
  for (unsigned s = 0; s < n.size(); ++s)
    if (S >> s & 1) --n[s];
  return n;
}

bool interior(const FramedAlgebra& P, const Monomial& n, int W) {
  for (unsigned s = 0; s < n.size(); ++s) {
    const int lo = P.generators()[s].laurent ? -W : 0;
    if (n[s] <= lo || n[s] >= W) return false;
  }
  return true;
}

template <class E, class Ring>
std::vector<SparseEntry<E>> flush(std::map<std::pair<std::size_t, std::size_t>, E>& acc, const Ring& is_zero) {
  std::vector<SparseEntry<E>> out;
  for (auto& [rc, v] : acc)
    if (!is_zero(v)) out.push_back(SparseEntry<E>{rc.first, rc.second, v});
  return out;
}

}  // namespace

KoszulComplex build_complex(const FramedAlgebraPtr& Pp, int window, ComplexRoute route) {
  const FramedAlgebra& P = *Pp;
  const unsigned r = P.r();
  if (route == ComplexRoute::Auto) route = P.is_standard() ? ComplexRoute::Monomial : ComplexRoute::Substitution;
  if (route == ComplexRoute::Monomial && !P.is_standard())
    throw std::invalid_argument("the monomial route needs the standard framing");
  CellLayout L = layout(P, window);
  KoszulComplex C;
  C.algebra = Pp;
  C.window = window;
  C.coeff_ring = P.derived();
  C.labels = L.labels;
  C.cells = L.cells;
  C.d.resize(r);
  auto zero = [](const BaseElem& v) { return v.is_zero(); };

  for (unsigned i = 0; i < r; ++i) {
    std::map<std::pair<std::size_t, std::size_t>, BaseElem> acc;
    for (std::size_t col = 0; col < L.cells[i].size(); ++col) {
      const auto& cell = L.cells[i][col];
      LPoly f;
      if (route == ComplexRoute::Substitution) f = P.coordinate_monomial(minus_subset(cell.label, cell.subset));
      for (unsigned s = 0; s < r; ++s) {
        if (cell.subset >> s & 1) continue;
        const unsigned T = cell.subset | (1u << s);
        const int sign = koszul_sign(cell.subset, s);
        if (route == ComplexRoute::Monomial) {
          if (!P.generators()[s].laurent && cell.label[s] == 0) continue;
          const std::size_t row = L.cell_index[i + 1].at({L.label_index.at(cell.label), T});
          BaseElem c = signed_q_int(P.base(), cell.label[s]).reduce_to(P.derived());
          auto [it, fresh] = acc.emplace(std::make_pair(row, col), sign * c);
          if (!fresh) it->second += sign * c;
          continue;
        }
        LPoly g = P.to_coordinates(nabla_q_s(P, f, s));
        for (const auto& [k, c] : g.terms()) {
          Monomial m = k;
          for (unsigned t = 0; t < r; ++t)
            if (T >> t & 1) ++m[t];
          if (m != cell.label) C.graded = false;
          auto li = L.label_index.find(m);
          if (li == L.label_index.end()) {
            ++C.leaked;
            continue;
          }
          auto ci = L.cell_index[i + 1].find({li->second, T});
          if (ci == L.cell_index[i + 1].end()) {
            ++C.leaked;
            continue;
          }
          BaseElem v = c * Int(sign);
          auto [it, fresh] = acc.emplace(std::make_pair(ci->second, col), v);
          if (!fresh) it->second += v;
        }
      }
    }
    C.d[i] = flush(acc, zero);
  }

  // d o d = 0 on interior columns.
  for (unsigned i = 0; i + 1 < r; ++i) {
    std::map<std::size_t, std::vector<const SparseEntry<BaseElem>*>> by_col;
    for (const auto& e : C.d[i + 1]) by_col[e.col].push_back(&e);
    std::map<std::pair<std::size_t, std::size_t>, BaseElem> prod;
    for (const auto& e : C.d[i]) {
      if (!interior(P, L.cells[i][e.col].label, window)) continue;
      auto it = by_col.find(e.row);
      if (it == by_col.end()) continue;
      for (const auto* f : it->second) {
        BaseElem v = f->value * e.value;
        auto [pit, fresh] = prod.emplace(std::make_pair(f->row, e.col), v);
        if (!fresh) pit->second += v;
      }
    }
    for (const auto& [rc, v] : prod)
      if (!v.is_zero())
        throw NonCommuting("d o d != 0 at label " + label_string(L.cells[i][rc.second].label), v.to_string());
  }
  // The operators themselves commute on the interior.
  if (route == ComplexRoute::Substitution && r >= 2 && P.base()->M() >= 3) {
    for (const auto& n : L.labels) {
      if (!interior(P, n, window)) continue;
      LPoly f = P.coordinate_monomial(n);
      for (unsigned s = 0; s < r; ++s)
        for (unsigned t = s + 1; t < r; ++t) {
          LPoly st = nabla_q_s(P, nabla_q_s(P, f, t), s), ts = nabla_q_s(P, nabla_q_s(P, f, s), t);
          if (!(st == ts))
            throw NonCommuting("nabla_" + P.generators()[s].name + " and nabla_" + P.generators()[t].name +
                                   " do not commute at " + label_string(n),
                               (st - ts).to_string(P.names()));
        }
    }
  }
  return C;
}

std::string to_string(Specialization s) { return s == Specialization::QToOne ? "q1" : "zeta"; }

ChainRing specialization_ring(unsigned long p, unsigned N, Specialization s) {
  return s == Specialization::QToOne ? ChainRing::zmod(p, N) : ChainRing::cyclotomic(p, N);
}

ChainElem specialize_element(const BaseElem& x, const ChainRing& R, Specialization s) {
  if (s == Specialization::QToOne) return R.from_int(x[0]);
  return R.from_pi_coords(x.coeffs());
}

ChainComplex specialize(const KoszulComplex& C, Specialization s, unsigned N) {
  const auto& B = C.coeff_ring;
  if (N > B->N()) throw PrecisionLoss("cannot specialize to p^" + std::to_string(N) + " from " + B->describe());
  ChainRing R = specialization_ring(B->p(), N, s);
  if (s == Specialization::QToZeta) {
    if (B->K() != 0) throw RootDepthUnsupported("q -> zeta_p with root depth K > 0 leaves the cyclotomic chain ring");
    if (B->M() < R.nilpotency())
      throw PrecisionLoss("q -> zeta_p needs (q-1)-precision at least " + std::to_string(R.nilpotency()) + ", have " +
                          std::to_string(B->M()));
  }
  ChainComplex out{R, static_cast<unsigned>(C.cells.size() - 1), C.window, C.labels, C.cells, {}, C.graded};
  for (const auto& di : C.d) {
    std::vector<SparseEntry<ChainElem>> m;
    for (const auto& e : di) {
      ChainElem v = specialize_element(e.value, R, s);
      if (!R.is_zero(v)) m.push_back({e.row, e.col, v});
    }
    out.d.push_back(std::move(m));
  }
  return out;
}

ChainComplex build_specialized(const FramedAlgebraPtr& Pp, int window, Specialization s, unsigned N) {
  const FramedAlgebra& P = *Pp;
  if (!P.is_standard()) throw std::invalid_argument("build_specialized needs the standard framing");
  const unsigned r = P.r();
  ChainRing R = specialization_ring(P.base()->p(), N, s);
  CellLayout L = layout(P, window);
  ChainComplex out{R, r, window, L.labels, L.cells, {}, true};
  const ChainElem zeta = R.zeta(), zeta_inv = R.pow(zeta, P.base()->p() - 1);
  auto qint = [&](long n) {
    ChainElem acc = R.zero(), z = R.one();
    const long m = n < 0 ? -n : n;
    for (long k = 0; k < m; ++k) {
      acc = R.add(acc, z);
      z = R.mul(z, zeta);
    }
    if (n < 0) acc = R.neg(R.mul(R.pow(zeta_inv, static_cast<std::uint64_t>(m)), acc));
    return acc;
  };
  for (unsigned i = 0; i < r; ++i) {
    std::vector<SparseEntry<ChainElem>> m;
    for (std::size_t col = 0; col < L.cells[i].size(); ++col) {
      const auto& cell = L.cells[i][col];
      for (unsigned t = 0; t < r; ++t) {
        if (cell.subset >> t & 1) continue;
        if (!P.generators()[t].laurent && cell.label[t] == 0) continue;
        const std::size_t row = L.cell_index[i + 1].at({L.label_index.at(cell.label), cell.subset | (1u << t)});
        ChainElem v = s == Specialization::QToOne ? R.from_int(static_cast<long long>(cell.label[t])) : qint(cell.label[t]);
        if (koszul_sign(cell.subset, t) < 0) v = R.neg(v);
        if (!R.is_zero(v)) m.push_back({row, col, v});
      }
    }
    std::sort(m.begin(), m.end(), [](const auto& a, const auto& b) { return std::tie(a.row, a.col) < std::tie(b.row, b.col); });
    out.d.push_back(std::move(m));
  }
  return out;
}

ChainMatrix ChainComplex::dense(std::size_t i) const {
  ChainMatrix m(ring, cells[i + 1].size(), cells[i].size());
  for (const auto& e : d[i]) m.at(e.row, e.col) = e.value;
  return m;
}

std::string ChainComplex::matrix_string(std::size_t i) const {
  std::ostringstream os;
  os << cells[i + 1].size() << "x" << cells[i].size() << " [";
  bool first = true;
  for (const auto& e : d[i]) {
    os << (first ? "" : ", ") << "(" << e.row << "," << e.col << "," << ring.to_string(e.value) << ")";
    first = false;
  }
  os << "]";
  return os.str();
}

std::map<Monomial, InvariantFactors> graded_cohomology(const ChainComplex& C, unsigned i, bool reverse_order) {
  if (!C.graded) throw Unstable("complex is not graded in the adapted basis; no stable components");
  if (i > C.r) throw std::invalid_argument("cohomological degree exceeds the number of coordinates");
  const ChainRing& R = C.ring;
  // Position of each cell inside its label's block.
  std::vector<std::vector<std::size_t>> pos(C.cells.size());
  std::vector<std::map<Monomial, std::size_t>> count(C.cells.size());
  for (std::size_t k = 0; k < C.cells.size(); ++k)
    for (const auto& cell : C.cells[k]) pos[k].push_back(count[k][cell.label]++);
  auto size_of = [&](std::size_t k, const Monomial& n) -> std::size_t {
    if (k >= count.size()) return 0;
    auto it = count[k].find(n);
    return it == count[k].end() ? 0 : it->second;
  };
  std::map<Monomial, ChainMatrix> prev, next;
  for (const auto& [n, size] : count[i]) {
    prev.emplace(n, ChainMatrix(R, size, i == 0 ? 0 : size_of(i - 1, n)));
    next.emplace(n, ChainMatrix(R, size_of(i + 1, n), size));
  }
  auto fill = [&](std::size_t k, std::map<Monomial, ChainMatrix>& into) {
    for (const auto& e : C.d[k]) {
      const Monomial& n = C.cells[k][e.col].label;
      if (C.cells[k + 1][e.row].label != n) throw Unstable("complex is not graded in the adapted basis");
      auto it = into.find(n);
      if (it == into.end()) continue;
      it->second.at(pos[k + 1][e.row], pos[k][e.col]) = e.value;
    }
  };
  if (i > 0) fill(i - 1, prev);
  if (i < C.r) fill(i, next);
  std::map<Monomial, InvariantFactors> out;
  for (const auto& [n, size] : count[i]) out.emplace(n, complex_cohomology(prev.at(n), next.at(n), reverse_order));
  return out;
}

CohomologyTable cohomology_invariants(const ChainComplex& a, const ChainComplex& b, unsigned i, bool reverse_order) {
  if (!(a.window < b.window)) throw std::invalid_argument("cohomology_invariants needs W < W'");
  CohomologyTable t;
  t.degree = i;
  t.window = a.window;
  t.window2 = b.window;
  auto ga = graded_cohomology(a, i, reverse_order);
  auto gb = graded_cohomology(b, i, reverse_order);
  for (const auto& [n, h] : ga) {
    auto it = gb.find(n);
    if (it != gb.end() && it->second.same_module(h)) {
      t.stable.emplace(n, h);
      t.total += h;
    } else {
      t.unstable.push_back(n);
    }
  }
  if (t.stable.empty()) throw Unstable("no graded component of H^" + std::to_string(i) + " is stable between windows");
  return t;
}

CohomologyTable cohomology_invariants(const FramedAlgebraPtr& P, Specialization s, unsigned N, unsigned i, int window,
                                      int window2) {
  ChainComplex a = specialize(build_complex(P, window), s, N);
  ChainComplex b = specialize(build_complex(P, window2), s, N);
  return cohomology_invariants(a, b, i);
}

// ---------------------------------------------------------------- classical oracle

namespace {

// Laurent polynomials over Z/p^N, kept apart from LPoly on purpose.
struct ZL {
  std::map<Monomial, Int> t;
};

struct ZArith {
  unsigned r;
  Int mod;
  Int reduce(Int v) const {
    v %= mod;
    if (v < 0) v += mod;
    return v;
  }
  void add(ZL& a, const Monomial& e, const Int& c) const {
    Int& slot = a.t[e];
    slot = reduce(slot + c);
    if (slot == 0) a.t.erase(e);
  }
  ZL plus(ZL a, const ZL& b, const Int& scale = 1) const {
    for (const auto& [e, c] : b.t) add(a, e, c * scale);
    return a;
  }
  ZL mul(const ZL& a, const ZL& b) const {
    ZL out;
    for (const auto& [ea, ca] : a.t)
      for (const auto& [eb, cb] : b.t) {
        Monomial e(r);
        for (unsigned s = 0; s < r; ++s) e[s] = ea[s] + eb[s];
        add(out, e, ca * cb);
      }
    return out;
  }
  ZL one() const {
    ZL o;
    o.t[Monomial(r, 0)] = 1;
    return o;
  }
  ZL deriv(const ZL& a, unsigned j) const {
    ZL out;
    for (const auto& [e, c] : a.t) {
      if (e[j] == 0) continue;
      Monomial f = e;
      --f[j];
      add(out, f, c * e[j]);
    }
    return out;
  }
  ZL inverse(const ZL& f) const {
    // f = c x^a (1 + m) with p | m.
    const Monomial* lead = nullptr;
    Int c;
    const Int p = [&] {
      Int q = mod;
      for (Int d = 2; d <= q; ++d)
        if (q % d == 0) return d;
      return q;
    }();
    for (const auto& [e, v] : f.t)
      if (v % p != 0) {
        if (lead) throw Defect("oracle: not a unit perturbation");
        lead = &e;
        c = v;
      }
    if (!lead) throw Defect("oracle: no unit term");
    Int cinv;
    mpz_invert(cinv.get_mpz_t(), c.get_mpz_t(), mod.get_mpz_t());
    ZL li;
    Monomial neg = *lead;
    for (auto& v : neg) v = -v;
    li.t[neg] = cinv;
    ZL m = plus(mul(f, li), one(), -1);
    ZL acc = one(), term = one();
    for (;;) {
      term = mul(term, m);
      for (auto& [e, v] : term.t) v = reduce(-v);
      if (term.t.empty()) break;
      acc = plus(acc, term);
    }
    return mul(acc, li);
  }
  ZL pow(const ZL& f, const ZL* finv, int k) const {
    ZL acc = one();
    for (int j = 0; j < std::abs(k); ++j) acc = mul(acc, k > 0 ? f : *finv);
    return acc;
  }
};

}  // namespace

CrystallineReport crystalline_reduction_check(const FramedAlgebraPtr& Pp, int window) {
  const FramedAlgebra& P = *Pp;
  const unsigned r = P.r();
  const unsigned N = P.base()->N();
  ZArith Z{r, P.base()->modulus()};
  CrystallineReport rep;

  std::vector<ZL> E(r), Einv(r);
  for (unsigned s = 0; s < r; ++s) {
    for (const auto& [e, c] : P.coordinate(s).terms()) Z.add(E[s], e, c[0]);
    if (P.generators()[s].laurent) Einv[s] = Z.inverse(E[s]);
  }
  // Jinv = sum (I - J)^k with J[s][j] = dE_s/dx_j.
  std::vector<std::vector<ZL>> J(r, std::vector<ZL>(r)), Nm(r, std::vector<ZL>(r)), Jinv(r, std::vector<ZL>(r)),
      term(r, std::vector<ZL>(r));
  for (unsigned s = 0; s < r; ++s)
    for (unsigned j = 0; j < r; ++j) {
      J[s][j] = Z.deriv(E[s], j);
      Nm[s][j] = Z.plus(s == j ? Z.one() : ZL{}, J[s][j], -1);
      term[s][j] = s == j ? Z.one() : ZL{};
      Jinv[s][j] = term[s][j];
    }
  for (unsigned k = 0; k < N + 2; ++k) {
    std::vector<std::vector<ZL>> next(r, std::vector<ZL>(r));
    for (unsigned a = 0; a < r; ++a)
      for (unsigned b = 0; b < r; ++b)
        for (unsigned c = 0; c < r; ++c) next[a][b] = Z.plus(next[a][b], Z.mul(term[a][c], Nm[c][b]));
    term = next;
    for (unsigned a = 0; a < r; ++a)
      for (unsigned b = 0; b < r; ++b) Jinv[a][b] = Z.plus(Jinv[a][b], term[a][b]);
  }
  // Jinv is (dx'/dx)^-1 with rows indexed by x', columns by x; the
  // derivative along x'_s is sum_j dF/dx_j * Jinv[j][s].
  auto coordinate_monomial = [&](const Monomial& k) {
    ZL acc = Z.one();
    for (unsigned s = 0; s < r; ++s) acc = Z.mul(acc, Z.pow(E[s], &Einv[s], k[s]));
    return acc;
  };

  ChainComplex C = specialize(build_complex(Pp, window), Specialization::QToOne, N);
  const ChainRing& R = C.ring;
  for (unsigned i = 0; i < r; ++i) {
    std::map<std::size_t, std::vector<const SparseEntry<ChainElem>*>> by_col;
    for (const auto& e : C.d[i]) by_col[e.col].push_back(&e);
    for (std::size_t col = 0; col < C.cells[i].size(); ++col) {
      const auto& cell = C.cells[i][col];
      ZL b = coordinate_monomial(minus_subset(cell.label, cell.subset));
      std::map<unsigned, ZL> expected, actual;
      for (unsigned s = 0; s < r; ++s) {
        if (cell.subset >> s & 1) continue;
        ZL ds;
        for (unsigned j = 0; j < r; ++j) ds = Z.plus(ds, Z.mul(Z.deriv(b, j), Jinv[j][s]));
        if (koszul_sign(cell.subset, s) < 0)
          for (auto& [e, v] : ds.t) v = Z.reduce(-v);
        if (!ds.t.empty()) expected[cell.subset | (1u << s)] = ds;
      }
      for (const auto* e : by_col[col]) {
        ++rep.entries;
        const auto& target = C.cells[i + 1][e->row];
        Int v = Int(static_cast<long>(e->value.c[0]));
        ZL piece = coordinate_monomial(minus_subset(target.label, target.subset));
        actual[target.subset] = Z.plus(actual[target.subset], piece, v);
      }
      for (auto it = actual.begin(); it != actual.end();)
        it = it->second.t.empty() ? actual.erase(it) : std::next(it);
      bool same = expected.size() == actual.size();
      for (const auto& [T, f] : expected) same = same && actual.count(T) && actual[T].t == f.t;
      if (!same && rep.failures.size() < 20)
        rep.failures.push_back("d^" + std::to_string(i) + " at " + label_string(cell.label) + " differs from the classical differential");
    }
  }
  (void)R;
  return rep;
}

// ---------------------------------------------------------------- comparisons

std::string label_string(const Monomial& n) {
  std::string out = "(";
  for (std::size_t s = 0; s < n.size(); ++s) out += (s ? "," : "") + std::to_string(n[s]);
  return out + ")";
}

namespace {

std::string form_string(const std::vector<Generator>& gens, const Monomial& n, unsigned S) {
  std::string out;
  for (unsigned s = 0; s < gens.size(); ++s) {
    const int e = n[s] - static_cast<int>(S >> s & 1);
    if (e == 0) continue;
    if (!out.empty()) out += "*";
    out += gens[s].name;
    if (e != 1) out += "^" + std::to_string(e);
  }
  if (out.empty()) out = "1";
  for (unsigned s = 0; s < gens.size(); ++s)
    if (S >> s & 1) out += " d" + gens[s].name;
  return out;
}

void enumerate_twisted(const FramedAlgebra& P, unsigned S, int W, unsigned s, Monomial& n,
                       std::map<Monomial, std::size_t>& out, std::vector<std::string>* basis) {
  const unsigned r = P.r();
  if (s == r) {
    ++out[n];
    if (basis) basis->push_back(form_string(P.generators(), n, S));
    return;
  }
  const long p = static_cast<long>(P.base()->p());
  const bool laurent = P.generators()[s].laurent;
  const bool wedge = S >> s & 1;
  // Monomial (x_s^p)^m, times d(x_s^p) or dlog(x_s^p) when s is in S.
  const long m_lo = laurent ? -(W / p) : 0;
  for (long m = m_lo;; ++m) {
    const long label = p * m + ((wedge && !laurent) ? p : 0);
    if (label > W) break;
    if (laurent ? label < -W : label < 0) continue;
    n.push_back(static_cast<int>(label));
    enumerate_twisted(P, S, W, s + 1, n, out, basis);
    n.pop_back();
  }
}

}  // namespace

std::map<Monomial, std::size_t> twisted_forms(const FramedAlgebra& P, unsigned i, int window,
                                              std::vector<std::string>* basis) {
  std::map<Monomial, std::size_t> out;
  for (unsigned S = 0; S < (1u << P.r()); ++S) {
    if (static_cast<unsigned>(std::popcount(S)) != i) continue;
    Monomial n;
    enumerate_twisted(P, S, window, 0, n, out, basis);
  }
  return out;
}

namespace {

GradedComparison compare_with_twist(const FramedAlgebraPtr& P, unsigned i, const CohomologyTable& t, int twist) {
  GradedComparison g;
  g.degree = i;
  g.twist = twist;
  std::vector<std::string> all;
  auto expected = twisted_forms(*P, i, t.window, &all);
  for (auto [n, h] : t.stable) {
    h.twist = twist;
    g.actual.emplace(n, h);
    auto it = expected.find(n);
    const std::size_t want = it == expected.end() ? 0 : it->second;
    if (want) g.expected.emplace(n, want);
    if (h.free_rank != want || !h.torsion.empty())
      g.failures.push_back("H^" + std::to_string(i) + " at " + label_string(n) + " is " + h.to_string() +
                           ", expected free of rank " + std::to_string(want));
  }
  for (const auto& [n, want] : expected)
    if (!t.stable.count(n)) g.failures.push_back("twisted form at " + label_string(n) + " outside the stable core");
  g.basis = std::move(all);
  return g;
}

}  // namespace

GradedComparison hodge_tate_check(const FramedAlgebraPtr& P, unsigned i, unsigned N, int window) {
  if (i > P->r()) throw std::invalid_argument("hodge_tate_check: i exceeds the number of coordinates");
  const int p = static_cast<int>(P->base()->p());
  CohomologyTable t = cohomology_invariants(P, Specialization::QToZeta, N, i, window, window + p * p);
  return compare_with_twist(P, i, t, -static_cast<int>(i));
}

GradedComparison cartier_check(unsigned r, unsigned long p, unsigned i, int window) {
  if (r == 0 || r > 3) throw std::invalid_argument("cartier_check supports 1 <= r <= 3");
  static const char* names[] = {"x", "y", "z"};
  std::vector<Generator> gens;
  for (unsigned s = 0; s < r; ++s) gens.push_back(Generator{names[s], false});
  auto P = FramedAlgebra::create(base_ring_create(p, 1, 2, 0), gens);
  const int pp = static_cast<int>(p * p);
  CohomologyTable t = cohomology_invariants(P, Specialization::QToOne, 1, i, window, window + pp);
  return compare_with_twist(P, i, t, -static_cast<int>(i));
}

FramingReport framing_independence_check(const FramedAlgebraPtr& P, const FramedAlgebraPtr& alt, unsigned N,
                                         int window) {
  if (!(*P->base() == *alt->base()) || P->r() != alt->r())
    throw MixedRings("framings of different algebras: " + P->describe() + " vs " + alt->describe());
  for (unsigned s = 0; s < P->r(); ++s)
    if (P->generators()[s].name != alt->generators()[s].name ||
        P->generators()[s].laurent != alt->generators()[s].laurent)
      throw MixedRings("framings of different algebras: " + P->describe() + " vs " + alt->describe());
  const int p = static_cast<int>(P->base()->p());
  FramingReport rep;
  for (Specialization s : {Specialization::QToOne, Specialization::QToZeta}) {
    ChainComplex a1 = specialize(build_complex(P, window), s, N);
    ChainComplex a2 = specialize(build_complex(P, window + p * p), s, N);
    ChainComplex b1 = specialize(build_complex(alt, window), s, N);
    ChainComplex b2 = specialize(build_complex(alt, window + p * p), s, N);
    for (unsigned i = 0; i <= std::min(1u, P->r()); ++i) {
      FramingReport::Row row{s, i, cohomology_invariants(a1, a2, i), cohomology_invariants(b1, b2, i)};
      bool same = row.first.total.same_module(row.second.total) && row.first.stable.size() == row.second.stable.size();
      for (const auto& [n, h] : row.first.stable) {
        auto it = row.second.stable.find(n);
        same = same && it != row.second.stable.end() && it->second.same_module(h);
      }
      row.equal = same;
      if (!same)
        rep.failures.push_back("H^" + std::to_string(i) + " at " + to_string(s) + ": " + row.first.total.to_string() +
                               " vs " + row.second.total.to_string());
      rep.rows.push_back(std::move(row));
    }
  }
  return rep;
}

}  // namespace prism
