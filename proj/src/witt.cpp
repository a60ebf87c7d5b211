#include "prism/witt.hpp"

#include <map>
#include <mutex>

namespace prism {

IntPoly ghost_polynomial(const VarList& vars, std::size_t offset, unsigned long p, unsigned n) {
  IntPoly w(vars);
  for (unsigned j = 0; j <= n; ++j) {
    auto exp = static_cast<std::uint32_t>(ipow(Int(p), n - j).get_ui());
    w += IntPoly::variable(vars, offset + j, exp) * ipow(Int(p), j);
  }
  return w;
}

namespace {

IntPoly solve_ghost(const IntPoly& target, const std::vector<IntPoly>& lower, unsigned long p, unsigned n,
                    const char* what) {
  IntPoly rest = target;
  for (unsigned j = 0; j < n; ++j) rest -= lower[j].pow(ipow(Int(p), n - j).get_ui()) * ipow(Int(p), j);
  try {
    return exact_div(rest, ipow(Int(p), n));
  } catch (const NotDivisible& e) {
    throw Defect(std::string("Witt structure polynomial ") + what + std::to_string(n) + " is not integral", e.witness());
  }
}

std::unique_ptr<WittPolys> compute_polys(unsigned long p, unsigned m) {
  auto out = std::make_unique<WittPolys>();
  out->p = p;
  out->m = m;
  std::vector<std::string> names, fnames;
  for (unsigned i = 0; i < m; ++i) names.push_back("x" + std::to_string(i));
  for (unsigned i = 0; i < m; ++i) names.push_back("y" + std::to_string(i));
  for (unsigned i = 0; i <= m; ++i) fnames.push_back("x" + std::to_string(i));
  out->vars = make_vars(names);
  out->fvars = make_vars(fnames);
  for (unsigned n = 0; n < m; ++n) {
    IntPoly wx = ghost_polynomial(out->vars, 0, p, n);
    IntPoly wy = ghost_polynomial(out->vars, m, p, n);
    out->S.push_back(solve_ghost(wx + wy, out->S, p, n, "S"));
    out->P.push_back(solve_ghost(wx * wy, out->P, p, n, "P"));
    out->F.push_back(solve_ghost(ghost_polynomial(out->fvars, 0, p, n + 1), out->F, p, n, "F"));
  }
  return out;
}

}  // namespace

const WittPolys& witt_polys(unsigned long p, unsigned m) {
  static std::mutex mu;
  static std::map<std::pair<unsigned long, unsigned>, std::unique_ptr<WittPolys>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[{p, m}];
  if (!slot) slot = compute_polys(p, m);
  return *slot;
}

W2Pair w2_add(const W2Pair& a, const W2Pair& b, unsigned long p) {
  IntPoly carry = a.x.pow(p) + b.x.pow(p) - (a.x + b.x).pow(p);
  return {a.x + b.x, a.y + b.y + exact_div(carry, Int(p))};
}

W2Pair w2_mul(const W2Pair& a, const W2Pair& b, unsigned long p) {
  return {a.x * b.x, a.x.pow(p) * b.y + b.x.pow(p) * a.y + a.y * b.y * Int(p)};
}

WittVec<GaloisField> witt_delta_perfect(const WittVec<GaloisField>& d) {
  const unsigned m = d.length();
  if (m < 2) throw std::invalid_argument("witt_delta_perfect: need length >= 2");
  const auto& F = *d.ring();
  WittVec<GaloisField> frob = witt_F_char_p(d);
  WittVec<GaloisField> frob_universal = witt_F(d);
  if (!(witt_truncate(frob, m - 1) == frob_universal))
    throw Mismatch("coordinatewise and universal Frobenius disagree", d.to_string());
  WittVec<GaloisField> diff = witt_sub(frob, witt_pow(d, d.p()));
  if (diff[0] != 0) throw Defect("F(d) - d^p is not divisible by p", diff.to_string());
  // p * (y_0, y_1, ...) = (0, y_0^p, y_1^p, ...) over a perfect field.
  std::vector<GaloisField::Elem> y;
  for (unsigned i = 1; i < m; ++i) y.push_back(F.pth_root(diff[i]));
  return WittVec<GaloisField>(d.ring(), d.p(), std::move(y));
}

GaloisField::Elem teichmuller_p_coefficient(const WittVec<GaloisField>& d) {
  if (d.length() < 2) throw std::invalid_argument("teichmuller_p_coefficient: need length >= 2");
  // (a_0, a_1, ...) = sum V^i [a_i] = sum p^i [a_i^(1/p^i)].
  return d.ring()->pth_root(d[1]);
}

namespace {

template <class R>
WittVec<R> witt_from_index(const std::shared_ptr<const R>& ring, unsigned long p, unsigned m, std::uint64_t idx) {
  // Last coordinate varies fastest.
  std::vector<typename R::Elem> c(m);
  for (unsigned i = m; i-- > 0;) {
    c[i] = ring->element(idx % ring->size());
    idx /= ring->size();
  }
  return WittVec<R>(ring, p, std::move(c));
}

}  // namespace

ZeroDivisorReport no_nonzerodivisor_witness(unsigned long p, unsigned m) {
  auto ring = std::make_shared<const DualField>(p);
  ZeroDivisorReport rep;
  rep.p = p;
  rep.m = m;
  std::uint64_t total = 1;
  for (unsigned i = 0; i < m; ++i) total *= ring->size();
  rep.size = total;
  rep.every_nonunit_annihilated = true;
  const auto zero = WittVec<DualField>::zero(ring, p, m);
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    auto w = witt_from_index(ring, p, m, idx);
    if (ring->is_unit(w[0])) {
      ++rep.units;
      continue;
    }
    ++rep.nonunits;
    bool found = false;
    for (std::uint64_t j = 1; j < total && !found; ++j) {
      auto a = witt_from_index(ring, p, m, j);
      if (witt_mul(w, a) == zero) {
        rep.annihilators.emplace_back(w.to_string(), a.to_string());
        found = true;
      }
    }
    if (!found) rep.every_nonunit_annihilated = false;
  }
  rep.maximal_ideal = rep.size / p;
  return rep;
}

TateTwistResult tate_twist_invariants(unsigned long q, unsigned m, unsigned n) {
  if (m < n + 1) throw std::invalid_argument("tate_twist_invariants: need m >= n + 1");
  auto field = std::make_shared<const GaloisField>(q);
  const unsigned long p = field->p();
  const unsigned k = field->k();
  const unsigned L = m - n;
  ChainRing R = ChainRing::zmod(p, L);
  const Int pL = ipow(Int(p), L);

  // Teichmuller lifts of the F_p-basis 1, a, ..., a^(k-1).
  std::vector<WittVec<GaloisField>> basis;
  GaloisField::Elem power = field->one();
  for (unsigned i = 0; i < k; ++i) {
    basis.push_back(teichmuller(field, p, power, L));
    power = field->mul(power, field->generator());
  }

  // Coordinates of every element of W_L(F_q) in that basis.
  std::map<std::vector<GaloisField::Elem>, std::vector<long>> coords;
  const unsigned long pl = pL.get_ui();
  std::uint64_t total = 1;
  for (unsigned i = 0; i < k; ++i) total *= pl;
  std::vector<std::vector<WittVec<GaloisField>>> multiples(k);
  for (unsigned i = 0; i < k; ++i) {
    multiples[i].push_back(WittVec<GaloisField>::zero(field, p, L));
    for (unsigned long c = 1; c < pl; ++c) multiples[i].push_back(witt_add(multiples[i].back(), basis[i]));
  }
  for (std::uint64_t idx = 0; idx < total; ++idx) {
    std::vector<long> c(k);
    std::uint64_t x = idx;
    auto v = WittVec<GaloisField>::zero(field, p, L);
    for (unsigned i = 0; i < k; ++i) {
      c[i] = static_cast<long>(x % pl);
      x /= pl;
      v = witt_add(v, multiples[i][c[i]]);
    }
    coords.emplace(v.coords(), c);
  }
  if (coords.size() != total) throw Defect("Teichmuller lifts of an F_p-basis do not form a basis");

  const Int pn = ipow(Int(p), n);
  TateTwistResult out{q, m, n, L, {}, {}, ChainMatrix(R, k, k)};
  for (unsigned j = 0; j < k; ++j) {
    auto image = witt_sub(witt_F_char_p(basis[j]), witt_scale(pn, basis[j]));
    const auto& c = coords.at(image.coords());
    for (unsigned i = 0; i < k; ++i) out.matrix.at(i, j) = R.from_int(static_cast<long long>(c[i]));
  }
  out.h0 = kernel_invariants(out.matrix);
  out.h1 = cokernel_invariants(out.matrix);
  out.h0.twist = out.h1.twist = static_cast<int>(n);
  return out;
}

}  // namespace prism
