#pragma once

// Generators and independent oracles shared by the unit and acceptance tests.

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "prism/base_ring.hpp"
#include "prism/chain_ring.hpp"
#include "prism/homology.hpp"
#include "prism/poly.hpp"
#include "prism/qpd.hpp"

namespace testing {

using prism::Int;
using prism::Rat;
using prism::UPoly;

/// splitmix64.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : s_(seed) {}
  std::uint64_t next() {
    std::uint64_t z = (s_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  long range(long lo, long hi) { return lo + static_cast<long>(next() % static_cast<std::uint64_t>(hi - lo + 1)); }
  bool coin() { return next() & 1; }

 private:
  std::uint64_t s_;
};

inline UPoly upoly(Gen& g, int deg, long lo, long hi) {
  std::vector<Int> c;
  for (int i = 0; i <= deg; ++i) c.push_back(Int(g.range(lo, hi)));
  return UPoly(c);
}

inline prism::BaseElem base_elem(Gen& g, const prism::BaseRingPtr& B) {
  std::vector<Int> c(B->M());
  for (auto& v : c) v = Int(g.range(0, 1000));
  return prism::BaseElem(B, c);
}

inline prism::ChainElem chain_elem(Gen& g, const prism::ChainRing& R) {
  std::vector<Int> c(R.degree());
  for (auto& v : c) v = Int(g.range(0, 10000));
  return R.from_pi_coords(c);
}

inline prism::ChainMatrix chain_matrix(Gen& g, const prism::ChainRing& R, std::size_t rows, std::size_t cols) {
  prism::ChainMatrix m(R, rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j) {
      // Bias towards non-units so that torsion shows up.
      prism::ChainElem a = chain_elem(g, R);
      m.at(i, j) = R.mul(a, R.pi_power(static_cast<unsigned>(g.range(0, 2))));
    }
  return m;
}

/// [n]_q by the geometric sum.
inline UPoly q_int_oracle(unsigned long n) { return UPoly(std::vector<Int>(n, Int(1))); }

inline UPoly q_factorial_oracle(unsigned long n) {
  UPoly f(1);
  for (unsigned long k = 1; k <= n; ++k) f *= q_int_oracle(k);
  return f;
}

/// Gaussian binomial by the q-Pascal rule [n,k] = [n-1,k-1] + q^k [n-1,k].
inline UPoly q_binomial_oracle(unsigned long n, unsigned long k) {
  std::vector<std::vector<UPoly>> t(n + 1, std::vector<UPoly>(n + 1));
  for (unsigned long a = 0; a <= n; ++a) {
    t[a][0] = UPoly(1);
    for (unsigned long b = 1; b <= a; ++b) {
      UPoly right = b <= a - 1 ? t[a - 1][b] * UPoly::monomial(1, b) : UPoly();
      t[a][b] = t[a - 1][b - 1] + right;
    }
  }
  return k <= n ? t[n][k] : UPoly();
}

inline UPoly q_to_power(const UPoly& f, unsigned long k) {
  std::vector<Int> c(f.is_zero() ? 0 : static_cast<std::size_t>(f.degree()) * k + 1);
  for (std::size_t i = 0; i < f.coeffs().size(); ++i) c[i * k] = f.coeffs()[i];
  return UPoly(c);
}

inline Int factorial(unsigned long n) {
  Int f = 1;
  for (unsigned long k = 2; k <= n; ++k) f *= k;
  return f;
}

inline unsigned vp(Int x, unsigned long p) {
  unsigned v = 0;
  while (x != 0 && x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

// ------------------------------------------------------------------ finite abelian p-groups

/// Orders of cyclic factors (as p-exponents, descending) of a finite abelian
/// p-group given by the counts c_j = #{g : p^j g = 0}, j = 0..top.
inline std::vector<unsigned> cyclic_type(const std::vector<std::uint64_t>& killed, unsigned long p) {
  // log_p c_j - log_p c_(j-1) = #{factors of exponent >= j}.
  auto lg = [p](std::uint64_t v) {
    unsigned e = 0;
    while (v > 1) {
      v /= p;
      ++e;
    }
    return e;
  };
  std::vector<unsigned> at_least;
  for (std::size_t j = 1; j < killed.size(); ++j) at_least.push_back(lg(killed[j]) - lg(killed[j - 1]));
  std::vector<unsigned> out;
  for (std::size_t j = 0; j < at_least.size(); ++j) {
    const unsigned next = j + 1 < at_least.size() ? at_least[j + 1] : 0;
    for (unsigned k = 0; k < at_least[j] - next; ++k) out.push_back(static_cast<unsigned>(j + 1));
  }
  std::sort(out.rbegin(), out.rend());
  return out;
}

/// The same data from an InvariantFactors over Z/p^e.
inline std::vector<unsigned> cyclic_type(const prism::InvariantFactors& h, unsigned e) {
  std::vector<unsigned> out(h.free_rank, e);
  out.insert(out.end(), h.torsion.begin(), h.torsion.end());
  std::sort(out.rbegin(), out.rend());
  return out;
}

// ------------------------------------------------------------------ Z_p(n) oracle

/// Z/p^L with W_L(F_q) modelled as (Z/p^L)[x]/(f~) and Frobenius acting on the
/// Teichmuller lift z of x by z -> z^p. Kernel and cokernel of y -> F(y) - p^n y
/// are found by enumerating all q^L elements.
struct TateOracle {
  std::vector<unsigned> h0, h1;  // cyclic types
};

inline TateOracle tate_twist_oracle(unsigned long q, unsigned m, unsigned n) {
  unsigned long p = q;
  unsigned k = 1;
  for (unsigned long d = 2; d <= q; ++d)
    if (q % d == 0) {
      p = d;
      break;
    }
  for (unsigned long v = q; v > p; v /= p) ++k;
  const unsigned L = m - n;
  long mod = 1;
  for (unsigned i = 0; i < L; ++i) mod *= static_cast<long>(p);
  auto red = [mod](long v) { return ((v % mod) + mod) % mod; };

  // Monic lift of the field modulus: x - 0 for k = 1, x^2+x+1 for q = 4, x^2+1 for q = 9.
  std::vector<long> f;  // low first, without the leading 1
  if (k == 1)
    f = {0};
  else if (q == 4)
    f = {1, 1};
  else if (q == 9)
    f = {1, 0};
  else
    throw std::invalid_argument("tate_twist_oracle: unsupported q");

  using V = std::vector<long>;
  auto mul = [&](const V& a, const V& b) {
    V c(2 * k, 0);
    for (unsigned i = 0; i < k; ++i)
      for (unsigned j = 0; j < k; ++j) c[i + j] = red(c[i + j] + a[i] * b[j]);
    for (unsigned d = 2 * k - 1; d >= k; --d) {
      const long top = c[d];
      if (top == 0) continue;
      c[d] = 0;
      for (unsigned i = 0; i < k; ++i) c[d - k + i] = red(c[d - k + i] - top * f[i]);
    }
    c.resize(k);
    return c;
  };
  auto power = [&](V a, unsigned long e) {
    V r(k, 0);
    r[0] = 1 % mod;
    while (e) {
      if (e & 1) r = mul(r, a);
      a = mul(a, a);
      e >>= 1;
    }
    return r;
  };
  V x(k, 0);
  if (k == 1)
    x[0] = 0;  // unused
  else
    x[1] = 1;

  // Frobenius matrix in the x-basis. For k = 1 it is the identity.
  std::vector<V> frob(k, V(k, 0));  // frob[i] = F(x^i)
  if (k == 1) {
    frob[0][0] = 1 % mod;
  } else {
    unsigned long qL = 1;
    for (unsigned i = 0; i + 1 < L; ++i) qL *= q;
    const V z = power(x, qL);  // Teichmuller lift of x
    // Basis change: columns are z^0, z^1 in the x-basis; F(z^i) = z^(ip).
    const V z0 = power(z, 0), z1 = z;
    const V fz1 = power(z, p);
    // Solve for F(x): x = a z^0 + b z^1, so F(x) = a + b z^p.
    // [z0 z1] (a, b)^T = (0, 1)^T, inverted by the adjugate.
    long det = red(z0[0] * z1[1] - z1[0] * z0[1]);
    long inv = 1;
    for (long t = 1; t < mod; ++t)
      if (red(det * t) == 1) {
        inv = t;
        break;
      }
    const long a = red(inv * red(-z1[0]));
    const long b = red(inv * z0[0]);
    V fx(k, 0);
    for (unsigned i = 0; i < k; ++i) fx[i] = red(a * z0[i] + b * fz1[i]);
    frob[0] = z0;
    frob[1] = fx;
  }

  long pn = 1;
  for (unsigned i = 0; i < n; ++i) pn *= static_cast<long>(p);
  auto T = [&](const V& y) {
    V out(k, 0);
    for (unsigned i = 0; i < k; ++i)
      for (unsigned j = 0; j < k; ++j) out[j] = red(out[j] + y[i] * frob[i][j]);
    for (unsigned j = 0; j < k; ++j) out[j] = red(out[j] - pn * y[j]);
    return out;
  };

  std::uint64_t size = 1;
  for (unsigned i = 0; i < k; ++i) size *= static_cast<std::uint64_t>(mod);
  auto decode = [&](std::uint64_t idx) {
    V y(k);
    for (unsigned i = 0; i < k; ++i) {
      y[i] = static_cast<long>(idx % mod);
      idx /= mod;
    }
    return y;
  };
  auto encode = [&](const V& y) {
    std::uint64_t idx = 0;
    for (unsigned i = k; i-- > 0;) idx = idx * mod + y[i];
    return idx;
  };
  auto scale = [&](const V& y, long s) {
    V o(k);
    for (unsigned i = 0; i < k; ++i) o[i] = red(y[i] * s);
    return o;
  };

  std::vector<char> image(size, 0);
  std::vector<std::uint64_t> kernel;
  for (std::uint64_t idx = 0; idx < size; ++idx) {
    V y = decode(idx);
    V t = T(y);
    image[encode(t)] = 1;
    bool zero = std::all_of(t.begin(), t.end(), [](long v) { return v == 0; });
    if (zero) kernel.push_back(idx);
  }
  std::uint64_t im_size = std::count(image.begin(), image.end(), 1);

  std::vector<std::uint64_t> killed0, killed1;
  long pj = 1;
  for (unsigned j = 0; j <= L; ++j) {
    std::uint64_t c0 = 0, c1 = 0;
    for (auto idx : kernel) {
      V s = scale(decode(idx), pj);
      if (std::all_of(s.begin(), s.end(), [](long v) { return v == 0; })) ++c0;
    }
    for (std::uint64_t idx = 0; idx < size; ++idx)
      if (image[encode(scale(decode(idx), pj))]) ++c1;
    killed0.push_back(c0);
    killed1.push_back(c1 / im_size);
    pj *= static_cast<long>(p);
  }
  return {cyclic_type(killed0, p), cyclic_type(killed1, p)};
}

// ------------------------------------------------------------------ Nygaard

// Multiplicity of [p]_q in a nonzero polynomial.
inline unsigned phi_p_valuation(UPoly f, unsigned long p) {
  const UPoly pq = q_int_oracle(p);
  unsigned v = 0;
  for (;;) {
    prism::UDivision d = prism::divmod(f, pq);
    if (!d.remainder.is_zero()) return v;
    f = d.quotient;
    ++v;
  }
}

// Target degrees with nonzero image of phi / [p]_q^n mod [p]_q, from the
// generators [p]_(q^(1/p))^max(n - sum floor(i), 0) e_i and
// phi(e_i) = prod [floor(i_s p)]_q! / phi([floor(i_s)]_q!) e_(ip).
inline std::set<prism::Exponents> nygaard_image_oracle(const prism::QPDModule& m, unsigned n) {
  const unsigned long p = m.p();
  std::set<prism::Exponents> out;
  std::map<std::uint64_t, unsigned> valuation;
  auto lambda_valuation = [&](std::uint64_t a) {
    auto it = valuation.find(a);
    if (it != valuation.end()) return it->second;
    UPoly lambda = prism::exact_div(q_factorial_oracle(m.floor_of(a * p)),
                                    q_to_power(q_factorial_oracle(m.floor_of(a)), p));
    return valuation[a] = phi_p_valuation(lambda, p);
  };
  for (const auto& i : m.basis()) {
    std::uint64_t floors = 0;
    unsigned val = 0;
    for (auto a : i) {
      floors += m.floor_of(a);
      val += lambda_valuation(a);
    }
    const unsigned power = floors >= n ? 0 : static_cast<unsigned>(n - floors);
    if (val + power == n) {
      prism::Exponents t(i.size());
      for (std::size_t s = 0; s < i.size(); ++s) t[s] = static_cast<std::uint32_t>(i[s] * p);
      out.insert(t);
    }
  }
  return out;
}


// ------------------------------------------------------------------ twisted forms

/// Rank of Omega^i of F_p[x^p] (or its Z[zeta_p]-analogue) at label n in the
/// adapted basis x^(n - e_S) dx_S: every n_s divisible by p and n_s >= 1 on S.
inline std::size_t twisted_rank(const std::vector<int>& n, unsigned i, unsigned long p) {
  for (int v : n)
    if (v % static_cast<int>(p) != 0) return 0;
  const unsigned r = static_cast<unsigned>(n.size());
  std::size_t count = 0;
  for (unsigned S = 0; S < (1u << r); ++S) {
    if (static_cast<unsigned>(__builtin_popcount(S)) != i) continue;
    bool ok = true;
    for (unsigned s = 0; s < r; ++s)
      if ((S >> s & 1) && n[s] < 1) ok = false;
    if (ok) ++count;
  }
  return count;
}

}  // namespace testing
