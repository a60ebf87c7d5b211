#pragma once

// The q-PD envelope A<Y^(1/p^inf)>{Y^p/[p]_q} truncated to exponents in
// N[1/p^K]^r, as a based module over B(p,N,M,K) with basis
//   e_i = prod_s Y_s^(i_s) / [floor(i_s)]_q!.
// Exponents are integer numerators over p^K. A module is a product of
// blocks, each carrying its own total-degree bound, so that Kunneth
// products stay closed.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "prism/base_ring.hpp"
#include "prism/poly.hpp"

namespace prism {

using Exponents = std::vector<std::uint32_t>;

class QPDModule;
using QPDModulePtr = std::shared_ptr<const QPDModule>;

class QPDModule {
 public:
  struct Block {
    unsigned vars;
    std::uint64_t bound;  // numerator bound on the block's exponent sum
  };

  /// r variables with sum of exponents <= D. Needs K >= 1.
  static QPDModulePtr create(BaseRingPtr base, unsigned r, std::uint64_t D);
  static QPDModulePtr from_blocks(BaseRingPtr base, std::vector<Block> blocks);

  const BaseRingPtr& base() const { return base_; }
  unsigned long p() const { return base_->p(); }
  unsigned K() const { return base_->K(); }
  std::uint64_t denominator() const { return denom_; }
  unsigned r() const { return r_; }
  const std::vector<Block>& blocks() const { return blocks_; }

  bool in_range(const Exponents& e) const;
  /// All exponent vectors in range, in lexicographic order.
  std::vector<Exponents> basis() const;
  std::size_t basis_size() const;
  /// Module with every bound multiplied by p, receiving phi.
  QPDModulePtr frobenius_target() const;

  std::uint64_t floor_of(std::uint32_t numerator) const { return numerator / denom_; }
  std::string degree_string(const Exponents& e) const;
  std::string describe() const;

  bool operator==(const QPDModule& o) const;

 private:
  QPDModule(BaseRingPtr base, std::vector<Block> blocks);
  BaseRingPtr base_;
  std::vector<Block> blocks_;
  unsigned r_ = 0;
  std::uint64_t denom_ = 1;
};

class QPDElem {
 public:
  explicit QPDElem(QPDModulePtr module);
  static QPDElem basis(const QPDModulePtr& module, const Exponents& e);
  static QPDElem basis(const QPDModulePtr& module, const Exponents& e, const BaseElem& c);
  static QPDElem one(const QPDModulePtr& module);

  const QPDModulePtr& module() const { return module_; }
  const std::map<Exponents, BaseElem>& terms() const { return terms_; }
  BaseElem coefficient(const Exponents& e) const;
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponents& e, const BaseElem& c);
  QPDElem& operator+=(const QPDElem& o);
  QPDElem& operator-=(const QPDElem& o);
  friend QPDElem operator+(QPDElem a, const QPDElem& b) { return a += b; }
  friend QPDElem operator-(QPDElem a, const QPDElem& b) { return a -= b; }
  friend QPDElem operator*(const BaseElem& s, const QPDElem& a);
  friend bool operator==(const QPDElem& a, const QPDElem& b);

  std::string to_string() const;

 private:
  QPDModulePtr module_;
  std::map<Exponents, BaseElem> terms_;
};

/// prod_s [floor(i_s+j_s)]_q! / ([floor(i_s)]_q! [floor(j_s)]_q!) in Z[q].
UPoly qpd_structure_constant(const QPDModule& m, const Exponents& i, const Exponents& j);
/// prod_s [floor(i_s p)]_q! / phi([floor(i_s)]_q!) in Z[q].
UPoly qpd_frobenius_constant(const QPDModule& m, const Exponents& i);

/// Throws DegreeOverflow when a product exponent leaves the module.
QPDElem qpd_mul(const QPDElem& a, const QPDElem& b);
QPDElem qpd_pow(const QPDElem& a, unsigned k);
/// Lands in module().frobenius_target().
QPDElem qpd_frobenius(const QPDElem& a);

/// Y^n = [n]_q! e_n in the one-variable module, together with the
/// nonzerodivisor checks on phi([m]_q!) for m <= n/p.
struct PowerDivisibilityCertificate {
  unsigned n;
  bool basis_identity = false;
  bool nonzerodivisors = false;
  std::vector<unsigned long> checked_m;
};
PowerDivisibilityCertificate q_power_divisibility(const QPDModulePtr& m, unsigned n);

/// gamma(Y) = phi(Y)/[p]_q - delta(Y) with delta(Y) = 0, in basis form;
/// the coefficient of e_p is returned exactly in Z[q].
struct GammaOfY {
  UPoly coefficient;
  QPDElem value;
};
GammaOfY qpd_gamma_Y(const QPDModulePtr& m);

struct NygaardGenerator {
  Exponents degree;
  unsigned power;  // exponent of [p]_{q^(1/p)}
  QPDElem element;
};
std::vector<NygaardGenerator> nygaard_filtration(const QPDModulePtr& m, unsigned n);
unsigned nygaard_power(const QPDModule& m, const Exponents& i, unsigned n);

/// The conjugate filtration on the target of phi: e_j lies in Fil_n^conj iff
/// sum_s floor(j_s / p) <= n.
bool in_conjugate_filtration(const QPDModule& target, const Exponents& j, unsigned n);

struct NygaardReport {
  unsigned n = 0;
  std::size_t degrees = 0;
  bool divisible = true;  // (a)
  bool image = true;      // (b)
  bool minimal = true;    // (c)
  bool graded = true;     // gr^n maps onto a free module with unit coefficients
  std::size_t gr_rank = 0;
  std::size_t expected_rank = 0;
  /// Target degrees (numerators over p^K) with nonzero image mod [p]_q.
  std::vector<Exponents> image_degrees;
  std::vector<std::string> failures;
  bool ok() const { return divisible && image && minimal && graded && gr_rank == expected_rank; }
};
/// Exact checks in Z[t]; n must satisfy n + 1 <= every block bound.
NygaardReport nygaard_verify(const QPDModulePtr& m, unsigned n);

/// Fil^n Fil^k in Fil^(n+k) and Fil^(n+1) in Fil^n, checked by exact
/// division by powers of [p]_{q^(1/p)} in Z[t] on all generator pairs.
struct FiltrationProductReport {
  std::size_t pairs = 0;
  bool multiplicative = true;
  bool decreasing = true;
  std::vector<std::string> failures;
  bool ok() const { return multiplicative && decreasing; }
};
FiltrationProductReport nygaard_multiplicativity(const QPDModulePtr& m, unsigned n, unsigned k);

/// Throws MixedRings for different bases.
QPDModulePtr kunneth_product(const QPDModulePtr& a, const QPDModulePtr& b);
/// a (x) b inside kunneth_product(a.module(), b.module()) (or the given one).
QPDElem qpd_tensor(const QPDModulePtr& product, const QPDElem& a, const QPDElem& b);

}  // namespace prism
