#pragma once

// Framed q-de Rham complexes over B(p,N,M,0) (so q = t): Laurent and
// polynomial algebras, coordinate scalings gamma_s, q-derivations
// nabla_{q,s}, Koszul complexes, the specializations q -> 1 and q -> zeta_p,
// and the comparison checks built on them.
//
// A framing assigns to each generator x_s a coordinate x'_s = x_s + n_s(x)
// with n_s in the maximal ideal (p, q-1). Complexes are written in the basis
// adapted to the framing, x'^(n - e_S) dx'_S, labelled by n; the operators
// themselves act on elements written in the generators x.

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "prism/base_ring.hpp"
#include "prism/chain_ring.hpp"
#include "prism/homology.hpp"

namespace prism {

using Monomial = std::vector<int>;

struct Generator {
  std::string name;
  bool laurent = false;
};

/// Finite Laurent polynomial in r variables over a truncated base ring.
class LPoly {
 public:
  LPoly() = default;
  LPoly(BaseRingPtr ring, unsigned nvars);
  static LPoly constant(const BaseRingPtr& ring, unsigned nvars, const BaseElem& c);
  static LPoly monomial(const BaseRingPtr& ring, const Monomial& e, const BaseElem& c);
  static LPoly variable(const BaseRingPtr& ring, unsigned nvars, unsigned s);

  const BaseRingPtr& ring() const { return ring_; }
  unsigned nvars() const { return nvars_; }
  const std::map<Monomial, BaseElem>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  BaseElem coefficient(const Monomial& e) const;
  /// Largest |exponent| over all terms.
  int spread() const;

  void add_term(const Monomial& e, const BaseElem& c);
  LPoly& operator+=(const LPoly& o);
  LPoly& operator-=(const LPoly& o);
  friend LPoly operator+(LPoly a, const LPoly& b) { return a += b; }
  friend LPoly operator-(LPoly a, const LPoly& b) { return a -= b; }
  friend LPoly operator*(const LPoly& a, const LPoly& b);
  friend LPoly operator*(const BaseElem& s, const LPoly& a);
  friend bool operator==(const LPoly& a, const LPoly& b);
  /// Monomial shift by e.
  LPoly shifted(const Monomial& e) const;
  LPoly reduce_to(const BaseRingPtr& coarser) const;

  std::string to_string(const std::vector<std::string>& names) const;

 private:
  BaseRingPtr ring_;
  unsigned nvars_ = 0;
  std::map<Monomial, BaseElem> terms_;
};

/// c x^a (1 + m) with c a unit and m in the maximal ideal; inverted by the
/// terminating geometric series. Throws Defect if f has another shape and
/// WindowOverflow past `cap`.
LPoly invert_unit_perturbation(const LPoly& f, int cap);

class FramedAlgebra;
using FramedAlgebraPtr = std::shared_ptr<const FramedAlgebra>;

class FramedAlgebra {
 public:
  enum class CoordinateKind { Identity, Multiplicative, Additive, Laurent };

  /// `coordinates` defaults to the generators. Requires K = 0 and M >= 2.
  static FramedAlgebraPtr create(BaseRingPtr base, std::vector<Generator> gens,
                                 std::vector<LPoly> coordinates = {}, int cap = 4096);

  const BaseRingPtr& base() const { return base_; }
  /// Ring of the coefficients after one division by q - 1.
  const BaseRingPtr& derived() const { return derived_; }
  unsigned r() const { return static_cast<unsigned>(gens_.size()); }
  const std::vector<Generator>& generators() const { return gens_; }
  std::vector<std::string> names() const;
  const LPoly& coordinate(unsigned s) const { return coords_[s]; }
  CoordinateKind kind(unsigned s) const { return kinds_[s]; }
  bool is_standard() const;
  int cap() const { return cap_; }
  std::string describe() const;

  /// x_j as a polynomial in the coordinates x' (variables read as x').
  const LPoly& inverse_coordinate(unsigned j) const { return inverse_[j]; }
  /// x'^k written in the generators.
  LPoly coordinate_monomial(const Monomial& k) const;
  /// g(x) rewritten in the coordinates x'.
  LPoly to_coordinates(const LPoly& g) const;

  /// Images of x_j and 1/x_j under gamma_s (1/x_j only for Laurent x_j).
  const std::vector<LPoly>& gamma_images(unsigned s) const { return gamma_[s]; }
  const std::vector<LPoly>& gamma_inverse_images(unsigned s) const { return gamma_inv_[s]; }

  /// Checks negative exponents only occur on Laurent generators.
  void check_element(const LPoly& f) const;

 private:
  FramedAlgebra() = default;
  BaseRingPtr base_, derived_;
  std::vector<Generator> gens_;
  std::vector<LPoly> coords_, coords_inv_, inverse_, inverse_inv_;
  std::vector<LPoly> unit_inv_;  // (x'_s / x_s)^-1 for multiplicative polynomial coordinates
  std::vector<CoordinateKind> kinds_;
  friend LPoly nabla_q_s(const FramedAlgebra& P, const LPoly& f, unsigned s);
  std::vector<std::vector<LPoly>> gamma_, gamma_inv_;
  int cap_ = 4096;
};

/// Ring map x_j -> images[j], 1/x_j -> inverse_images[j].
LPoly substitute(const LPoly& f, const std::vector<LPoly>& images, const std::vector<LPoly>& inverse_images,
                 int cap);

LPoly gamma_s(const FramedAlgebra& P, const LPoly& f, unsigned s);
/// (gamma_s(f) - f) / ((q - 1) x'_s); coefficients land in P.derived().
LPoly nabla_q_s(const FramedAlgebra& P, const LPoly& f, unsigned s);
/// [n]_q for any integer n, inside the given ring (q is a unit).
BaseElem signed_q_int(const BaseRingPtr& ring, long n);

struct KoszulCell {
  Monomial label;
  unsigned subset;  // bitmask of the wedge factors dx'_s
};

template <class E>
struct SparseEntry {
  std::size_t row, col;
  E value;
};

struct KoszulComplex {
  FramedAlgebraPtr algebra;
  int window = 0;
  BaseRingPtr coeff_ring;
  std::vector<Monomial> labels;
  std::vector<std::vector<KoszulCell>> cells;                   // cells[i], i = 0..r
  std::vector<std::vector<SparseEntry<BaseElem>>> d;           // cells[i] -> cells[i+1]
  bool graded = true;
  std::size_t leaked = 0;  // nonzero coordinates on labels outside the window
};

enum class ComplexRoute { Auto, Monomial, Substitution };

/// Labels n with n_s in [-W, W] (Laurent) or [0, W]. Throws NonCommuting if
/// d o d != 0 or, on the substitution route, if the nabla_{q,s} fail to
/// commute on the window interior.
KoszulComplex build_complex(const FramedAlgebraPtr& P, int window, ComplexRoute route = ComplexRoute::Auto);

enum class Specialization { QToOne, QToZeta };
std::string to_string(Specialization s);

struct ChainComplex {
  ChainRing ring;
  unsigned r = 0;
  int window = 0;
  std::vector<Monomial> labels;
  std::vector<std::vector<KoszulCell>> cells;
  std::vector<std::vector<SparseEntry<ChainElem>>> d;
  bool graded = true;

  ChainMatrix dense(std::size_t i) const;
  /// Serialized as dims plus entry triples.
  std::string matrix_string(std::size_t i) const;
};

ChainElem specialize_element(const BaseElem& x, const ChainRing& target, Specialization s);
/// Zmod(p,N) for q -> 1, Cyclotomic(p,N) for q -> zeta_p.
ChainRing specialization_ring(unsigned long p, unsigned N, Specialization s);
/// Throws RootDepthUnsupported for q -> zeta with K > 0 and PrecisionLoss if
/// the coefficients are too coarse for the target.
ChainComplex specialize(const KoszulComplex& C, Specialization s, unsigned N);
/// Builds the monomial complex directly over the chain ring (standard
/// framings only).
ChainComplex build_specialized(const FramedAlgebraPtr& P, int window, Specialization s, unsigned N);

/// H^i per label; needs a graded complex (Unstable otherwise).
std::map<Monomial, InvariantFactors> graded_cohomology(const ChainComplex& C, unsigned i, bool reverse_order = false);

struct CohomologyTable {
  unsigned degree = 0;
  int window = 0, window2 = 0;
  std::map<Monomial, InvariantFactors> stable;
  std::vector<Monomial> unstable;
  InvariantFactors total;
};
/// Stable core between the windows W < W2. Throws Unstable if it is empty.
CohomologyTable cohomology_invariants(const ChainComplex& at_w, const ChainComplex& at_w2, unsigned i,
                                      bool reverse_order = false);
CohomologyTable cohomology_invariants(const FramedAlgebraPtr& P, Specialization s, unsigned N, unsigned i,
                                      int window, int window2);

struct CrystallineReport {
  std::size_t entries = 0;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
/// q -> 1 specialization against an independent classical de Rham
/// construction (symbolic derivative and inverse Jacobian over Z/p^N).
CrystallineReport crystalline_reduction_check(const FramedAlgebraPtr& P, int window);

struct GradedComparison {
  unsigned degree = 0;
  int twist = 0;
  std::map<Monomial, InvariantFactors> actual;     // stable core
  std::map<Monomial, std::size_t> expected;       // ranks of the twisted forms per label
  std::vector<std::string> basis;                  // twisted forms inside the stable core
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Ranks of Omega^i of the Frobenius twist (x_s -> x_s^p) per label, by
/// direct enumeration of p-th power monomials and wedges.
std::map<Monomial, std::size_t> twisted_forms(const FramedAlgebra& P, unsigned i, int window,
                                              std::vector<std::string>* basis = nullptr);

/// H^i at q -> zeta_p over Z[zeta_p]/p^N against Omega^i of the twist, tag {-i}.
GradedComparison hodge_tate_check(const FramedAlgebraPtr& P, unsigned i, unsigned N, int window);
/// H^i of the de Rham complex of F_p[x_1..x_r] against Omega^i of the twist.
GradedComparison cartier_check(unsigned r, unsigned long p, unsigned i, int window);

struct FramingReport {
  struct Row {
    Specialization at;
    unsigned degree;
    CohomologyTable first, second;
    bool equal = false;
  };
  std::vector<Row> rows;
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};
/// Same algebra, two framings; stable H^0 and H^1 at q -> 1 and q -> zeta_p.
FramingReport framing_independence_check(const FramedAlgebraPtr& P, const FramedAlgebraPtr& alt, unsigned N,
                                         int window);

std::string label_string(const Monomial& n);

}  // namespace prism
