#pragma once

// Smith normal form over finite chain rings and invariant factors of the
// cohomology of two-term pieces of complexes of finite free modules.

#include <string>
#include <vector>

#include "prism/chain_ring.hpp"

namespace prism {

class ChainMatrix {
 public:
  ChainMatrix(ChainRing ring, std::size_t rows, std::size_t cols)
      : ring_(std::move(ring)), rows_(rows), cols_(cols), a_(rows * cols) {}

  static ChainMatrix identity(const ChainRing& ring, std::size_t n);

  const ChainRing& ring() const { return ring_; }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  ChainElem& at(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const ChainElem& at(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  bool is_zero() const;
  ChainMatrix transpose() const;
  friend ChainMatrix operator*(const ChainMatrix& a, const ChainMatrix& b);
  friend bool operator==(const ChainMatrix& a, const ChainMatrix& b) {
    return a.ring_ == b.ring_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.a_ == b.a_;
  }

  /// Entry triples (row, col, value) of the nonzero entries.
  std::string to_string() const;

 private:
  ChainRing ring_;
  std::size_t rows_, cols_;
  std::vector<ChainElem> a_;
};

struct SmithForm {
  ChainMatrix U, D, V;
  /// Valuations of the diagonal of D, ascending; nilpotency for zero entries.
  std::vector<unsigned> exponents;
  std::size_t rank = 0;  // number of nonzero diagonal entries
};

/// U * M * V = D with D diagonal, diagonal entries pi^a normalized (unit part 1).
/// Pivot: minimal valuation, ties broken by smallest (row, col). With
/// `reverse_order` the rows and columns are scanned from the end instead; the
/// invariant factors do not depend on this.
SmithForm snf(const ChainMatrix& m, bool reverse_order = false);

/// Module bookkeeping for R^f + sum R/pi^a_j. `twist` is a tag only.
struct InvariantFactors {
  std::size_t free_rank = 0;
  std::vector<unsigned> torsion;  // ascending, each in (0, nilpotency)
  int twist = 0;

  /// Length of the module as a count of pi-adic layers: e*f + sum a_j.
  std::size_t length(unsigned nilpotency) const;
  bool same_module(const InvariantFactors& o) const { return free_rank == o.free_rank && torsion == o.torsion; }
  friend bool operator==(const InvariantFactors& a, const InvariantFactors& b) {
    return a.same_module(b) && a.twist == b.twist;
  }
  InvariantFactors& operator+=(const InvariantFactors& o);
  std::string to_string() const;
};

/// Classify R^n / (columns of the relation matrix).
InvariantFactors cokernel_invariants(const ChainMatrix& relations, bool reverse_order = false);

/// ker(M) as an abstract module.
InvariantFactors kernel_invariants(const ChainMatrix& m, bool reverse_order = false);

/// H = ker(d_next) / im(d_prev) where d_prev: R^a -> R^b and d_next: R^b -> R^c.
/// Throws NotAComplex unless d_next * d_prev = 0.
InvariantFactors complex_cohomology(const ChainMatrix& d_prev, const ChainMatrix& d_next,
                                    bool reverse_order = false);

/// Solve M x = b over the chain ring. Returns false if no solution exists.
bool solve_linear(const ChainMatrix& m, const std::vector<ChainElem>& b, std::vector<ChainElem>& x);

}  // namespace prism
