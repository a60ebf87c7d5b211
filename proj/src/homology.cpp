#include "prism/homology.hpp"

#include <algorithm>
#include <sstream>

namespace prism {

ChainMatrix ChainMatrix::identity(const ChainRing& ring, std::size_t n) {
  ChainMatrix m(ring, n, n);
  for (std::size_t i = 0; i < n; ++i) m.at(i, i) = ring.one();
  return m;
}

bool ChainMatrix::is_zero() const {
  for (const auto& x : a_)
    if (!ring_.is_zero(x)) return false;
  return true;
}

ChainMatrix ChainMatrix::transpose() const {
  ChainMatrix t(ring_, cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

ChainMatrix operator*(const ChainMatrix& a, const ChainMatrix& b) {
  if (!(a.ring_ == b.ring_)) throw MixedRings("matrix product over " + a.ring_.describe() + " and " + b.ring_.describe());
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix product: dimension mismatch");
  const ChainRing& R = a.ring_;
  ChainMatrix c(R, a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i)
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const ChainElem& x = a.at(i, k);
      if (R.is_zero(x)) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) c.at(i, j) = R.add(c.at(i, j), R.mul(x, b.at(k, j)));
    }
  return c;
}

std::string ChainMatrix::to_string() const {
  std::ostringstream os;
  os << rows_ << "x" << cols_ << " {";
  bool first = true;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) {
      if (ring_.is_zero(at(i, j))) continue;
      os << (first ? "" : ", ") << "(" << i << "," << j << "," << ring_.to_string(at(i, j)) << ")";
      first = false;
    }
  os << "}";
  return os.str();
}

namespace {

void row_axpy(ChainMatrix& m, std::size_t dst, std::size_t src, const ChainElem& f) {
  const ChainRing& R = m.ring();
  for (std::size_t j = 0; j < m.cols(); ++j) m.at(dst, j) = R.sub(m.at(dst, j), R.mul(f, m.at(src, j)));
}

void col_axpy(ChainMatrix& m, std::size_t dst, std::size_t src, const ChainElem& f) {
  const ChainRing& R = m.ring();
  for (std::size_t i = 0; i < m.rows(); ++i) m.at(i, dst) = R.sub(m.at(i, dst), R.mul(f, m.at(i, src)));
}

void swap_rows(ChainMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}

void swap_cols(ChainMatrix& m, std::size_t a, std::size_t b) {
  if (a == b) return;
  for (std::size_t i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
}

void scale_row(ChainMatrix& m, std::size_t r, const ChainElem& f) {
  const ChainRing& R = m.ring();
  for (std::size_t j = 0; j < m.cols(); ++j) m.at(r, j) = R.mul(f, m.at(r, j));
}

}  // namespace

SmithForm snf(const ChainMatrix& m, bool reverse_order) {
  const ChainRing& R = m.ring();
  const std::size_t rows = m.rows(), cols = m.cols();
  const unsigned e = R.nilpotency();
  SmithForm out{ChainMatrix::identity(R, rows), m, ChainMatrix::identity(R, cols), {}, 0};
  ChainMatrix& U = out.U;
  ChainMatrix& D = out.D;
  ChainMatrix& V = out.V;
  if (reverse_order) {
    // Conjugate by the order-reversing permutations.
    for (std::size_t i = 0; i < rows / 2; ++i) {
      swap_rows(D, i, rows - 1 - i);
      swap_rows(U, i, rows - 1 - i);
    }
    for (std::size_t j = 0; j < cols / 2; ++j) {
      swap_cols(D, j, cols - 1 - j);
      swap_cols(V, j, cols - 1 - j);
    }
  }
  const std::size_t n = std::min(rows, cols);
  for (std::size_t k = 0; k < n; ++k) {
    unsigned best = e;
    std::size_t pr = k, pc = k;
    for (std::size_t i = k; i < rows && best > 0; ++i)
      for (std::size_t j = k; j < cols; ++j) {
        unsigned v = R.valuation(D.at(i, j));
        if (v < best) {
          best = v;
          pr = i;
          pc = j;
          if (v == 0) break;
        }
      }
    if (best == e) break;
    swap_rows(D, k, pr);
    swap_rows(U, k, pr);
    swap_cols(D, k, pc);
    swap_cols(V, k, pc);
    const ChainElem unit_inv = R.inverse(R.unit_part(D.at(k, k)));
    scale_row(D, k, unit_inv);
    scale_row(U, k, unit_inv);
    for (std::size_t i = k + 1; i < rows; ++i) {
      if (R.is_zero(D.at(i, k))) continue;
      ChainElem f = R.div_pi(D.at(i, k), best);
      row_axpy(D, i, k, f);
      row_axpy(U, i, k, f);
    }
    for (std::size_t j = k + 1; j < cols; ++j) {
      if (R.is_zero(D.at(k, j))) continue;
      ChainElem f = R.div_pi(D.at(k, j), best);
      col_axpy(D, j, k, f);
      col_axpy(V, j, k, f);
    }
    out.exponents.push_back(best);
    ++out.rank;
  }
  while (out.exponents.size() < n) out.exponents.push_back(e);
  return out;
}

std::size_t InvariantFactors::length(unsigned nilpotency) const {
  std::size_t l = free_rank * nilpotency;
  for (auto a : torsion) l += a;
  return l;
}

InvariantFactors& InvariantFactors::operator+=(const InvariantFactors& o) {
  free_rank += o.free_rank;
  torsion.insert(torsion.end(), o.torsion.begin(), o.torsion.end());
  std::sort(torsion.begin(), torsion.end());
  return *this;
}

std::string InvariantFactors::to_string() const {
  std::ostringstream os;
  os << "free " << free_rank << ", torsion [";
  for (std::size_t i = 0; i < torsion.size(); ++i) os << (i ? "," : "") << torsion[i];
  os << "]";
  if (twist) os << ", twist {" << twist << "}";
  return os.str();
}

InvariantFactors cokernel_invariants(const ChainMatrix& relations, bool reverse_order) {
  const unsigned e = relations.ring().nilpotency();
  InvariantFactors out;
  SmithForm s = snf(relations, reverse_order);
  for (std::size_t i = 0; i < relations.rows(); ++i) {
    unsigned a = i < s.exponents.size() ? s.exponents[i] : e;
    if (a == e)
      ++out.free_rank;
    else if (a > 0)
      out.torsion.push_back(a);
  }
  std::sort(out.torsion.begin(), out.torsion.end());
  return out;
}

namespace {

// Generators of ker(m): columns of V scaled by pi^(e - a_j), with
// annihilator exponents a_j. Columns with a_j = 0 are dropped.
struct KernelBasis {
  std::vector<std::size_t> cols;
  std::vector<unsigned> ann;
  SmithForm s;
};

KernelBasis kernel_basis(const ChainMatrix& m, bool reverse_order) {
  const unsigned e = m.ring().nilpotency();
  KernelBasis kb{{}, {}, snf(m, reverse_order)};
  for (std::size_t j = 0; j < m.cols(); ++j) {
    unsigned a = j < kb.s.exponents.size() ? kb.s.exponents[j] : e;
    if (a == 0) continue;
    kb.cols.push_back(j);
    kb.ann.push_back(a);
  }
  return kb;
}

// Inverse of a unimodular matrix via its own Smith form.
ChainMatrix invert(const ChainMatrix& m) {
  SmithForm s = snf(m);
  for (auto a : s.exponents)
    if (a != 0) throw std::logic_error("invert: matrix is not unimodular");
  // U M V = I  =>  M^-1 = V U.
  return s.V * s.U;
}

}  // namespace

InvariantFactors kernel_invariants(const ChainMatrix& m, bool reverse_order) {
  const unsigned e = m.ring().nilpotency();
  KernelBasis kb = kernel_basis(m, reverse_order);
  InvariantFactors out;
  for (auto a : kb.ann) {
    if (a == e)
      ++out.free_rank;
    else
      out.torsion.push_back(a);
  }
  std::sort(out.torsion.begin(), out.torsion.end());
  return out;
}

InvariantFactors complex_cohomology(const ChainMatrix& d_prev, const ChainMatrix& d_next, bool reverse_order) {
  const ChainRing& R = d_next.ring();
  if (d_prev.rows() != d_next.cols()) throw NotAComplex("complex_cohomology: dimension mismatch");
  if (!(d_next * d_prev).is_zero()) throw NotAComplex("d_next * d_prev != 0");
  const unsigned e = R.nilpotency();
  KernelBasis kb = kernel_basis(d_next, reverse_order);
  const std::size_t g = kb.cols.size();
  // Coordinates of the image columns in the V basis.
  ChainMatrix c = invert(kb.s.V) * d_prev;
  ChainMatrix rel(R, g, d_prev.cols() + g);
  for (std::size_t r = 0; r < g; ++r) {
    const std::size_t j = kb.cols[r];
    const unsigned shift = e - kb.ann[r];
    for (std::size_t col = 0; col < d_prev.cols(); ++col) rel.at(r, col) = R.div_pi(c.at(j, col), shift);
    rel.at(r, d_prev.cols() + r) = R.pi_power(kb.ann[r]);
  }
  return cokernel_invariants(rel, reverse_order);
}

bool solve_linear(const ChainMatrix& m, const std::vector<ChainElem>& b, std::vector<ChainElem>& x) {
  const ChainRing& R = m.ring();
  if (b.size() != m.rows()) throw std::invalid_argument("solve_linear: dimension mismatch");
  SmithForm s = snf(m);
  // U M V = D, so M x = b  <=>  D y = U b with x = V y.
  std::vector<ChainElem> ub(m.rows(), R.zero());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t k = 0; k < m.rows(); ++k) ub[i] = R.add(ub[i], R.mul(s.U.at(i, k), b[k]));
  std::vector<ChainElem> y(m.cols(), R.zero());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    const unsigned a = i < s.exponents.size() ? s.exponents[i] : R.nilpotency();
    if (R.valuation(ub[i]) < a) return false;
    if (i < m.cols() && a < R.nilpotency()) y[i] = R.div_pi(ub[i], a);
  }
  x.assign(m.cols(), R.zero());
  for (std::size_t i = 0; i < m.cols(); ++i)
    for (std::size_t k = 0; k < m.cols(); ++k) x[i] = R.add(x[i], R.mul(s.V.at(i, k), y[k]));
  return true;
}

}  // namespace prism
