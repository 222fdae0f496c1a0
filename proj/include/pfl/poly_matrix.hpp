// pfl: matrices with polynomial entries and exact linear algebra over Q(x).
//
// Everything here is fraction-free: Bareiss one-step elimination keeps all
// intermediate entries polynomial (they are minors of the input), and every
// division it performs is exact.  Pivots are chosen of lowest total degree
// to limit expression swell.

#pragma once

#include <pfl/polynomial.hpp>

#include <vector>

namespace pfl {

class PolyMatrix {
 public:
  PolyMatrix() : rows_(0), cols_(0), dim_(0) {}
  PolyMatrix(std::size_t rows, std::size_t cols, std::size_t chart_dim);

  static PolyMatrix from_rows(const std::vector<std::vector<Polynomial>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t chart_dim() const { return dim_; }

  Polynomial& at(std::size_t r, std::size_t c) { return entries_[r * cols_ + c]; }
  const Polynomial& at(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }

  void append_row(const std::vector<Polynomial>& row);
  std::vector<Polynomial> row(std::size_t r) const;

 private:
  std::size_t rows_, cols_, dim_;
  std::vector<Polynomial> entries_;
};

// Rank of the matrix evaluated at a rational point (plain Gaussian
// elimination over Q).
int rank_at_point(const PolyMatrix& m, const RationalPoint& at);

// Rank over the fraction field Q(x1..xN).  An evaluation at a fixed sample
// point is used first as an exact lower bound: when it reaches min(rows,
// cols) the answer is certified without symbolic elimination.  Otherwise a
// fraction-free Bareiss elimination decides the rank.
int generic_rank(const PolyMatrix& m);

// True iff every order x order minor is identically zero, i.e. the rank over
// the fraction field is < order.
bool minors_vanish_identically(const PolyMatrix& m, std::size_t order);

// Exact rational determinant of a square matrix of rationals.
Rational rational_determinant(std::vector<std::vector<Rational>> m);

// Fraction-free Gauss-Jordan reduction.  After the call, for each pivot k
// (row order as in `pivot_rows`, column `pivot_cols[k]`) the reduced matrix
// satisfies R[pivot_rows[k]][pivot_cols[j]] = delta * (k == j), with all
// non-pivot rows identically zero on pivot columns, where `delta` is the
// final pivot (a rank-sized minor of the input, up to sign).
//
// When `base` is supplied, pivots not vanishing at that point are preferred;
// if the matrix has constant rank at the point this yields delta(base) != 0.
struct GaussJordanResult {
  PolyMatrix reduced;
  std::vector<std::size_t> pivot_rows;
  std::vector<std::size_t> pivot_cols;
  Polynomial delta;  // common denominator of the reduced system
  int rank = 0;
};
GaussJordanResult fraction_free_gauss_jordan(const PolyMatrix& m,
                                             const RationalPoint* base = nullptr);

// Polynomial basis of { x : M x = 0 } over Q(x).  Vectors come out with
// denominators cleared; they are pointwise independent and spanning wherever
// `denominator` does not vanish.  With a `base` whose rank is generic, the
// basis is in particular independent at the base point.
struct KernelBasis {
  std::vector<std::vector<Polynomial>> vectors;
  Polynomial denominator;
};
KernelBasis polynomial_kernel(const PolyMatrix& m, const RationalPoint* base = nullptr);

// Solves A x = b simultaneously for every column b of B, over Q(x).
// Requires A to have full column rank generically and every b to lie in the
// column span; throws precondition_error otherwise.  Solutions share the
// common denominator `delta`: x_j = numerators[j] / delta.
struct ColumnSolve {
  std::vector<std::vector<Polynomial>> numerators;  // one vector per column of B
  Polynomial delta;
};
ColumnSolve solve_in_column_span(const PolyMatrix& a, const PolyMatrix& b,
                                 const RationalPoint* base = nullptr);

// Divides out the common monomial factor of all terms of all components;
// the direction of the vector over Q(x) is unchanged.
void strip_monomial_content(std::vector<Polynomial>& v);

// Row-space membership tests against a fixed family of row vectors.  The
// reduction map is linear over Q(x) and scales by fixed nonzero pivots only,
// so reduce(v) == 0 iff v lies in the Q(x)-row-span of the family.
class RowSpan {
 public:
  explicit RowSpan(const PolyMatrix& rows);
  std::vector<Polynomial> reduce(const std::vector<Polynomial>& v) const;
  bool contains(const std::vector<Polynomial>& v) const;
  int rank() const { return rank_; }

 private:
  PolyMatrix echelon_;
  std::vector<std::size_t> pivot_rows_, pivot_cols_;
  int rank_;
  std::size_t dim_;
};

}  // namespace pfl
