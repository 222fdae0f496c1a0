#include <pfl/poly_matrix.hpp>

#include <algorithm>
#include <numeric>

namespace pfl {

PolyMatrix::PolyMatrix(std::size_t rows, std::size_t cols, std::size_t chart_dim)
    : rows_(rows), cols_(cols), dim_(chart_dim), entries_(rows * cols, Polynomial(chart_dim)) {}

PolyMatrix PolyMatrix::from_rows(const std::vector<std::vector<Polynomial>>& rows) {
  if (rows.empty()) return PolyMatrix();
  PolyMatrix m(rows.size(), rows[0].size(), rows[0].empty() ? 0 : rows[0][0].dim());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != m.cols_) throw input_error("poly_matrix: ragged rows");
    for (std::size_t c = 0; c < m.cols_; ++c) {
      if (rows[r][c].dim() != m.dim_) throw input_error("poly_matrix: mixed chart dimensions");
      m.at(r, c) = rows[r][c];
    }
  }
  return m;
}

void PolyMatrix::append_row(const std::vector<Polynomial>& row) {
  if (rows_ == 0 && cols_ == 0) {
    cols_ = row.size();
    dim_ = row.empty() ? 0 : row[0].dim();
  }
  if (row.size() != cols_) throw input_error("poly_matrix: appended row has wrong length");
  for (const auto& p : row) {
    if (p.dim() != dim_) throw input_error("poly_matrix: appended row on wrong chart");
    entries_.push_back(p);
  }
  ++rows_;
}

std::vector<Polynomial> PolyMatrix::row(std::size_t r) const {
  std::vector<Polynomial> out;
  out.reserve(cols_);
  for (std::size_t c = 0; c < cols_; ++c) out.push_back(at(r, c));
  return out;
}

int rank_at_point(const PolyMatrix& m, const RationalPoint& at) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols()));
  for (std::size_t r = 0; r < m.rows(); ++r)
    for (std::size_t c = 0; c < m.cols(); ++c) a[r][c] = m.at(r, c).evaluate(at);

  std::size_t rank = 0;
  for (std::size_t col = 0; col < m.cols() && rank < m.rows(); ++col) {
    std::size_t pivot = rank;
    while (pivot < m.rows() && a[pivot][col] == 0) ++pivot;
    if (pivot == m.rows()) continue;
    std::swap(a[pivot], a[rank]);
    for (std::size_t r = rank + 1; r < m.rows(); ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[rank][col];
      for (std::size_t c = col; c < m.cols(); ++c) a[r][c] -= f * a[rank][c];
    }
    ++rank;
  }
  return static_cast<int>(rank);
}

Rational rational_determinant(std::vector<std::vector<Rational>> a) {
  std::size_t n = a.size();
  Rational det(1);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return Rational(0);
    if (pivot != col) {
      std::swap(a[pivot], a[col]);
      det = -det;
    }
    det *= a[col][col];
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col] == 0) continue;
      Rational f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
    }
  }
  return det;
}

namespace {

// Fixed sample points for the exact lower-bound pre-pass of generic_rank.
RationalPoint sample_point(std::size_t dim, int which) {
  static const long primes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61};
  RationalPoint p(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    long base = primes[(i + static_cast<std::size_t>(which) * 5) % (sizeof(primes) / sizeof(primes[0]))];
    // Shift by the pass index so the passes evaluate at genuinely different
    // points; rational() keeps the value canonical (mpq arithmetic is
    // undefined on non-canonical operands).
    p[i] = rational(base + which, 1 + ((i + which) % 3));
  }
  return p;
}

// Forward-only fraction-free (Bareiss) elimination; returns the rank over
// the fraction field.  Pivots are chosen of lowest total degree.
int bareiss_rank(PolyMatrix a) {
  std::size_t nr = a.rows(), nc = a.cols();
  if (nr == 0 || nc == 0) return 0;
  std::vector<bool> row_used(nr, false), col_used(nc, false);
  Polynomial prev(a.chart_dim(), Rational(1));
  int rank = 0;
  while (true) {
    // Lowest-degree nonzero pivot among unused rows/columns.
    bool found = false;
    std::size_t pr = 0, pc = 0;
    uint32_t best = 0;
    for (std::size_t r = 0; r < nr; ++r) {
      if (row_used[r]) continue;
      for (std::size_t c = 0; c < nc; ++c) {
        if (col_used[c] || a.at(r, c).is_zero()) continue;
        uint32_t deg = a.at(r, c).total_degree();
        if (!found || deg < best) {
          found = true;
          best = deg;
          pr = r;
          pc = c;
        }
      }
    }
    if (!found) break;
    const Polynomial pivot = a.at(pr, pc);
    for (std::size_t r = 0; r < nr; ++r) {
      if (row_used[r] || r == pr) continue;
      const Polynomial factor = a.at(r, pc);
      for (std::size_t c = 0; c < nc; ++c) {
        if (col_used[c] || c == pc) continue;
        Polynomial num = pivot * a.at(r, c) - factor * a.at(pr, c);
        a.at(r, c) = num.is_zero() ? num : num.divide_exact(prev);
      }
      a.at(r, pc) = Polynomial(a.chart_dim());
    }
    row_used[pr] = true;
    col_used[pc] = true;
    prev = pivot;
    ++rank;
  }
  return rank;
}

}  // namespace

// The direction of the vector over Q(x) is unchanged, and evaluation
// behavior at points on the stripped coordinate hyperplanes improves.
void strip_monomial_content(std::vector<Polynomial>& v) {
  std::vector<uint32_t> common;
  bool any = false;
  for (const auto& p : v)
    for (const auto& [m, c] : p.terms()) {
      if (!any) {
        common = m.exponents;
        any = true;
      } else {
        for (std::size_t i = 0; i < common.size(); ++i)
          common[i] = std::min(common[i], m.exponents[i]);
      }
    }
  if (!any) return;
  bool trivial = true;
  for (uint32_t e : common) trivial = trivial && e == 0;
  if (trivial) return;
  Monomial factor(common);
  for (auto& p : v) {
    Polynomial out(p.dim());
    for (const auto& [m, c] : p.terms()) out.add_term(m / factor, c);
    p = std::move(out);
  }
}

namespace {

// Divide a polynomial vector by its rational content and fix the sign so the
// leading coefficient of the last nonzero entry is positive.
void normalize_content(std::vector<Polynomial>& v) {
  strip_monomial_content(v);
  Integer num_gcd(0), den_lcm(1);
  for (const auto& p : v)
    for (const auto& [m, c] : p.terms()) {
      mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), c.get_num().get_mpz_t());
      mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.get_den().get_mpz_t());
    }
  if (num_gcd == 0) return;
  Rational scale(den_lcm, num_gcd);
  scale.canonicalize();
  const Polynomial* last_nonzero = nullptr;
  for (const auto& p : v)
    if (!p.is_zero()) last_nonzero = &p;
  if (last_nonzero && last_nonzero->leading_term().second * scale < 0) scale = -scale;
  for (auto& p : v) p = p * scale;
}

}  // namespace

int generic_rank(const PolyMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0;
  const int full = static_cast<int>(std::min(m.rows(), m.cols()));
  for (int pass = 0; pass < 2; ++pass) {
    if (rank_at_point(m, sample_point(m.chart_dim(), pass)) == full) return full;
  }
  return bareiss_rank(m);
}

bool minors_vanish_identically(const PolyMatrix& m, std::size_t order) {
  if (order == 0 || order > std::min(m.rows(), m.cols()))
    throw precondition_error("minors_vanish_identically: order out of range");
  return generic_rank(m) < static_cast<int>(order);
}

GaussJordanResult fraction_free_gauss_jordan(const PolyMatrix& m, const RationalPoint* base) {
  GaussJordanResult res;
  res.reduced = m;
  res.delta = Polynomial(m.chart_dim(), Rational(1));
  std::size_t nr = m.rows(), nc = m.cols();
  if (nr == 0 || nc == 0) return res;
  PolyMatrix& a = res.reduced;
  std::vector<bool> row_used(nr, false), col_used(nc, false);
  Polynomial prev(m.chart_dim(), Rational(1));
  while (true) {
    bool found = false;
    std::size_t pr = 0, pc = 0;
    uint32_t best = 0;
    bool best_alive = false;  // pivot nonzero at the base point
    for (std::size_t r = 0; r < nr; ++r) {
      if (row_used[r]) continue;
      for (std::size_t c = 0; c < nc; ++c) {
        if (col_used[c] || a.at(r, c).is_zero()) continue;
        uint32_t deg = a.at(r, c).total_degree();
        bool alive = base != nullptr && a.at(r, c).evaluate(*base) != 0;
        if (!found || (alive && !best_alive) || (alive == best_alive && deg < best)) {
          found = true;
          best = deg;
          best_alive = alive;
          pr = r;
          pc = c;
        }
      }
    }
    if (!found) break;
    const Polynomial pivot = a.at(pr, pc);
    for (std::size_t r = 0; r < nr; ++r) {
      if (r == pr) continue;
      const Polynomial factor = a.at(r, pc);
      for (std::size_t c = 0; c < nc; ++c) {
        if (col_used[c] || c == pc) continue;
        Polynomial num = pivot * a.at(r, c) - factor * a.at(pr, c);
        a.at(r, c) = num.is_zero() ? num : num.divide_exact(prev);
      }
      a.at(r, pc) = Polynomial(m.chart_dim());
    }
    // Earlier pivot entries rescale to the current pivot (their columns are
    // already clear everywhere else).
    for (std::size_t t = 0; t < res.pivot_rows.size(); ++t)
      a.at(res.pivot_rows[t], res.pivot_cols[t]) = pivot;
    row_used[pr] = true;
    col_used[pc] = true;
    res.pivot_rows.push_back(pr);
    res.pivot_cols.push_back(pc);
    prev = pivot;
    ++res.rank;
  }
  res.delta = prev;
  return res;
}

KernelBasis polynomial_kernel(const PolyMatrix& m, const RationalPoint* base) {
  KernelBasis out;
  const std::size_t nc = m.cols();
  if (nc == 0) {
    out.denominator = Polynomial(m.chart_dim(), Rational(1));
    return out;
  }
  GaussJordanResult gj = fraction_free_gauss_jordan(m, base);
  out.denominator = gj.delta;
  std::vector<bool> is_pivot(nc, false);
  for (std::size_t c : gj.pivot_cols) is_pivot[c] = true;
  for (std::size_t f = 0; f < nc; ++f) {
    if (is_pivot[f]) continue;
    std::vector<Polynomial> v(nc, Polynomial(m.chart_dim()));
    v[f] = gj.delta;
    for (std::size_t t = 0; t < gj.pivot_cols.size(); ++t)
      v[gj.pivot_cols[t]] = -gj.reduced.at(gj.pivot_rows[t], f);
    normalize_content(v);
    out.vectors.push_back(std::move(v));
  }
  return out;
}

ColumnSolve solve_in_column_span(const PolyMatrix& a, const PolyMatrix& b,
                                 const RationalPoint* base) {
  if (a.rows() != b.rows()) throw input_error("solve_in_column_span: row count mismatch");
  const std::size_t na = a.cols(), nb = b.cols();
  PolyMatrix aug(a.rows(), na + nb, a.chart_dim());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < na; ++c) aug.at(r, c) = a.at(r, c);
    for (std::size_t c = 0; c < nb; ++c) aug.at(r, na + c) = b.at(r, c);
  }
  // Same elimination as fraction_free_gauss_jordan but pivots restricted to
  // the A-block.
  std::vector<bool> row_used(a.rows(), false), col_used(na + nb, false);
  std::vector<std::size_t> pivot_rows, pivot_cols;
  Polynomial prev(a.chart_dim(), Rational(1));
  while (true) {
    bool found = false;
    std::size_t pr = 0, pc = 0;
    uint32_t best = 0;
    bool best_alive = false;
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (row_used[r]) continue;
      for (std::size_t c = 0; c < na; ++c) {
        if (col_used[c] || aug.at(r, c).is_zero()) continue;
        uint32_t deg = aug.at(r, c).total_degree();
        bool alive = base != nullptr && aug.at(r, c).evaluate(*base) != 0;
        if (!found || (alive && !best_alive) || (alive == best_alive && deg < best)) {
          found = true;
          best = deg;
          best_alive = alive;
          pr = r;
          pc = c;
        }
      }
    }
    if (!found) break;
    const Polynomial pivot = aug.at(pr, pc);
    for (std::size_t r = 0; r < a.rows(); ++r) {
      if (r == pr) continue;
      const Polynomial factor = aug.at(r, pc);
      for (std::size_t c = 0; c < na + nb; ++c) {
        if (c < na && (col_used[c] || c == pc)) continue;
        Polynomial num = pivot * aug.at(r, c) - factor * aug.at(pr, c);
        aug.at(r, c) = num.is_zero() ? num : num.divide_exact(prev);
      }
      aug.at(r, pc) = Polynomial(a.chart_dim());
    }
    for (std::size_t t = 0; t < pivot_rows.size(); ++t)
      aug.at(pivot_rows[t], pivot_cols[t]) = pivot;
    row_used[pr] = true;
    col_used[pc] = true;
    pivot_rows.push_back(pr);
    pivot_cols.push_back(pc);
    prev = pivot;
  }
  if (pivot_rows.size() != na)
    throw precondition_error("solve_in_column_span: matrix is column rank deficient");
  for (std::size_t r = 0; r < a.rows(); ++r) {
    if (row_used[r]) continue;
    for (std::size_t c = 0; c < nb; ++c)
      if (!aug.at(r, na + c).is_zero())
        throw precondition_error("solve_in_column_span: right-hand side outside the column span");
  }
  ColumnSolve out;
  out.delta = prev;
  out.numerators.assign(nb, std::vector<Polynomial>(na, Polynomial(a.chart_dim())));
  for (std::size_t t = 0; t < pivot_rows.size(); ++t)
    for (std::size_t c = 0; c < nb; ++c)
      out.numerators[c][pivot_cols[t]] = aug.at(pivot_rows[t], na + c);
  return out;
}

RowSpan::RowSpan(const PolyMatrix& rows) : dim_(rows.chart_dim()) {
  GaussJordanResult gj = fraction_free_gauss_jordan(rows);
  echelon_ = std::move(gj.reduced);
  pivot_rows_ = std::move(gj.pivot_rows);
  pivot_cols_ = std::move(gj.pivot_cols);
  rank_ = gj.rank;
}

std::vector<Polynomial> RowSpan::reduce(const std::vector<Polynomial>& v) const {
  if (rank_ == 0) return v;
  if (v.size() != echelon_.cols()) throw input_error("row_span: vector length mismatch");
  std::vector<Polynomial> r = v;
  const Polynomial& delta = echelon_.at(pivot_rows_[0], pivot_cols_[0]);
  for (std::size_t t = 0; t < pivot_rows_.size(); ++t) {
    Polynomial coeff = r[pivot_cols_[t]];
    if (coeff.is_zero()) {
      for (auto& p : r) p = p * delta;  // keep the scaling uniform across pivots
      continue;
    }
    for (std::size_t c = 0; c < r.size(); ++c)
      r[c] = delta * r[c] - coeff * echelon_.at(pivot_rows_[t], c);
  }
  return r;
}

bool RowSpan::contains(const std::vector<Polynomial>& v) const {
  auto r = reduce(v);
  for (const auto& p : r)
    if (!p.is_zero()) return false;
  return true;
}

}  // namespace pfl
