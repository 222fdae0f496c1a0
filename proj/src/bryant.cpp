#include <pfl/bryant.hpp>

#include <algorithm>

namespace pfl {

namespace {

// Deterministic total order on polynomials: graded-lex on terms from the
// leading one down, coefficients compared as rationals.
bool polynomial_less(const Polynomial& a, const Polynomial& b) {
  auto ia = a.terms().rbegin(), ea = a.terms().rend();
  auto ib = b.terms().rbegin(), eb = b.terms().rend();
  GradedLexLess less;
  for (; ia != ea && ib != eb; ++ia, ++ib) {
    if (less(ia->first, ib->first)) return true;
    if (less(ib->first, ia->first)) return false;
    int c = cmp(ia->second, ib->second);
    if (c != 0) return c < 0;
  }
  return ia == ea && ib != eb;
}

bool coefficient_vector_less(const std::vector<Polynomial>& a, const std::vector<Polynomial>& b) {
  for (std::size_t i = 0; i < std::min(a.size(), b.size()); ++i) {
    if (polynomial_less(a[i], b[i])) return true;
    if (polynomial_less(b[i], a[i])) return false;
  }
  return a.size() < b.size();
}

Distribution derived_level_one(const Distribution& d, const RationalPoint& base) {
  return derived_flag(d, base, 1).levels.back();
}

void require_constant_ranks(const Distribution& d, const Distribution& d1,
                            const RationalPoint& base, const char* who) {
  if (!d.constant_rank_at(base))
    throw precondition_error(std::string(who) + ": rank of D not locally constant at base");
  if (!d1.constant_rank_at(base))
    throw precondition_error(std::string(who) + ": rank of D^(1) not locally constant at base");
}

// Fields h = sum_a coeff_a f_a from kernel coefficient vectors.
std::vector<VectorField> combine(const std::vector<VectorField>& gens,
                                 const std::vector<std::vector<Polynomial>>& coeffs) {
  std::vector<VectorField> out;
  const std::size_t n = gens.empty() ? 0 : gens[0].chart.dim;
  for (const auto& a : coeffs) {
    std::vector<Polynomial> comps(n, Polynomial(n));
    for (std::size_t i = 0; i < gens.size(); ++i)
      for (std::size_t c = 0; c < n; ++c) comps[c] += a[i] * gens[i].components[c];
    strip_monomial_content(comps);
    VectorField h(gens[0].chart, std::move(comps));
    if (!h.is_zero()) out.push_back(std::move(h));
  }
  return out;
}

}  // namespace

bool span_contains(const Distribution& outer, const Distribution& inner) {
  if (outer.chart() != inner.chart()) throw input_error("span_contains: chart mismatch");
  RowSpan span(outer.generator_matrix());
  for (const auto& g : inner.generators())
    if (!span.contains(g.components)) return false;
  return true;
}

bool span_equal(const Distribution& a, const Distribution& b) {
  return a.generic_rank() == b.generic_rank() && span_contains(a, b) && span_contains(b, a);
}

bool is_involutive(const Distribution& d) {
  RowSpan span(d.generator_matrix());
  const auto& gens = d.generators();
  for (std::size_t i = 0; i < gens.size(); ++i)
    for (std::size_t j = i + 1; j < gens.size(); ++j)
      if (!span.contains(lie_bracket(gens[i], gens[j]).components)) return false;
  return true;
}

CharacteristicResult characteristic_via_forms(const Distribution& d, const RationalPoint& base) {
  AnnihilatorResult ann = annihilator(d, base);
  const auto& gens = d.generators();
  const std::size_t k = gens.size();
  const std::size_t n = d.chart().dim;
  if (ann.system.generators().empty())
    return CharacteristicResult{d, Polynomial(n, Rational(1))};

  // Unknowns a_1..a_k; one equation per (form, generator) pair:
  //   sum_a x_a  d omega_l (f_a, f_b) = 0.
  PolyMatrix system(0, k, n);
  for (const auto& omega : ann.system.generators()) {
    TwoForm dw = exterior_derivative(omega);
    std::vector<std::vector<Polynomial>> values(k, std::vector<Polynomial>(k, Polynomial(n)));
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b) {
        Polynomial v = dw(gens[a], gens[b]);
        values[a][b] = v;
        values[b][a] = -v;
      }
    for (std::size_t b = 0; b < k; ++b) {
      std::vector<Polynomial> row;
      row.reserve(k);
      for (std::size_t a = 0; a < k; ++a) row.push_back(values[a][b]);
      system.append_row(row);
    }
  }
  KernelBasis kernel = polynomial_kernel(system, &base);
  CharacteristicResult out;
  out.distribution = Distribution(d.chart(), combine(gens, kernel.vectors));
  out.valid_locus = ann.valid_locus * kernel.denominator;
  return out;
}

CharacteristicResult characteristic_via_brackets(const Distribution& d, const RationalPoint& base) {
  const auto& gens = d.generators();
  const std::size_t k = gens.size();
  const std::size_t n = d.chart().dim;
  RowSpan span(d.generator_matrix());

  // Residual of each bracket against the generator row space; the reduction
  // is one fixed linear map, so kernels of the residual system coincide with
  // solutions of sum_a x_a [f_a, f_b] = 0 mod D.
  PolyMatrix system(0, k, n);
  for (std::size_t b = 0; b < k; ++b) {
    std::vector<std::vector<Polynomial>> residual(k);
    for (std::size_t a = 0; a < k; ++a) {
      if (a == b) {
        residual[a].assign(n, Polynomial(n));
        continue;
      }
      residual[a] = span.reduce(lie_bracket(gens[a], gens[b]).components);
    }
    for (std::size_t c = 0; c < n; ++c) {
      std::vector<Polynomial> row;
      row.reserve(k);
      bool nonzero = false;
      for (std::size_t a = 0; a < k; ++a) {
        row.push_back(residual[a][c]);
        nonzero = nonzero || !residual[a][c].is_zero();
      }
      if (nonzero) system.append_row(row);
    }
  }
  if (system.rows() == 0)
    return CharacteristicResult{d, Polynomial(n, Rational(1))};
  KernelBasis kernel = polynomial_kernel(system, &base);
  CharacteristicResult out;
  out.distribution = Distribution(d.chart(), combine(gens, kernel.vectors));
  out.valid_locus = kernel.denominator;
  return out;
}

Distribution characteristic_distribution(const Distribution& d, const RationalPoint& base) {
  Distribution d1 = derived_level_one(d, base);
  require_constant_ranks(d, d1, base, "characteristic_distribution");

  CharacteristicResult by_forms = characteristic_via_forms(d, base);
  CharacteristicResult by_brackets = characteristic_via_brackets(d, base);
  if (!span_equal(by_forms.distribution, by_brackets.distribution))
    throw internal_error(
        "characteristic_distribution: cond-C and bracket routes disagree on the span");

  // Definitional verification of every returned generator.
  RowSpan span(d.generator_matrix());
  for (const auto& h : by_forms.distribution.generators())
    for (const auto& f : d.generators())
      if (!span.contains(lie_bracket(h, f).components))
        throw internal_error("characteristic_distribution: returned generator fails [h, D] in D");
  return by_forms.distribution;
}

WSpace w_space(const Distribution& d, const OneForm& omega, const RationalPoint& base) {
  if (omega.chart != d.chart()) throw input_error("w_space: chart mismatch");
  const auto& gens = d.generators();
  const std::size_t k = gens.size();
  const std::size_t n = d.chart().dim;
  TwoForm dw = exterior_derivative(omega);
  PolyMatrix system(0, k, n);
  for (std::size_t b = 0; b < k; ++b) {
    std::vector<Polynomial> row;
    row.reserve(k);
    for (std::size_t a = 0; a < k; ++a) row.push_back(dw(gens[a], gens[b]));
    system.append_row(row);
  }
  KernelBasis kernel = polynomial_kernel(system, &base);
  WSpace out;
  out.distribution = Distribution(d.chart(), combine(gens, kernel.vectors));
  out.valid_locus = kernel.denominator;
  return out;
}

StructureFunctions::StructureFunctions(std::vector<VectorField> frame_f,
                                       std::vector<VectorField> frame_g,
                                       std::vector<Polynomial> table, Polynomial denominator,
                                       bool residual_check)
    : frame_f_(std::move(frame_f)),
      frame_g_(std::move(frame_g)),
      table_(std::move(table)),
      denominator_(std::move(denominator)),
      residual_check_(residual_check) {}

Polynomial StructureFunctions::scaled(int i, int j, int k) const {
  const int d = d0();
  if (i < 0 || j < 0 || i >= d || j >= d || k < 0 || k >= r0())
    throw input_error("structure_functions: index out of range");
  if (i == j) return Polynomial(frame_f_[0].chart.dim);
  if (i > j) return -scaled(j, i, k);
  return table_[(static_cast<std::size_t>(i) * d + j) * r0() + k];
}

StructureFunctions structure_functions(const Distribution& d0_dist, const Distribution& d1_dist,
                                       const RationalPoint& base) {
  if (d0_dist.chart() != d1_dist.chart())
    throw input_error("structure_functions: chart mismatch");
  require_constant_ranks(d0_dist, d1_dist, base, "structure_functions");
  if (!span_contains(d1_dist, d0_dist))
    throw precondition_error("structure_functions: D0 is not contained in D1");
  const int d0 = d0_dist.generic_rank();
  const int d1 = d1_dist.generic_rank();
  const int r0 = d1 - d0;
  if (d0 < 2) throw precondition_error("structure_functions: d0 must be at least 2");
  if (r0 < 1) throw precondition_error("structure_functions: r0 must be at least 1");
  const std::size_t n = d0_dist.chart().dim;

  // Greedy frame: generators of D0 independent at base, then D1 generators
  // completing the frame at base.
  std::vector<VectorField> frame_f, frame_g;
  {
    PolyMatrix picked(0, n, n);
    int rank = 0;
    for (const auto& f : d0_dist.generators()) {
      if (static_cast<int>(frame_f.size()) == d0) break;
      PolyMatrix candidate = picked;
      candidate.append_row(f.components);
      int r = rank_at_point(candidate, base);
      if (r > rank) {
        picked = std::move(candidate);
        rank = r;
        frame_f.push_back(f);
      }
    }
    if (static_cast<int>(frame_f.size()) != d0)
      throw precondition_error("structure_functions: generators of D0 degenerate at base");
    for (const auto& g : d1_dist.generators()) {
      if (static_cast<int>(frame_g.size()) == r0) break;
      PolyMatrix candidate = picked;
      candidate.append_row(g.components);
      int r = rank_at_point(candidate, base);
      if (r > rank) {
        picked = std::move(candidate);
        rank = r;
        frame_g.push_back(g);
      }
    }
    if (static_cast<int>(frame_g.size()) != r0)
      throw precondition_error("structure_functions: generators of D1 degenerate at base");
  }

  // One exact solve for all brackets against the combined frame.
  PolyMatrix frame(n, static_cast<std::size_t>(d1), n);
  for (int c = 0; c < d0; ++c)
    for (std::size_t rr = 0; rr < n; ++rr) frame.at(rr, c) = frame_f[c].components[rr];
  for (int c = 0; c < r0; ++c)
    for (std::size_t rr = 0; rr < n; ++rr) frame.at(rr, d0 + c) = frame_g[c].components[rr];

  std::vector<std::pair<int, int>> pairs;
  PolyMatrix brackets(n, 0, n);
  {
    std::vector<std::vector<Polynomial>> cols;
    for (int i = 0; i < d0; ++i)
      for (int j = i + 1; j < d0; ++j) {
        pairs.emplace_back(i, j);
        cols.push_back(lie_bracket(frame_f[i], frame_f[j]).components);
      }
    brackets = PolyMatrix(n, cols.size(), n);
    for (std::size_t c = 0; c < cols.size(); ++c)
      for (std::size_t rr = 0; rr < n; ++rr) brackets.at(rr, c) = cols[c][rr];
  }
  ColumnSolve solve = solve_in_column_span(frame, brackets, &base);
  if (solve.delta.evaluate(base) == 0)
    throw precondition_error("structure_functions: decomposition denominator vanishes at base");

  std::vector<Polynomial> table(
      static_cast<std::size_t>(d0) * d0 * r0, Polynomial(n));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    for (int k = 0; k < r0; ++k)
      table[(static_cast<std::size_t>(i) * d0 + j) * r0 + k] = solve.numerators[p][d0 + k];
  }

  // Residual check: delta*[f_i,f_j] - sum_k table * g_k must lie in span(f).
  bool residual_ok = true;
  {
    PolyMatrix f_rows(0, n, n);
    for (const auto& f : frame_f) f_rows.append_row(f.components);
    RowSpan f_span(f_rows);
    for (std::size_t p = 0; p < pairs.size() && residual_ok; ++p) {
      auto [i, j] = pairs[p];
      std::vector<Polynomial> v(n, Polynomial(n));
      VectorField br = lie_bracket(frame_f[i], frame_f[j]);
      for (std::size_t c = 0; c < n; ++c) {
        v[c] = solve.delta * br.components[c];
        for (int k = 0; k < r0; ++k)
          v[c] -= table[(static_cast<std::size_t>(i) * d0 + j) * r0 + k] *
                  frame_g[k].components[c];
      }
      residual_ok = f_span.contains(v);
    }
  }
  if (!residual_ok)
    throw internal_error("structure_functions: residual escapes the span of the frame");
  return StructureFunctions(std::move(frame_f), std::move(frame_g), std::move(table), solve.delta,
                            residual_ok);
}

bool engel_rank_le_one(const PfaffianSystem& system) {
  const std::size_t s = system.generators().size();
  if (s == 0) return true;
  KernelBasis perp_basis = polynomial_kernel(system.generator_matrix());
  const std::size_t k = perp_basis.vectors.size();
  if (k < 4) return true;
  const std::size_t n = system.chart().dim;
  std::vector<VectorField> fields;
  fields.reserve(k);
  for (auto& v : perp_basis.vectors) fields.emplace_back(system.chart(), std::move(v));

  // values[i] holds d omega_i evaluated on pairs of annihilating fields.
  std::vector<std::vector<std::vector<Polynomial>>> values(
      s, std::vector<std::vector<Polynomial>>(k, std::vector<Polynomial>(k, Polynomial(n))));
  for (std::size_t i = 0; i < s; ++i) {
    TwoForm dw = exterior_derivative(system.generators()[i]);
    for (std::size_t a = 0; a < k; ++a)
      for (std::size_t b = a + 1; b < k; ++b) {
        Polynomial v = dw(fields[a], fields[b]);
        values[i][a][b] = v;
        values[i][b][a] = -v;
      }
  }
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i; j < s; ++j)
      for (std::size_t a = 0; a < k; ++a)
        for (std::size_t b = a + 1; b < k; ++b)
          for (std::size_t c = b + 1; c < k; ++c)
            for (std::size_t e = c + 1; e < k; ++e) {
              Polynomial wedge = values[i][a][b] * values[j][c][e] -
                                 values[i][a][c] * values[j][b][e] +
                                 values[i][a][e] * values[j][b][c] +
                                 values[j][a][b] * values[i][c][e] -
                                 values[j][a][c] * values[i][b][e] +
                                 values[j][a][e] * values[i][b][c];
              if (!wedge.is_zero()) return false;
            }
  return true;
}

bool engel_relations_check(const StructureFunctions& s) {
  const int d0 = s.d0();
  if (d0 <= 3) return true;
  const int r0 = s.r0();
  for (int i = 0; i < d0; ++i)
    for (int j = i + 1; j < d0; ++j)
      for (int k = j + 1; k < d0; ++k)
        for (int l = k + 1; l < d0; ++l)
          for (int p = 0; p < r0; ++p)
            for (int q = 0; q < r0; ++q) {
              Polynomial acc = s.scaled(i, j, p) * s.scaled(k, l, q) -
                               s.scaled(i, k, p) * s.scaled(j, l, q) +
                               s.scaled(i, l, p) * s.scaled(j, k, q) +
                               s.scaled(j, k, p) * s.scaled(i, l, q) -
                               s.scaled(j, l, p) * s.scaled(i, k, q) +
                               s.scaled(k, l, p) * s.scaled(i, j, q);
              if (!acc.is_zero()) return false;
            }
  return true;
}

BResult corank_one_B_detail(const Distribution& d, const RationalPoint& base) {
  Distribution d1 = derived_level_one(d, base);
  require_constant_ranks(d, d1, base, "corank_one_B");
  const int d0 = d.generic_rank();
  const int r0 = d1.generic_rank() - d0;
  if (r0 < 2) throw precondition_error("corank_one_B: r0 must be at least 2");

  Distribution c = characteristic_distribution(d, base);
  if (c.generic_rank() != d0 - r0 - 1 || c.rank_at(base) != d0 - r0 - 1)
    throw precondition_error("corank_one_B: characteristic rank is not d0 - r0 - 1");

  AnnihilatorResult ann0 = annihilator(d, base);
  if (!engel_rank_le_one(ann0.system))
    throw precondition_error("corank_one_B: Engel rank exceeds one");
  AnnihilatorResult ann1 = annihilator(d1, base);

  // Complete (D^(1))^perp to (D^(0))^perp; candidates ordered by graded-lex
  // on their coefficient vectors for determinism.
  std::vector<OneForm> candidates = ann0.system.generators();
  std::stable_sort(candidates.begin(), candidates.end(),
                   [](const OneForm& a, const OneForm& b) {
                     return coefficient_vector_less(a.components, b.components);
                   });
  PolyMatrix stack = ann1.system.generator_matrix();
  if (stack.cols() == 0) stack = PolyMatrix(0, d.chart().dim, d.chart().dim);
  int rank = generic_rank(stack);
  std::vector<OneForm> complementary;
  for (const auto& omega : candidates) {
    if (static_cast<int>(complementary.size()) == r0) break;
    PolyMatrix candidate = stack;
    candidate.append_row(omega.components);
    int r = generic_rank(candidate);
    if (r > rank) {
      stack = std::move(candidate);
      rank = r;
      complementary.push_back(omega);
    }
  }
  if (static_cast<int>(complementary.size()) != r0)
    throw internal_error("corank_one_B: could not complete the annihilator splitting");

  BResult out;
  out.valid_locus = ann0.valid_locus * ann1.valid_locus;
  PolyMatrix family(0, d.chart().dim, d.chart().dim);
  std::vector<VectorField> fields;
  int generic = 0, at_base = 0;
  for (const auto& omega : complementary) {
    WSpace w = w_space(d, omega, base);
    out.valid_locus = out.valid_locus * w.valid_locus;
    for (const auto& h : w.distribution.generators()) {
      PolyMatrix candidate = family;
      candidate.append_row(h.components);
      int g = generic_rank(candidate);
      int ab = rank_at_point(candidate, base);
      if (g > generic || ab > at_base) {
        family = std::move(candidate);
        fields.push_back(h);
        generic = g;
        at_base = ab;
      }
    }
  }
  out.b = Distribution(d.chart(), std::move(fields));
  out.complementary_forms = std::move(complementary);

  if (out.b.generic_rank() != d0 - 1 || out.b.rank_at(base) != d0 - 1)
    throw precondition_error(
        "corank_one_B: computed B is not corank one (input outside the theory's hypotheses)");
  RowSpan d_span(d.generator_matrix());
  const auto& bg = out.b.generators();
  for (std::size_t i = 0; i < bg.size(); ++i)
    for (std::size_t j = i + 1; j < bg.size(); ++j)
      if (!d_span.contains(lie_bracket(bg[i], bg[j]).components))
        throw precondition_error(
            "corank_one_B: [B,B] escapes D (input outside the theory's hypotheses)");
  return out;
}

Distribution corank_one_B(const Distribution& d, const RationalPoint& base) {
  return corank_one_B_detail(d, base).b;
}

CorankOneVerdict decide_corank_one_involutive(const Distribution& d, const RationalPoint& base) {
  Distribution d1 = derived_level_one(d, base);
  require_constant_ranks(d, d1, base, "decide_corank_one_involutive");
  const int d0 = d.generic_rank();
  const int r0 = d1.generic_rank() - d0;
  if (r0 < 1)
    throw precondition_error(
        "decide_corank_one_involutive: involutive input (r0 = 0) is excluded");

  CorankOneVerdict verdict;
  verdict.r0 = r0;

  Distribution c = characteristic_distribution(d, base);
  verdict.char_rank_ok =
      c.generic_rank() == d0 - r0 - 1 && c.rank_at(base) == d0 - r0 - 1;

  AnnihilatorResult ann = annihilator(d, base);
  verdict.engel_rank_one = engel_rank_le_one(ann.system);  // r0 >= 1 supplies rho >= 1

  bool exists = verdict.char_rank_ok && verdict.engel_rank_one;
  if (exists && r0 >= 2) {
    BResult b = corank_one_B_detail(d, base);
    verdict.B = b.b;
    verdict.B_involutive = is_involutive(b.b);
    if (r0 == 2) exists = exists && *verdict.B_involutive;
    if (exists) verdict.L_witness = b.b;
  }
  verdict.exists = exists;
  return verdict;
}

}  // namespace pfl
