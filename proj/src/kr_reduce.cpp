// Reduction of an iterated Weber-form family to its prolongation word, with
// the mu-matrix chain and the normalizing rational map.  Follows the
// regular/singular recursion of the extended Kumpera-Ruiz construction; every
// produced frame relation is re-verified exactly before returning.

#include <pfl/contact.hpp>

#include <algorithm>

namespace pfl {

namespace {

Polynomial embed_poly(const Polynomial& p, std::size_t new_dim) {
  Polynomial out(new_dim);
  for (const auto& [mono, c] : p.terms()) {
    Monomial m(new_dim);
    std::copy(mono.exponents.begin(), mono.exponents.end(), m.exponents.begin());
    out.add_term(m, c);
  }
  return out;
}

// Drop trailing variables; requires the polynomial not to use them.
Polynomial restrict_poly(const Polynomial& p, std::size_t low_dim, int generator_index) {
  Polynomial out(low_dim);
  for (const auto& [mono, c] : p.terms()) {
    for (std::size_t v = low_dim; v < mono.exponents.size(); ++v)
      if (mono.exponents[v] != 0)
        throw precondition_error(
            "kr_reduce: generator " + std::to_string(generator_index) +
            " has drift coefficients depending on top-level variables (not a lift)");
    Monomial m(low_dim);
    std::copy(mono.exponents.begin(), mono.exponents.begin() + low_dim, m.exponents.begin());
    out.add_term(m, c);
  }
  return out;
}

RationalFunction lift_ratfun(const RationalFunction& f, std::size_t new_dim) {
  return RationalFunction(embed_poly(f.num(), new_dim), embed_poly(f.den(), new_dim));
}

struct ReduceNode {
  RationalMap phi;                                // on the level's chart
  std::vector<std::vector<RationalFunction>> mu;  // drift-first indexing, row/col 0 = drift
  std::vector<VectorField> kappa;                 // (kappa_1..kappa_m, kappa_0)
  std::vector<ProlongationLetter> letters;        // sigma_2..sigma_level
  std::vector<KrLevelTrace> trace;                // levels 0..level
};

void verify_relations(const std::vector<VectorField>& family, const RationalMap& phi,
                      const std::vector<std::vector<RationalFunction>>& mu,
                      const std::vector<VectorField>& kappa, int m, int level) {
  const std::size_t dim = family[0].chart.dim;
  // kappa components composed with phi, cached per (j, position).
  std::vector<std::vector<RationalFunction>> kappa_of_phi(m + 1);
  for (int j = 0; j <= m; ++j) {
    const VectorField& k = j == 0 ? kappa.back() : kappa[static_cast<std::size_t>(j) - 1];
    kappa_of_phi[j].reserve(dim);
    for (std::size_t pos = 0; pos < dim; ++pos)
      kappa_of_phi[j].push_back(RationalFunction(k.components[pos]).compose(phi.components));
  }
  for (int r = 0; r <= m; ++r) {
    const VectorField& f = r == 0 ? family.back() : family[static_cast<std::size_t>(r) - 1];
    std::vector<RationalFunction> lhs = pushforward_rows(phi, f);
    for (std::size_t pos = 0; pos < dim; ++pos) {
      RationalFunction rhs = RationalFunction::constant(dim, Rational(0));
      for (int j = 0; j <= m; ++j) {
        if (mu[r][j].is_zero() || kappa_of_phi[j][pos].is_zero()) continue;
        rhs = rhs + mu[r][j] * kappa_of_phi[j][pos];
      }
      if (!lhs[pos].equals(rhs))
        throw internal_error("kr_reduce: frame relation fails at level " + std::to_string(level) +
                             ", row " + std::to_string(r) + ", component " + std::to_string(pos));
    }
  }
}

void check_mu_invertible_at_origin(const std::vector<std::vector<RationalFunction>>& mu,
                                   std::size_t dim, int level) {
  RationalPoint origin(dim, Rational(0));
  std::vector<std::vector<Rational>> at0(mu.size());
  for (std::size_t r = 0; r < mu.size(); ++r)
    for (const auto& e : mu[r]) at0[r].push_back(e.evaluate(origin));
  if (rational_determinant(at0) == 0)
    throw precondition_error("kr_reduce: mu matrix singular at the base point at level " +
                             std::to_string(level) + " (input outside the theory)");
}

ReduceNode reduce_level(const std::vector<VectorField>& family, int m, int level);

// Permutes the already-reduced lower data so that column perm_from moves to
// column m (the singular slot).  Only an all-R word below can absorb the
// relabeling.
void apply_column_permutation(ReduceNode& child, const std::vector<VectorField>& child_family,
                              int m, int level_below, int from) {
  for (const auto& letter : child.letters)
    if (letter.kind == ProlongationLetter::Kind::S)
      throw precondition_error(
          "kr_reduce: singular-slot permutation would relabel a singular letter below; "
          "input outside the implemented normal-form class");
  const std::size_t dim = child_family[0].chart.dim;
  JetSpec spec{level_below, m};

  // Coordinate relabeling x_from^l <-> x_m^l at every level l.
  std::vector<std::size_t> position(dim);
  for (std::size_t p = 0; p < dim; ++p) position[p] = p;
  for (int l = 0; l <= level_below; ++l)
    std::swap(position[jet_index(spec, from, l)], position[jet_index(spec, m, l)]);
  RationalMap perm;
  perm.components.reserve(dim);
  for (std::size_t p = 0; p < dim; ++p)
    perm.components.emplace_back(Polynomial::variable(dim, position[p]));

  child.phi = perm.after(child.phi);
  for (auto& letter : child.letters) std::swap(letter.c[from - 1], letter.c[m - 1]);
  if (level_below == 0) {
    // Coordinate frame: invariant under the relabeling.
  } else {
    std::vector<VectorField> frame = canonical_contact_frame(JetSpec{1, m});
    for (const auto& letter : child.letters) frame = prolong(frame, letter);
    child.kappa = std::move(frame);
  }
  for (auto& row : child.mu) std::swap(row[from], row[m]);
  verify_relations(child_family, child.phi, child.mu, child.kappa, m, level_below);
}

ReduceNode reduce_level(const std::vector<VectorField>& family, int m, int level) {
  const Chart chart = jet_chart(JetSpec{level, m});
  const std::size_t dim = chart.dim;
  for (std::size_t i = 0; i < family.size(); ++i)
    if (family[i].chart != chart)
      throw internal_error("kr_reduce: generator " + std::to_string(i) + " on unexpected chart");
  const RationalPoint origin(dim, Rational(0));

  if (level == 0) {
    ReduceNode node;
    node.phi = RationalMap::identity(dim);
    node.mu.assign(m + 1, std::vector<RationalFunction>(m + 1));
    for (int r = 0; r <= m; ++r) {
      const VectorField& f = r == 0 ? family.back() : family[static_cast<std::size_t>(r) - 1];
      for (int j = 0; j <= m; ++j)
        node.mu[r][j] = RationalFunction(f.components[static_cast<std::size_t>(j)]);
    }
    check_mu_invertible_at_origin(node.mu, dim, 0);
    node.kappa.clear();
    for (int j = 1; j <= m; ++j)
      node.kappa.push_back(VectorField::coordinate(chart, static_cast<std::size_t>(j)));
    node.kappa.push_back(VectorField::coordinate(chart, 0));
    node.trace.push_back(KrLevelTrace{0, false, {}, {}, MuMatrix{node.mu, origin}});
    return node;
  }

  const std::size_t low_dim = static_cast<std::size_t>(level) * m + 1;

  // Structural decomposition: constant top blocks and collinear lower parts.
  std::vector<std::vector<Rational>> a(m + 1, std::vector<Rational>(m + 1, Rational(0)));
  std::vector<std::vector<Polynomial>> lower(m + 1);
  for (int r = 0; r <= m; ++r) {
    const int input_index = r == 0 ? m : r - 1;
    const VectorField& f = family[static_cast<std::size_t>(input_index)];
    for (int t = 1; t <= m; ++t) {
      const Polynomial& comp = f.components[low_dim + static_cast<std::size_t>(t) - 1];
      if (!comp.is_constant())
        throw precondition_error("kr_reduce: generator " + std::to_string(input_index) +
                                 " has a non-constant top-level component (not in Weber form)");
      a[r][t] = comp.constant_term();
    }
    lower[r].assign(f.components.begin(), f.components.begin() + static_cast<long>(low_dim));
  }
  // The drift line: lower parts must be constant multiples of one field.
  int pivot = -1;
  for (int r = 0; r <= m && pivot < 0; ++r)
    for (const auto& p : lower[r])
      if (!p.is_zero()) {
        pivot = r;
        break;
      }
  if (pivot < 0)
    throw precondition_error("kr_reduce: no generator carries a drift component at level " +
                             std::to_string(level));
  const std::vector<Polynomial>& w = lower[pivot];
  std::size_t w_lead = 0;
  while (w[w_lead].is_zero()) ++w_lead;
  const Rational w_lead_coeff = w[w_lead].leading_term().second;
  for (int r = 0; r <= m; ++r) {
    if (r == pivot) {
      a[r][0] = Rational(1);
      continue;
    }
    bool zero = std::all_of(lower[r].begin(), lower[r].end(),
                            [](const Polynomial& p) { return p.is_zero(); });
    if (zero) continue;
    Rational lambda = Rational(0);
    if (!lower[r][w_lead].is_zero() &&
        lower[r][w_lead].leading_term().first == w[w_lead].leading_term().first)
      lambda = lower[r][w_lead].leading_term().second / w_lead_coeff;
    bool match = lambda != 0;
    for (std::size_t pos = 0; pos < low_dim && match; ++pos)
      match = (lower[r][pos] - w[pos] * lambda).is_zero();
    if (!match)
      throw precondition_error("kr_reduce: generator " + std::to_string(r == 0 ? m : r - 1) +
                               " has a drift part not proportional to the common drift");
    a[r][0] = lambda;
  }
  if (rational_determinant(a) == 0)
    throw precondition_error("kr_reduce: generators degenerate (constant mixing matrix singular)");

  // The drift must be affine in the top-level variables.
  for (std::size_t pos = 0; pos < low_dim; ++pos)
    for (const auto& [mono, c] : w[pos].terms()) {
      uint32_t top_deg = 0;
      for (std::size_t t = low_dim; t < dim; ++t) top_deg += mono.exponents[t];
      if (top_deg > 1)
        throw precondition_error(
            "kr_reduce: generator " + std::to_string(pivot == 0 ? m : pivot - 1) +
            " has a drift not affine in the top-level variables (not in Weber form)");
    }

  // Extract the lifted family one level down.
  const Chart low_chart = jet_chart(JetSpec{level - 1, m});
  std::vector<VectorField> child_family;
  child_family.reserve(m + 1);
  const int pivot_input = pivot == 0 ? m : pivot - 1;
  for (int j = 1; j <= m; ++j) {
    std::vector<Polynomial> comps;
    comps.reserve(low_dim);
    for (std::size_t pos = 0; pos < low_dim; ++pos)
      comps.push_back(
          restrict_poly(w[pos].derivative(low_dim + static_cast<std::size_t>(j) - 1), low_dim,
                        pivot_input));
    child_family.emplace_back(low_chart, std::move(comps));
  }
  {
    std::vector<Polynomial> comps;
    comps.reserve(low_dim);
    for (std::size_t pos = 0; pos < low_dim; ++pos) {
      Polynomial p = w[pos];
      for (std::size_t t = low_dim; t < dim; ++t) p = p.substitute(t, Rational(0));
      comps.push_back(restrict_poly(p, low_dim, pivot_input));
    }
    child_family.emplace_back(low_chart, std::move(comps));
  }

  ReduceNode child = reduce_level(child_family, m, level - 1);
  const RationalPoint low_origin(low_dim, Rational(0));

  std::vector<Rational> mu_row0_at0(m + 1);
  for (int j = 0; j <= m; ++j) mu_row0_at0[j] = child.mu[0][static_cast<std::size_t>(j)].evaluate(low_origin);

  bool singular = mu_row0_at0[0] == 0;
  std::vector<int> permutation;
  std::vector<Rational> constants(m, Rational(0));

  if (!singular) {
    for (int j = 1; j <= m; ++j) constants[j - 1] = mu_row0_at0[j] / mu_row0_at0[0];
    if (level == 1 &&
        std::any_of(constants.begin(), constants.end(), [](const Rational& c) { return c != 0; })) {
      // Absorb the level-1 constants with the linear change
      // x_j^0 -> x_j^0 - c_j x_0^0, which fixes the canonical frame shape.
      RationalMap absorb;
      absorb.components.reserve(low_dim);
      absorb.components.emplace_back(Polynomial::variable(low_dim, 0));
      for (int j = 1; j <= m; ++j)
        absorb.components.emplace_back(Polynomial::variable(low_dim, static_cast<std::size_t>(j)) -
                                       Polynomial::variable(low_dim, 0) * constants[j - 1]);
      child.phi = absorb.after(child.phi);
      for (int r = 0; r <= m; ++r) {
        const VectorField& g = r == 0 ? child_family.back()
                                      : child_family[static_cast<std::size_t>(r) - 1];
        child.mu[r][0] = RationalFunction(g.components[0]);
        for (int j = 1; j <= m; ++j)
          child.mu[r][static_cast<std::size_t>(j)] =
              RationalFunction(g.components[static_cast<std::size_t>(j)] -
                               g.components[0] * constants[j - 1]);
      }
      check_mu_invertible_at_origin(child.mu, low_dim, 0);
      verify_relations(child_family, child.phi, child.mu, child.kappa, m, 0);
      child.trace[0].mu = MuMatrix{child.mu, low_origin};
      for (int j = 0; j <= m; ++j)
        mu_row0_at0[j] = child.mu[0][static_cast<std::size_t>(j)].evaluate(low_origin);
      for (int j = 1; j <= m; ++j) constants[j - 1] = mu_row0_at0[j] / mu_row0_at0[0];
      if (std::any_of(constants.begin(), constants.end(),
                      [](const Rational& c) { return c != 0; }))
        throw internal_error("kr_reduce: level-1 constant absorption failed");
    }
  } else {
    if (level == 1)
      throw precondition_error(
          "kr_reduce: singular branch at level 1; the family is not equivalent to an extended "
          "Kumpera-Ruiz form through this recursion");
    if (mu_row0_at0[m] == 0) {
      int from = 0;
      for (int i = m - 1; i >= 1; --i)
        if (mu_row0_at0[i] != 0) {
          from = i;
          break;
        }
      if (from == 0)
        throw internal_error("kr_reduce: mu row zero at base despite invertibility");
      apply_column_permutation(child, child_family, m, level - 1, from);
      permutation.resize(m);
      for (int i = 1; i <= m; ++i) permutation[i - 1] = i;
      permutation[from - 1] = m;
      permutation[m - 1] = from;
      for (int j = 0; j <= m; ++j)
        mu_row0_at0[j] = child.mu[0][static_cast<std::size_t>(j)].evaluate(low_origin);
    }
    for (int j = 1; j <= m - 1; ++j) constants[j - 1] = mu_row0_at0[j] / mu_row0_at0[m];
    constants[m - 1] = Rational(0);
  }

  // Linear numerators N_j(y) = sum_i mu[i][j] y_i + mu[0][j] and the branch
  // denominator.
  auto linear_form = [&](int col) {
    RationalFunction acc = lift_ratfun(child.mu[0][static_cast<std::size_t>(col)], dim);
    for (int i = 1; i <= m; ++i) {
      RationalFunction coeff = lift_ratfun(child.mu[static_cast<std::size_t>(i)][static_cast<std::size_t>(col)], dim);
      RationalFunction y_i(Polynomial::variable(dim, low_dim + static_cast<std::size_t>(i) - 1));
      acc = acc + coeff * y_i;
    }
    return acc;
  };
  RationalFunction den = linear_form(singular ? m : 0);

  std::vector<RationalFunction> phi_top(m);
  if (!singular) {
    for (int j = 1; j <= m; ++j)
      phi_top[j - 1] =
          linear_form(j) / den - RationalFunction::constant(dim, constants[j - 1]);
  } else {
    for (int j = 1; j <= m - 1; ++j)
      phi_top[j - 1] =
          linear_form(j) / den - RationalFunction::constant(dim, constants[j - 1]);
    phi_top[m - 1] = linear_form(0) / den;
  }

  ReduceNode node;
  node.letters = child.letters;
  node.trace = child.trace;
  ProlongationLetter letter;
  letter.kind = singular ? ProlongationLetter::Kind::S : ProlongationLetter::Kind::R;
  letter.c = constants;
  if (level >= 2) node.letters.push_back(letter);
  node.kappa = prolong(child.kappa, letter);

  node.phi.components.reserve(dim);
  for (std::size_t pos = 0; pos < low_dim; ++pos)
    node.phi.components.push_back(lift_ratfun(child.phi.components[pos], dim));
  for (int j = 1; j <= m; ++j) node.phi.components.push_back(phi_top[j - 1]);

  // Strict-Weber mu, then the constant remix in front.
  const VectorField drift_strict = [&]() {
    std::vector<Polynomial> comps(dim, Polynomial(dim));
    for (std::size_t pos = 0; pos < low_dim; ++pos) comps[pos] = w[pos];
    return VectorField(chart, std::move(comps));
  }();
  std::vector<std::vector<RationalFunction>> mu_strict(
      m + 1, std::vector<RationalFunction>(m + 1, RationalFunction::constant(dim, Rational(0))));
  mu_strict[0][0] = den;
  for (int j = 1; j <= m; ++j)
    mu_strict[0][static_cast<std::size_t>(j)] = lie_derivative(drift_strict, phi_top[j - 1]);
  for (int i = 1; i <= m; ++i)
    for (int j = 1; j <= m; ++j)
      mu_strict[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
          phi_top[j - 1].derivative(low_dim + static_cast<std::size_t>(i) - 1);

  node.mu.assign(m + 1, std::vector<RationalFunction>(m + 1, RationalFunction::constant(dim, Rational(0))));
  for (int r = 0; r <= m; ++r)
    for (int j = 0; j <= m; ++j) {
      RationalFunction acc = RationalFunction::constant(dim, Rational(0));
      for (int t = 0; t <= m; ++t) {
        if (a[r][t] == 0) continue;
        acc = acc + RationalFunction::constant(dim, a[r][t]) *
                        mu_strict[static_cast<std::size_t>(t)][static_cast<std::size_t>(j)];
      }
      node.mu[r][static_cast<std::size_t>(j)] = acc;
    }

  for (const auto& comp : node.phi.components)
    if (comp.evaluate(origin) != 0)
      throw internal_error("kr_reduce: normalizing map does not preserve the origin at level " +
                           std::to_string(level));
  check_mu_invertible_at_origin(node.mu, dim, level);
  verify_relations(family, node.phi, node.mu, node.kappa, m, level);

  node.trace.push_back(KrLevelTrace{level, singular, constants, permutation,
                                    MuMatrix{node.mu, origin}});
  return node;
}

}  // namespace

KrReduction kr_reduce(const std::vector<VectorField>& family, const RationalPoint& base) {
  if (family.size() < 2) throw input_error("kr_reduce: family must have at least two members");
  const int m = static_cast<int>(family.size()) - 1;
  const Chart& given = family[0].chart;
  for (const auto& f : family)
    if (f.chart != given) throw input_error("kr_reduce: generators on mixed charts");
  if (base.size() != given.dim) throw input_error("kr_reduce: base point dimension mismatch");
  for (const auto& coord : base)
    if (coord != 0)
      throw precondition_error(
          "kr_reduce: coordinates must be centered at the base point (pass the origin)");

  if ((given.dim - 1) % static_cast<std::size_t>(m) != 0)
    throw input_error("kr_reduce: chart dimension incompatible with m+1 generators");
  const int n = static_cast<int>((given.dim - 1) / m) - 1;
  if (n < 1) throw input_error("kr_reduce: chart dimension incompatible with m+1 generators");

  // Accept any chart of the right dimension; coordinates are read in jet
  // order.
  const Chart chart = jet_chart(JetSpec{n, m});
  std::vector<VectorField> fields;
  fields.reserve(family.size());
  for (const auto& f : family) fields.emplace_back(chart, f.components);

  ReduceNode node = reduce_level(fields, m, n);

  KrReduction out;
  out.word.spec = JetSpec{n, m};
  out.word.letters = node.letters;
  validate_word(out.word);
  out.levels = std::move(node.trace);
  out.phi = std::move(node.phi);
  out.normal_form = std::move(node.kappa);
  return out;
}

}  // namespace pfl
