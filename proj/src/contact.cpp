#include <pfl/contact.hpp>

#include <algorithm>

namespace pfl {

void validate_word(const ProlongationWord& word) {
  if (word.spec.n < 1 || word.spec.m < 1) throw input_error("word: invalid jet spec");
  if (static_cast<int>(word.letters.size()) != word.spec.n - 1)
    throw input_error("word: expected " + std::to_string(word.spec.n - 1) + " letters, got " +
                      std::to_string(word.letters.size()));
  for (const auto& letter : word.letters) {
    if (static_cast<int>(letter.c.size()) != word.spec.m)
      throw input_error("word: letter parameter vector must have m entries");
    if (letter.kind == ProlongationLetter::Kind::S && letter.c.back() != 0)
      throw input_error("word: singular letter requires c_m = 0");
  }
}

std::vector<VectorField> canonical_contact_frame(const JetSpec& spec) {
  Chart chart = jet_chart(spec);
  const std::size_t n = chart.dim;
  std::vector<VectorField> frame;
  frame.reserve(spec.m + 1);
  for (int j = 1; j <= spec.m; ++j)
    frame.push_back(VectorField::coordinate(chart, jet_index(spec, j, spec.n)));
  std::vector<Polynomial> drift(n, Polynomial(n));
  for (int i = 0; i < spec.n; ++i)
    for (int j = 1; j <= spec.m; ++j)
      drift[jet_index(spec, j, i)] = Polynomial::variable(n, jet_index(spec, j, i + 1));
  drift[0] = Polynomial(n, Rational(1));
  frame.emplace_back(chart, std::move(drift));
  return frame;
}

Distribution canonical_contact_system(const JetSpec& spec) {
  return Distribution(jet_chart(spec), canonical_contact_frame(spec));
}

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

}  // namespace

VectorField lift_vector_field(const VectorField& f, const JetSpec& target) {
  JetSpec source{target.n - 1, target.m};
  if (target.n < 1) throw input_error("lift: target order must be at least 1");
  if (f.chart != jet_chart(source))
    throw input_error("lift: field is not on the jet chart one level down");
  Chart chart = jet_chart(target);
  std::vector<Polynomial> comps(chart.dim, Polynomial(chart.dim));
  for (std::size_t i = 0; i < f.chart.dim; ++i) comps[i] = embed_poly(f.components[i], chart.dim);
  return VectorField(chart, std::move(comps));
}

std::vector<VectorField> prolong(const std::vector<VectorField>& family,
                                 const ProlongationLetter& letter) {
  if (family.empty()) throw input_error("prolong: empty family");
  const Chart& low = family[0].chart;
  if (!low.jet) throw input_error("prolong: family must live on a jet chart");
  const int m = low.jet->m;
  if (static_cast<int>(family.size()) != m + 1)
    throw input_error("prolong: family must have m+1 members");
  for (const auto& f : family)
    if (f.chart != low) throw input_error("prolong: family members on mixed charts");
  if (static_cast<int>(letter.c.size()) != m)
    throw input_error("prolong: parameter vector must have m entries");
  if (letter.kind == ProlongationLetter::Kind::S && letter.c.back() != 0)
    throw precondition_error("prolong: singular letter requires c_m = 0");

  JetSpec target{low.jet->n + 1, m};
  Chart chart = jet_chart(target);
  const std::size_t dim = chart.dim;
  std::vector<VectorField> out;
  out.reserve(m + 1);
  for (int j = 1; j <= m; ++j)
    out.push_back(VectorField::coordinate(chart, jet_index(target, j, target.n)));

  auto lifted = [&](int idx) { return lift_vector_field(family[idx], target); };
  VectorField drift = VectorField::zero(chart);
  if (letter.kind == ProlongationLetter::Kind::R) {
    for (int j = 1; j <= m; ++j) {
      Polynomial coeff = Polynomial::variable(dim, jet_index(target, j, target.n)) +
                         Polynomial(dim, letter.c[j - 1]);
      drift = drift + lifted(j - 1) * coeff;
    }
    drift = drift + lifted(m);
  } else {
    for (int j = 1; j <= m - 1; ++j) {
      Polynomial coeff = Polynomial::variable(dim, jet_index(target, j, target.n)) +
                         Polynomial(dim, letter.c[j - 1]);
      drift = drift + lifted(j - 1) * coeff;
    }
    drift = drift + lifted(m - 1);
    drift = drift + lifted(m) * Polynomial::variable(dim, jet_index(target, m, target.n));
  }
  out.push_back(std::move(drift));
  return out;
}

std::vector<VectorField> generate_kumpera_ruiz_frame(const ProlongationWord& word) {
  validate_word(word);
  std::vector<VectorField> family = canonical_contact_frame(JetSpec{1, word.spec.m});
  for (const auto& letter : word.letters) family = prolong(family, letter);
  return family;
}

Distribution generate_kumpera_ruiz(const ProlongationWord& word) {
  return Distribution(jet_chart(word.spec), generate_kumpera_ruiz_frame(word));
}

KrSignature kr_signature_at_point(const ProlongationWord& word, const RationalPoint& base) {
  validate_word(word);
  Distribution d = generate_kumpera_ruiz(word);
  DistributionFlag flag = lie_flag(d, base, word.spec.n);
  for (int i = 0; i <= word.spec.n; ++i) {
    const FlagLevel& level =
        flag.report.levels[std::min<std::size_t>(i, flag.report.levels.size() - 1)];
    if (level.rank_at_base != (i + 1) * word.spec.m + 1) return KrSignature::singular;
  }
  return KrSignature::regular;
}

// --- classification -----------------------------------------------------------

namespace {

FlagLevel level_or_last(const std::vector<FlagLevel>& levels, int i) {
  return levels[std::min<std::size_t>(i, levels.size() - 1)];
}

}  // namespace

ClassificationVerdict classify_contact(const Distribution& d, const RationalPoint& base) {
  const std::size_t dim = d.chart().dim;
  if (base.size() != dim) throw input_error("classify_contact: base point dimension mismatch");

  ClassificationVerdict v;
  const int rank = d.generic_rank();
  const int m = rank - 1;
  if (m < 1) throw input_error("classify_contact: rank must be at least 2");
  if ((dim - 1) % static_cast<std::size_t>(m) != 0)
    throw input_error("classify_contact: no valid (n, m) factorization of the dimensions");
  const int n = static_cast<int>((dim - 1) / m) - 1;
  if (n < 1) throw input_error("classify_contact: no valid (n, m) factorization (n < 1)");
  v.n = n;
  v.m = m;

  DistributionFlag derived = derived_flag(d, base, n);
  v.derived_levels = derived.report.levels;
  DistributionFlag lie = lie_flag(d, base, n);
  v.lie_levels = lie.report.levels;

  // Condition (i), rank part: D^(i) constant rank (i+1)m+1.
  for (int i = 0; i <= n; ++i) {
    FlagLevel level = level_or_last(v.derived_levels, i);
    int expected = (i + 1) * m + 1;
    if (level.generic_rank != expected || level.rank_at_base != expected) {
      v.status = ClassificationVerdict::Status::rejected;
      v.failure = FailureReason{i, "derived-rank",
                                "derived flag level has rank (" + std::to_string(level.generic_rank) +
                                    ", " + std::to_string(level.rank_at_base) + " at base), expected " +
                                    std::to_string(expected)};
      return v;
    }
  }

  // Condition (i), witness part: corank one involutive L_i in D^(i).
  v.corank_witness.assign(n + 1, false);
  v.witnesses.assign(n + 1, std::nullopt);
  for (int i = 0; i <= n; ++i) {
    bool ok = false;
    if (i <= n - 2) {
      // L_i is the characteristic distribution of D^(i+1) (unique by the
      // canonical-distribution lemma).
      Distribution li = characteristic_distribution(derived.levels[i + 1], base);
      const int expected = (i + 1) * m;
      ok = li.generic_rank() == expected && li.rank_at(base) == expected &&
           span_contains(derived.levels[i], li);
      if (ok && !is_involutive(li))
        throw internal_error("classify_contact: characteristic distribution not involutive");
      if (ok) v.witnesses[i] = li;
    } else if (i == n - 1) {
      CorankOneVerdict cv = decide_corank_one_involutive(derived.levels[i], base);
      ok = cv.exists;
      if (cv.L_witness) v.witnesses[i] = cv.L_witness;
    } else {
      // D^(n) is the full tangent bundle; any coordinate hyperplane field is
      // a corank one involutive witness.
      std::vector<VectorField> gens;
      for (std::size_t c = 0; c + 1 < dim; ++c)
        gens.push_back(VectorField::coordinate(d.chart(), c));
      v.witnesses[i] = Distribution(d.chart(), std::move(gens));
      ok = true;
    }
    v.corank_witness[i] = ok;
    if (!ok) {
      v.status = ClassificationVerdict::Status::rejected;
      v.failure = FailureReason{i, "corank-witness",
                                "no corank one involutive subdistribution at derived level " +
                                    std::to_string(i)};
      return v;
    }
  }

  // Condition (ii): the Lie flag has constant rank (i+1)m+1.
  bool lie_ok = true;
  int lie_fail_level = -1;
  for (int i = 0; i <= n; ++i) {
    FlagLevel level = level_or_last(v.lie_levels, i);
    int expected = (i + 1) * m + 1;
    if (level.generic_rank != expected || level.rank_at_base != expected) {
      lie_ok = false;
      lie_fail_level = i;
      break;
    }
  }

  if (lie_ok) {
    v.status = ClassificationVerdict::Status::canonical_equivalent;
  } else {
    v.status = ClassificationVerdict::Status::extended_kr;
    v.failure = FailureReason{lie_fail_level, "lie-rank",
                              "base point is not regular (first defective Lie level)"};
  }

  // Attach the recovered word when the input happens to be reducible.
  if (d.generators().size() == static_cast<std::size_t>(m + 1)) {
    bool at_origin = std::all_of(base.begin(), base.end(), [](const Rational& r) { return r == 0; });
    if (at_origin) {
      try {
        v.word = kr_reduce(d.generators(), base).word;
      } catch (const precondition_error&) {
        // Not in iterated Weber form; the verdict stands on the rank
        // conditions alone.
      } catch (const input_error&) {
      }
    }
  }
  return v;
}

ClassificationVerdict classify_pfaffian(const PfaffianSystem& system, const RationalPoint& base) {
  const std::size_t dim = system.chart().dim;
  if (base.size() != dim) throw input_error("classify_pfaffian: base point dimension mismatch");
  const int s = system.generic_rank();
  const int m = static_cast<int>(dim) - 1 - s;
  if (m < 1) throw input_error("classify_pfaffian: no valid (n, m) factorization of the ranks");
  if (m == 2)
    throw input_error(
        "classify_pfaffian: m = 2 is outside the corollary's hypotheses; use classify_contact");
  if (s % m != 0) throw input_error("classify_pfaffian: no valid (n, m) factorization of the ranks");
  const int n = s / m;
  if (n < 1) throw input_error("classify_pfaffian: no valid (n, m) factorization (n < 1)");

  ClassificationVerdict v;
  v.n = n;
  v.m = m;

  // Condition 1: derived systems of constant rank (n-i)m.
  PfaffianFlag flag;
  try {
    flag = derived_flag_forms(system, base, n);
  } catch (const precondition_error& e) {
    v.status = ClassificationVerdict::Status::rejected;
    v.failure = FailureReason{-1, "derived-constancy", e.what()};
    return v;
  }
  v.derived_levels = flag.report.levels;
  for (int i = 0; i <= n; ++i) {
    FlagLevel level = level_or_last(v.derived_levels, i);
    int expected = (n - i) * m;
    if (level.generic_rank != expected || level.rank_at_base != expected) {
      v.status = ClassificationVerdict::Status::rejected;
      v.failure = FailureReason{i, "derived-rank",
                                "derived system rank " + std::to_string(level.generic_rank) +
                                    ", expected " + std::to_string(expected)};
      return v;
    }
  }

  // Condition 2: Engel rank one on every nonzero level (the rank drop from
  // condition 1 already forces rho >= 1 there; the zero system at level n is
  // vacuous).
  v.engel_per_level.assign(n, false);
  for (int i = 0; i < n; ++i) {
    v.engel_per_level[i] = engel_rank_le_one(flag.levels[i]);
    if (!v.engel_per_level[i]) {
      v.status = ClassificationVerdict::Status::rejected;
      v.failure = FailureReason{i, "engel-rank", "Engel rank exceeds one at derived level " +
                                                     std::to_string(i)};
      return v;
    }
  }

  // Condition 3: Cartan systems C(I^(i)) of constant rank (n+1-i)m+1,
  // computed as annihilators of the characteristic distributions.
  v.cartan_ranks.assign(n, 0);
  for (int i = 0; i < n; ++i) {
    Distribution di = perp(flag.levels[i], base).distribution;
    Distribution ci = characteristic_distribution(di, base);
    const int expected_char = i * m;
    if (ci.generic_rank() != expected_char || ci.rank_at(base) != expected_char) {
      v.status = ClassificationVerdict::Status::rejected;
      v.failure = FailureReason{i, "cartan-rank",
                                "Cartan system rank " +
                                    std::to_string(static_cast<int>(dim) - ci.generic_rank()) +
                                    ", expected " + std::to_string((n + 1 - i) * m + 1)};
      return v;
    }
    if (ci.generators().empty()) {
      v.cartan_ranks[i] = static_cast<int>(dim);
    } else {
      AnnihilatorResult cartan = annihilator(ci, base);
      v.cartan_ranks[i] = cartan.system.generic_rank();
    }
  }

  // Condition 4: regularity of the base point for I-perp.
  Distribution d = perp(system, base).distribution;
  RegularityVerdict reg = is_regular_point(d, base);
  v.lie_levels = lie_flag(d, base, n).report.levels;
  if (reg.is_regular) {
    v.status = ClassificationVerdict::Status::canonical_equivalent;
  } else {
    v.status = ClassificationVerdict::Status::extended_kr;
    v.failure = FailureReason{reg.first_defective_level.value_or(-1), "regularity",
                              "base point is not regular for the annihilating distribution"};
  }
  return v;
}

// --- Moebius machinery ---------------------------------------------------------

bool mobius_is_diffeo(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  if (n < 2) throw input_error("mobius: matrix must be at least 2x2");
  for (const auto& row : m)
    if (row.size() != n) throw input_error("mobius: matrix must be square");
  if (m[n - 1][n - 1] == 0)
    throw precondition_error("mobius: the corner entry d must be non-zero");
  return rational_determinant(m) != 0;
}

RationalMap mobius_map(const std::vector<std::vector<Rational>>& m) {
  const std::size_t n = m.size();
  if (n < 2) throw input_error("mobius: matrix must be at least 2x2");
  if (m[n - 1][n - 1] == 0)
    throw precondition_error("mobius: the corner entry d must be non-zero");
  const std::size_t k = n - 1;
  Polynomial den(k, m[n - 1][n - 1]);
  for (std::size_t j = 0; j < k; ++j)
    den += Polynomial::variable(k, j) * m[n - 1][j];
  RationalMap phi;
  phi.components.reserve(k);
  for (std::size_t i = 0; i < k; ++i) {
    Polynomial num(k, m[i][n - 1]);
    for (std::size_t j = 0; j < k; ++j) num += Polynomial::variable(k, j) * m[i][j];
    phi.components.emplace_back(num, den);
  }
  return phi;
}

std::vector<std::vector<Rational>> MuMatrix::evaluate(const RationalPoint& at) const {
  std::vector<std::vector<Rational>> out(entries.size());
  for (std::size_t i = 0; i < entries.size(); ++i)
    for (const auto& e : entries[i]) out[i].push_back(e.evaluate(at));
  return out;
}

bool MuMatrix::invertible_at(const RationalPoint& at) const {
  return rational_determinant(evaluate(at)) != 0;
}

}  // namespace pfl
