#include <pfl/flags.hpp>
#include <pfl/parallel.hpp>

namespace pfl {

namespace {

struct GrowingFamily {
  PolyMatrix matrix;
  std::vector<VectorField> fields;
  int generic = 0;
  int at_base = 0;

  void try_append(const VectorField& g, const RationalPoint& base) {
    if (g.is_zero()) return;
    PolyMatrix candidate = matrix;
    candidate.append_row(g.components);
    int new_generic = pfl::generic_rank(candidate);
    int new_base = rank_at_point(candidate, base);
    if (new_generic == generic && new_base == at_base) return;
    matrix = std::move(candidate);
    fields.push_back(g);
    generic = new_generic;
    at_base = new_base;
  }
};

GrowingFamily family_of(const Distribution& d, const RationalPoint& base) {
  GrowingFamily fam;
  fam.matrix = d.generator_matrix();
  fam.fields = d.generators();
  fam.generic = d.generic_rank();
  fam.at_base = rank_at_point(fam.matrix, base);
  return fam;
}

FlagLevel level_of(const GrowingFamily& fam) {
  return FlagLevel{static_cast<int>(fam.fields.size()), fam.generic, fam.at_base};
}

DistributionFlag bracket_flag(const Distribution& d, const RationalPoint& base, int max_level,
                              FlagReport::Kind kind) {
  if (base.size() != d.chart().dim) throw input_error("flag: base point dimension mismatch");
  if (max_level < 0) max_level = static_cast<int>(d.chart().dim);

  DistributionFlag out;
  out.report.kind = kind;
  out.report.base_point = base;

  GrowingFamily fam = family_of(d, base);
  const std::size_t level0_count = fam.fields.size();
  out.report.levels.push_back(level_of(fam));
  out.levels.push_back(d);

  std::size_t first_new = 0;  // brackets with generators before this index are already absorbed
  for (int level = 1; level <= max_level; ++level) {
    FlagLevel prev = out.report.levels.back();
    std::size_t count_before = fam.fields.size();
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    if (kind == FlagReport::Kind::derived) {
      // Pairs (i, j) with i < j whose larger index is new since the last
      // level; older pairs are already absorbed in the family.
      for (std::size_t j = std::max<std::size_t>(first_new, 1); j < count_before; ++j)
        for (std::size_t i = 0; i < j; ++i) pairs.emplace_back(i, j);
    } else {
      for (std::size_t j = first_new; j < count_before; ++j)
        for (std::size_t i = 0; i < level0_count; ++i) {
          if (j < level0_count && i >= j) continue;  // antisymmetric duplicates
          pairs.emplace_back(i, j);
        }
    }
    std::vector<VectorField> brackets = parallel_map(
        pairs, [&](const std::pair<std::size_t, std::size_t>& p) {
          return lie_bracket(fam.fields[p.first], fam.fields[p.second]);
        });
    for (const auto& g : brackets) fam.try_append(g, base);
    first_new = count_before;
    out.report.levels.push_back(level_of(fam));
    out.levels.emplace_back(d.chart(), fam.fields);
    FlagLevel now = out.report.levels.back();
    if (now.generic_rank == prev.generic_rank && now.rank_at_base == prev.rank_at_base) {
      out.report.stabilized = true;
      break;
    }
  }
  return out;
}

}  // namespace

DistributionFlag derived_flag(const Distribution& d, const RationalPoint& base, int max_level) {
  return bracket_flag(d, base, max_level, FlagReport::Kind::derived);
}

DistributionFlag lie_flag(const Distribution& d, const RationalPoint& base, int max_level) {
  return bracket_flag(d, base, max_level, FlagReport::Kind::lie);
}

PfaffianFlag derived_flag_forms(const PfaffianSystem& system, const RationalPoint& base,
                                int max_level) {
  if (base.size() != system.chart().dim)
    throw input_error("derived_flag_forms: base point dimension mismatch");
  if (max_level < 0) max_level = static_cast<int>(system.chart().dim);
  const std::size_t n = system.chart().dim;

  PfaffianFlag out;
  out.report.kind = FlagReport::Kind::derived;
  out.report.base_point = base;
  out.levels.push_back(system);

  for (int level = 0; level <= max_level; ++level) {
    const PfaffianSystem& current = out.levels.back();
    int generic = current.generic_rank();
    int at_base = current.rank_at(base);
    out.report.levels.push_back(
        FlagLevel{static_cast<int>(current.generators().size()), generic, at_base});
    if (generic != at_base)
      throw precondition_error("derived_flag_forms: rank not locally constant at level " +
                               std::to_string(level));
    if (level == max_level) break;
    if (generic == 0) {
      out.report.stabilized = true;
      break;
    }

    // Annihilating fields of the current level (denominators cleared).
    KernelBasis perp_basis = polynomial_kernel(current.generator_matrix(), &base);
    std::vector<VectorField> fields;
    fields.reserve(perp_basis.vectors.size());
    for (auto& v : perp_basis.vectors) fields.emplace_back(system.chart(), std::move(v));

    const std::size_t s = current.generators().size();
    std::vector<TwoForm> d_omega;
    d_omega.reserve(s);
    for (const auto& w : current.generators()) d_omega.push_back(exterior_derivative(w));

    // alpha = sum a_i omega_i lies in the next level iff
    // sum_i a_i d omega_i (f_a, f_b) = 0 for all pairs of annihilating fields.
    PolyMatrix conditions(0, s, n);
    for (std::size_t a = 0; a + 1 < fields.size(); ++a)
      for (std::size_t b = a + 1; b < fields.size(); ++b) {
        std::vector<Polynomial> row;
        row.reserve(s);
        for (std::size_t i = 0; i < s; ++i) row.push_back(d_omega[i](fields[a], fields[b]));
        conditions.append_row(row);
      }
    std::vector<OneForm> next;
    if (conditions.rows() == 0) {
      // Fewer than two annihilating directions: every combination survives.
      next = current.generators();
    } else {
      KernelBasis combos = polynomial_kernel(conditions, &base);
      for (const auto& coeff : combos.vectors) {
        std::vector<Polynomial> comps(n, Polynomial(n));
        for (std::size_t i = 0; i < s; ++i)
          for (std::size_t c = 0; c < n; ++c)
            comps[c] += coeff[i] * current.generators()[i].components[c];
        OneForm alpha(system.chart(), std::move(comps));
        if (!alpha.is_zero()) next.push_back(std::move(alpha));
      }
    }
    PfaffianSystem next_system(system.chart(), std::move(next));
    bool stabilized = next_system.generic_rank() == generic && next_system.rank_at(base) == at_base;
    out.levels.push_back(std::move(next_system));
    if (stabilized) {
      const PfaffianSystem& last = out.levels.back();
      out.report.levels.push_back(FlagLevel{static_cast<int>(last.generators().size()),
                                            last.generic_rank(), last.rank_at(base)});
      out.report.stabilized = true;
      break;
    }
  }
  return out;
}

RegularityVerdict is_regular_point(const Distribution& d, const RationalPoint& base) {
  DistributionFlag flag = lie_flag(d, base);
  RegularityVerdict verdict;
  verdict.is_regular = true;
  for (std::size_t i = 0; i < flag.report.levels.size(); ++i) {
    if (flag.report.levels[i].generic_rank != flag.report.levels[i].rank_at_base) {
      verdict.is_regular = false;
      verdict.first_defective_level = static_cast<int>(i);
      break;
    }
  }
  return verdict;
}

}  // namespace pfl
