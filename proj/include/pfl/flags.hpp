// pfl: derived and Lie flags of distributions, derived flags of Pfaffian
// systems, and regular-point testing.
//
// Flags store generating families, never reduced bases; every rank is a rank
// of the generator matrix, generic (over Q(x)) and at the base point.  A new
// bracket is kept only if it raises one of those two ranks.

#pragma once

#include <pfl/exterior.hpp>

#include <optional>

namespace pfl {

struct FlagLevel {
  int generator_count = 0;
  int generic_rank = 0;
  int rank_at_base = 0;
  bool operator==(const FlagLevel& o) const = default;
};

struct FlagReport {
  enum class Kind { derived, lie };
  Kind kind = Kind::derived;
  std::vector<FlagLevel> levels;
  RationalPoint base_point;
  bool stabilized = false;
};

struct DistributionFlag {
  FlagReport report;
  std::vector<Distribution> levels;
};

struct PfaffianFlag {
  FlagReport report;
  std::vector<PfaffianSystem> levels;
};

// D^(i+1) = D^(i) + [D^(i), D^(i)].  max_level < 0 means the chart dimension.
DistributionFlag derived_flag(const Distribution& d, const RationalPoint& base, int max_level = -1);

// D_(i+1) = D_i + [D_0, D_i].
DistributionFlag lie_flag(const Distribution& d, const RationalPoint& base, int max_level = -1);

// I^(i+1) = { alpha in I^(i) : d alpha = 0 mod I^(i) }, decided by exact
// linear algebra on the coefficients of d alpha restricted to (I^(i))^perp.
// Throws precondition_error naming the offending level if some level fails
// to have locally constant rank at `base`.
PfaffianFlag derived_flag_forms(const PfaffianSystem& system, const RationalPoint& base,
                                int max_level = -1);

struct RegularityVerdict {
  bool is_regular = false;
  std::optional<int> first_defective_level;
};

// Regular iff every Lie-flag level up to stabilization has its generic rank
// attained at `base`.
RegularityVerdict is_regular_point(const Distribution& d, const RationalPoint& base);

}  // namespace pfl
