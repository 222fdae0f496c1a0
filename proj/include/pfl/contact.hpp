// pfl: canonical contact systems for curves, prolongations, extended
// Kumpera-Ruiz normal forms, the two classification theorems, and the
// reduction recursion that recovers a prolongation word from an iterated
// Weber-form family.

#pragma once

#include <pfl/bryant.hpp>
#include <pfl/ratfun.hpp>

namespace pfl {

// --- prolongation words ----------------------------------------------------

struct ProlongationLetter {
  enum class Kind { R, S };
  Kind kind = Kind::R;
  std::vector<Rational> c;  // m parameters; for S the last one must be zero

  static ProlongationLetter regular(std::vector<Rational> c) {
    return ProlongationLetter{Kind::R, std::move(c)};
  }
  static ProlongationLetter singular(std::vector<Rational> c) {
    return ProlongationLetter{Kind::S, std::move(c)};
  }
  bool operator==(const ProlongationLetter& o) const { return kind == o.kind && c == o.c; }
};

struct ProlongationWord {
  JetSpec spec;
  std::vector<ProlongationLetter> letters;  // sigma_2 .. sigma_n
  bool operator==(const ProlongationWord& o) const {
    return spec == o.spec && letters == o.letters;
  }
};

void validate_word(const ProlongationWord& word);

// --- canonical systems and prolongations ------------------------------------

// (d/dx_1^n, ..., d/dx_m^n, sum_{i<n} sum_j x_j^{i+1} d/dx_j^i + d/dx_0^0).
Distribution canonical_contact_system(const JetSpec& spec);
std::vector<VectorField> canonical_contact_frame(const JetSpec& spec);

// Zero components on the m new top-level coordinates.
VectorField lift_vector_field(const VectorField& f, const JetSpec& target);

// One prolongation step: family (kappa_1..kappa_m, kappa_0) on J^{k-1} to the
// corresponding family on J^k.  Throws on an S letter with c_m != 0.
std::vector<VectorField> prolong(const std::vector<VectorField>& family,
                                 const ProlongationLetter& letter);

Distribution generate_kumpera_ruiz(const ProlongationWord& word);
std::vector<VectorField> generate_kumpera_ruiz_frame(const ProlongationWord& word);

enum class KrSignature { regular, singular };
// Computed from the Lie flag ranks at the point, never inferred from letters.
KrSignature kr_signature_at_point(const ProlongationWord& word, const RationalPoint& base);

// --- classification ----------------------------------------------------------

struct FailureReason {
  int level = -1;
  std::string condition;
  std::string detail;
};

struct ClassificationVerdict {
  enum class Status { canonical_equivalent, extended_kr, rejected };
  Status status = Status::rejected;
  int n = 0, m = 0;
  std::vector<FlagLevel> derived_levels;  // distribution path: D^(i); pfaffian path: I^(i)
  std::vector<FlagLevel> lie_levels;
  std::vector<bool> corank_witness;      // one entry per level 0..n (distribution path)
  std::vector<int> cartan_ranks;         // pfaffian path only
  std::vector<bool> engel_per_level;     // pfaffian path only
  std::optional<FailureReason> failure;
  std::optional<ProlongationWord> word;
  std::vector<std::optional<Distribution>> witnesses;

  bool accepted() const { return status != Status::rejected; }
};

// Theorem "contact systems for curves" + theorem "extended Kumpera-Ruiz
// normal forms": canonical_equivalent when both the derived-flag conditions
// with corank one involutive witnesses and the Lie-flag regularity hold;
// extended_kr when only the former; rejected otherwise.
ClassificationVerdict classify_contact(const Distribution& d, const RationalPoint& base);

// Pfaffian-side corollary (m != 2): derived system ranks (n-i)m, Engel rank
// one per level, Cartan system ranks (n+1-i)m+1, and regularity of the base
// point.  m = 2 input is an input_error directing to classify_contact.
ClassificationVerdict classify_pfaffian(const PfaffianSystem& system, const RationalPoint& base);

// --- Moebius machinery --------------------------------------------------------

// M = [[A, b], [c, d]] with d != 0 (precondition).  True iff det M != 0.
bool mobius_is_diffeo(const std::vector<std::vector<Rational>>& m);
// The linear fractional map x -> (Ax + b) / (cx + d) on R^{n-1}.
RationalMap mobius_map(const std::vector<std::vector<Rational>>& m);

// --- Kumpera-Ruiz reduction ---------------------------------------------------

struct MuMatrix {
  // (m+1) x (m+1), drift-first indexing: row/column 0 belong to the drift field
  // kappa_0, rows/columns 1..m to kappa_1..kappa_m.  Entries are rational
  // functions of the source coordinates of the level's chart.
  std::vector<std::vector<RationalFunction>> entries;
  RationalPoint base_point;

  std::vector<std::vector<Rational>> evaluate(const RationalPoint& at) const;
  bool invertible_at(const RationalPoint& at) const;
};

struct KrLevelTrace {
  int level = 0;  // 0 = frame step on J^0, 1 = Weber base step, >= 2 = letters
  bool singular = false;
  std::vector<Rational> constants;      // recovered c^level (empty for level <= 1)
  std::vector<int> column_permutation;  // 1-based images of 1..m; empty when identity
  MuMatrix mu;
};

struct KrReduction {
  ProlongationWord word;
  std::vector<KrLevelTrace> levels;       // levels 0..n in order
  RationalMap phi;                        // normalizing map, phi(0) = 0
  std::vector<VectorField> normal_form;   // kappa^n = word's frame, relation target
};

// Input: m+1 fields on J^n in (possibly constant-remixed) iterated Weber
// form, coordinates centered at the base point, which must be the origin.
// Recovers the prolongation word, the mu-matrix chain, and the normalizing
// rational map; every frame relation phi_*(zeta_i) = sum_j (mu_ij o psi)
// kappa_j is verified exactly (cross-multiplied) before returning.
KrReduction kr_reduce(const std::vector<VectorField>& family, const RationalPoint& base);

}  // namespace pfl
