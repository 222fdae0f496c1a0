// pfl: Engel-rank tests, characteristic distributions, structure functions,
// and the decision procedure for corank one involutive subdistributions.

#pragma once

#include <pfl/flags.hpp>

namespace pfl {

// --- span utilities ------------------------------------------------------

// Q(x)-span inclusion / equality of generating families on one chart.
bool span_contains(const Distribution& outer, const Distribution& inner);
bool span_equal(const Distribution& a, const Distribution& b);
// All pairwise brackets of the generators stay in the span.
bool is_involutive(const Distribution& d);

// --- characteristic distributions ---------------------------------------

struct CharacteristicResult {
  Distribution distribution;
  // Open locus (nonvanishing set) on which the returned family is a valid
  // generating family of the characteristic distribution.
  Polynomial valid_locus;
};

// cond-C route: C = intersection of W(omega_i) over annihilator generators,
// solved as one exact linear system over Q(x).
CharacteristicResult characteristic_via_forms(const Distribution& d, const RationalPoint& base);

// Definitional route, forms-free: coefficients a with
// sum_i a_i [f_i, f_j] = 0 mod D for every j, by elimination against the
// generator row space.
CharacteristicResult characteristic_via_brackets(const Distribution& d, const RationalPoint& base);

// Both routes, cross-checked for span equality, plus the definitional
// verification of every returned generator.  A mismatch is an internal error.
Distribution characteristic_distribution(const Distribution& d, const RationalPoint& base);

// W(omega) = { f in D : f interior d omega = 0 mod D^perp }.
struct WSpace {
  Distribution distribution;
  Polynomial valid_locus;
};
WSpace w_space(const Distribution& d, const OneForm& omega, const RationalPoint& base);

// --- structure functions and Engel rank ----------------------------------

// Table of c_ij^k with [f_i, f_j] = sum_k c_ij^k g_k mod D^(0).  All entries
// share one polynomial denominator; `table` stores denominator * c_ij^k so
// the stored values are polynomials.
class StructureFunctions {
 public:
  StructureFunctions(std::vector<VectorField> frame_f, std::vector<VectorField> frame_g,
                     std::vector<Polynomial> table, Polynomial denominator, bool residual_check);

  int d0() const { return static_cast<int>(frame_f_.size()); }
  int r0() const { return static_cast<int>(frame_g_.size()); }
  const std::vector<VectorField>& frame_f() const { return frame_f_; }
  const std::vector<VectorField>& frame_g() const { return frame_g_; }
  const Polynomial& denominator() const { return denominator_; }
  bool residual_check() const { return residual_check_; }

  // denominator * c_ij^k, 0-based indices, antisymmetric in (i, j).
  Polynomial scaled(int i, int j, int k) const;

 private:
  std::vector<VectorField> frame_f_, frame_g_;
  std::vector<Polynomial> table_;  // ((i * d0 + j) * r0 + k) for i < j
  Polynomial denominator_;
  bool residual_check_;
};

// Frames are selected greedily from the given generators (independent at
// `base`); the bracket decomposition is solved exactly with one shared
// denominator, which must not vanish at `base`.
StructureFunctions structure_functions(const Distribution& d0, const Distribution& d1,
                                       const RationalPoint& base);

// cond-E: true iff (d omega_i ^ d omega_j) restricted to I^perp vanishes
// identically for all i <= j.
bool engel_rank_le_one(const PfaffianSystem& system);

// Sextuple identities on the structure functions; unconditionally true for
// d0 in {2, 3}.
bool engel_relations_check(const StructureFunctions& s);

// --- corank one subdistributions -----------------------------------------

struct BResult {
  Distribution b;
  // The r0 annihilator generators of D complementary to (D^(1))^perp, in the
  // order they were selected (cond-B's omega_1..omega_r0).
  std::vector<OneForm> complementary_forms;
  Polynomial valid_locus;
};

// cond-B: B = sum of W(omega_i) over the complementary annihilator
// generators.  Requires r0 >= 2, constant ranks, the characteristic rank
// d0 - r0 - 1 and the Engel tests; verifies corank one and [B,B] in D.
BResult corank_one_B_detail(const Distribution& d, const RationalPoint& base);
Distribution corank_one_B(const Distribution& d, const RationalPoint& base);

struct CorankOneVerdict {
  bool exists = false;
  int r0 = 0;
  bool char_rank_ok = false;
  bool engel_rank_one = false;
  std::optional<Distribution> B;
  std::optional<bool> B_involutive;
  std::optional<Distribution> L_witness;
};

// Corollary-style decision: (1) characteristic rank equals d0 - r0 - 1;
// (2) Engel rank constant equal to one; (3) for r0 = 2 the unique B must in
// addition be involutive.  For r0 = 1 existence is reported without a
// witness.
CorankOneVerdict decide_corank_one_involutive(const Distribution& d, const RationalPoint& base);

}  // namespace pfl
