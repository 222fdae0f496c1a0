// pfl: polynomial tensor fields on a named chart of R^N.
//
// Vector fields and 1-forms are component vectors; 2-forms and the 4-form
// residues used by the Engel-rank test keep only strictly increasing index
// keys.  Everything is immutable value data; operations are pure.

#pragma once

#include <pfl/poly_matrix.hpp>

#include <array>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace pfl {

struct JetSpec {
  int n = 1;  // jet order
  int m = 1;  // number of dependent variables
  std::size_t chart_dim() const { return static_cast<std::size_t>((n + 1) * m + 1); }
  bool operator==(const JetSpec& o) const { return n == o.n && m == o.m; }
};

struct Chart {
  std::size_t dim = 0;
  std::vector<std::string> names;
  std::optional<JetSpec> jet;

  bool operator==(const Chart& o) const;
  bool operator!=(const Chart& o) const { return !(*this == o); }
};

// Canonical jet chart of J^n(R,R^m): coordinates x_0^0, then x_j^i grouped by
// level i = 0..n with j = 1..m inside each level.
Chart jet_chart(const JetSpec& spec);
Chart plain_chart(std::size_t dim);
// Position of x_j^i in the jet chart (i = -1 with j = 0 gives x_0^0).
std::size_t jet_index(const JetSpec& spec, int j, int i);

struct VectorField {
  Chart chart;
  std::vector<Polynomial> components;

  VectorField() = default;
  VectorField(Chart c, std::vector<Polynomial> comps);
  static VectorField coordinate(const Chart& c, std::size_t index);
  static VectorField zero(const Chart& c);
  bool is_zero() const;
  bool operator==(const VectorField& o) const {
    return chart == o.chart && components == o.components;
  }
  VectorField operator+(const VectorField& o) const;
  VectorField operator-(const VectorField& o) const;
  VectorField operator*(const Polynomial& p) const;
  // Directional derivative of a function: f(p) = sum_k f^k dp/dx_k.
  Polynomial apply(const Polynomial& p) const;
};

struct OneForm {
  Chart chart;
  std::vector<Polynomial> components;

  OneForm() = default;
  OneForm(Chart c, std::vector<Polynomial> comps);
  static OneForm coordinate(const Chart& c, std::size_t index);  // dx_index
  bool is_zero() const;
  bool operator==(const OneForm& o) const {
    return chart == o.chart && components == o.components;
  }
};

struct TwoForm {
  Chart chart;
  std::map<std::pair<std::size_t, std::size_t>, Polynomial> components;  // keys i<j

  void add(std::size_t i, std::size_t j, const Polynomial& c);
  Polynomial component(std::size_t i, std::size_t j) const;  // antisymmetric access
  bool is_zero() const;
  // omega(f, g), exact.
  Polynomial operator()(const VectorField& f, const VectorField& g) const;
};

struct FourFormResidue {
  Chart chart;
  std::map<std::array<std::size_t, 4>, Polynomial> components;  // strictly increasing keys

  void add(const std::array<std::size_t, 4>& key, const Polynomial& c);
  bool is_zero() const;
  Polynomial operator()(const VectorField& a, const VectorField& b, const VectorField& c,
                        const VectorField& d) const;
};

// A polynomial diffeomorphism together with its exact polynomial inverse.
// The constructor verifies both round-trip identities and throws
// precondition_error if either fails (reporting the first bad component).
class DiffeoPair {
 public:
  DiffeoPair(Chart chart, std::vector<Polynomial> forward, std::vector<Polynomial> backward,
             RationalPoint base_point);

  const Chart& chart() const { return chart_; }
  const std::vector<Polynomial>& forward() const { return forward_; }
  const std::vector<Polynomial>& backward() const { return backward_; }
  const RationalPoint& base_point() const { return base_; }
  RationalPoint image_of_base() const;
  DiffeoPair swapped() const;  // the inverse pair, based at phi(base)

 private:
  Chart chart_;
  std::vector<Polynomial> forward_, backward_;
  RationalPoint base_;
};

class Distribution {
 public:
  Distribution() = default;
  // Generators may be empty (the zero distribution: characteristic
  // distributions of maximally non-integrable systems are legitimately rank 0).
  Distribution(Chart chart, std::vector<VectorField> generators);

  const Chart& chart() const { return chart_; }
  const std::vector<VectorField>& generators() const { return generators_; }
  int generic_rank() const { return rank_; }
  int rank_at(const RationalPoint& p) const;
  PolyMatrix generator_matrix() const;
  bool constant_rank_at(const RationalPoint& p) const { return rank_at(p) == rank_; }

 private:
  Chart chart_;
  std::vector<VectorField> generators_;
  int rank_ = 0;
};

class PfaffianSystem {
 public:
  PfaffianSystem() = default;
  PfaffianSystem(Chart chart, std::vector<OneForm> generators);

  const Chart& chart() const { return chart_; }
  const std::vector<OneForm>& generators() const { return generators_; }
  int generic_rank() const { return rank_; }
  int rank_at(const RationalPoint& p) const;
  PolyMatrix generator_matrix() const;
  bool constant_rank_at(const RationalPoint& p) const { return rank_at(p) == rank_; }

 private:
  Chart chart_;
  std::vector<OneForm> generators_;
  int rank_ = 0;
};

// --- operations ---------------------------------------------------------

VectorField lie_bracket(const VectorField& f, const VectorField& g);
Polynomial pairing(const OneForm& omega, const VectorField& f);
TwoForm exterior_derivative(const OneForm& omega);
FourFormResidue wedge_two_forms(const TwoForm& a, const TwoForm& b);
// Sign convention: (f interior omega2)(g) = omega2(f, g).
OneForm interior_product(const VectorField& f, const TwoForm& omega2);

struct AnnihilatorResult {
  PfaffianSystem system;
  // The returned family is independent and spanning wherever this polynomial
  // does not vanish (it is the pivot product of the exact elimination).
  Polynomial valid_locus;
};
// Pointwise annihilator D^perp; requires locally constant rank at `base`.
AnnihilatorResult annihilator(const Distribution& d, const RationalPoint& base);

struct PerpResult {
  Distribution distribution;
  Polynomial valid_locus;
};
// Dual construction: the distribution I^perp annihilated by a form family.
PerpResult perp(const PfaffianSystem& system, const RationalPoint& base);

Distribution pushforward(const Distribution& d, const DiffeoPair& pair);
VectorField pushforward(const VectorField& f, const DiffeoPair& pair);

}  // namespace pfl
