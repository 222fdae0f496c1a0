// pfl: rational functions as explicit numerator/denominator polynomial
// pairs, and rational maps built from them.
//
// No gcd cancellation is attempted (polynomial factorization is out of
// scope); only rational content is normalized.  Every identity involving
// these objects is decided by cross-multiplied polynomial comparisons, so
// correctness never depends on reduced representatives.

#pragma once

#include <pfl/exterior.hpp>

namespace pfl {

class RationalFunction {
 public:
  RationalFunction() = default;
  explicit RationalFunction(Polynomial num)
      : num_(std::move(num)), den_(num_.dim(), Rational(1)) {}
  RationalFunction(Polynomial num, Polynomial den);
  static RationalFunction constant(std::size_t dim, const Rational& c) {
    return RationalFunction(Polynomial(dim, c));
  }

  const Polynomial& num() const { return num_; }
  const Polynomial& den() const { return den_; }
  std::size_t dim() const { return num_.dim(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  // Exact value equality: cross-multiplied.
  bool equals(const RationalFunction& o) const;

  RationalFunction operator+(const RationalFunction& o) const;
  RationalFunction operator-(const RationalFunction& o) const;
  RationalFunction operator*(const RationalFunction& o) const;
  RationalFunction operator/(const RationalFunction& o) const;
  RationalFunction operator-() const;

  RationalFunction derivative(std::size_t var) const;
  // Defined only where the denominator does not vanish.
  Rational evaluate(const RationalPoint& at) const;
  bool defined_at(const RationalPoint& at) const { return den_.evaluate(at) != 0; }
  // Substitute rational functions for the variables.
  RationalFunction compose(const std::vector<RationalFunction>& map) const;

  std::string to_string() const;

 private:
  void normalize();
  Polynomial num_, den_;
};

// A map of a chart to itself with rational-function components.
struct RationalMap {
  std::vector<RationalFunction> components;

  static RationalMap identity(std::size_t dim);
  std::size_t dim() const { return components.size(); }
  bool defined_at(const RationalPoint& at) const;
  RationalPoint evaluate(const RationalPoint& at) const;
  // Composition this after inner (substitution).
  RationalMap after(const RationalMap& inner) const;
};

// Directional derivative L_f c of a rational function along a polynomial
// vector field on the same chart.
RationalFunction lie_derivative(const VectorField& f, const RationalFunction& c);

// Pushforward of a polynomial field by a rational map, expressed in source
// coordinates: component i equals L_f(phi_i), i.e. (phi_* f)(phi(y)) row by
// row.  Used for cross-multiplied frame identities.
std::vector<RationalFunction> pushforward_rows(const RationalMap& phi, const VectorField& f);

}  // namespace pfl
