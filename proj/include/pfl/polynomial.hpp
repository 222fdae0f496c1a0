// pfl: sparse multivariate polynomials over Q.
//
// Terms live in a map keyed by monomial under the graded lexicographic
// order, which fixes one canonical form for printing, hashing golden files
// and comparing structurally.  No zero coefficient is ever stored.

#pragma once

#include <pfl/rational.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace pfl {

struct Monomial {
  std::vector<uint32_t> exponents;

  explicit Monomial(std::size_t dim = 0) : exponents(dim, 0) {}
  explicit Monomial(std::vector<uint32_t> e) : exponents(std::move(e)) {}

  std::size_t dim() const { return exponents.size(); }
  uint32_t total_degree() const {
    uint32_t d = 0;
    for (uint32_t e : exponents) d += e;
    return d;
  }
  bool is_constant() const { return total_degree() == 0; }
  bool divides(const Monomial& other) const;
  Monomial operator*(const Monomial& other) const;
  // Componentwise difference; caller guarantees divisibility.
  Monomial operator/(const Monomial& other) const;
  bool operator==(const Monomial& o) const { return exponents == o.exponents; }
};

// Graded lexicographic: compare total degree first, then exponent vectors
// left to right (x1 heaviest).  Ascending order; the leading term is last.
struct GradedLexLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

using RationalPoint = std::vector<Rational>;

class Polynomial {
 public:
  using TermMap = std::map<Monomial, Rational, GradedLexLess>;

  Polynomial() : dim_(0) {}
  explicit Polynomial(std::size_t dim) : dim_(dim) {}
  Polynomial(std::size_t dim, const Rational& constant);

  static Polynomial variable(std::size_t dim, std::size_t index, uint32_t power = 1);
  static Polynomial constant(std::size_t dim, const Rational& c) { return Polynomial(dim, c); }
  static Polynomial term(std::size_t dim, const Rational& c, const Monomial& m);

  std::size_t dim() const { return dim_; }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  // Coefficient of the constant monomial (0 if absent).
  Rational constant_term() const;
  const TermMap& terms() const { return terms_; }
  uint32_t total_degree() const;  // 0 for the zero polynomial
  uint32_t degree_in(std::size_t var) const;

  void add_term(const Monomial& m, const Rational& c);

  Polynomial operator+(const Polynomial& o) const;
  Polynomial operator-(const Polynomial& o) const;
  Polynomial operator*(const Polynomial& o) const;
  Polynomial operator-() const;
  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial operator*(const Rational& c) const;
  bool operator==(const Polynomial& o) const {
    return dim_ == o.dim_ && terms_ == o.terms_;
  }
  bool operator!=(const Polynomial& o) const { return !(*this == o); }

  Polynomial derivative(std::size_t var) const;
  Rational evaluate(const RationalPoint& at) const;
  // Substitute map[i] for variable i; all map entries share one target chart.
  Polynomial compose(const std::vector<Polynomial>& map) const;
  // Set one variable to a rational constant; keeps the same dimension.
  Polynomial substitute(std::size_t var, const Rational& value) const;

  // Exact division: requires divisor nonzero and remainder zero, else throws
  // internal_error.  Used by fraction-free elimination where divisibility is
  // guaranteed.
  Polynomial divide_exact(const Polynomial& divisor) const;

  // Leading term under graded-lex (largest).  Polynomial must be nonzero.
  const std::pair<const Monomial, Rational>& leading_term() const;

  std::string to_string() const;
  static Polynomial parse(const std::string& text, std::size_t dim);

 private:
  std::size_t dim_;
  TermMap terms_;
};

inline Polynomial operator*(const Rational& c, const Polynomial& p) { return p * c; }

}  // namespace pfl
