#include <pfl/ratfun.hpp>

namespace pfl {

RationalFunction::RationalFunction(Polynomial num, Polynomial den)
    : num_(std::move(num)), den_(std::move(den)) {
  if (num_.dim() != den_.dim()) throw input_error("rational_function: mixed charts");
  if (den_.is_zero()) throw input_error("rational_function: zero denominator");
  normalize();
}

void RationalFunction::normalize() {
  if (num_.is_zero()) {
    den_ = Polynomial(num_.dim(), Rational(1));
    return;
  }
  // Scale so the denominator's leading coefficient is one.
  Rational lead = den_.leading_term().second;
  if (lead != 1) {
    Rational inv = Rational(1) / lead;
    num_ = num_ * inv;
    den_ = den_ * inv;
  }
}

bool RationalFunction::equals(const RationalFunction& o) const {
  return (num_ * o.den_ - o.num_ * den_).is_zero();
}

RationalFunction RationalFunction::operator+(const RationalFunction& o) const {
  if (den_ == o.den_) return RationalFunction(num_ + o.num_, den_);
  return RationalFunction(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator-(const RationalFunction& o) const {
  if (den_ == o.den_) return RationalFunction(num_ - o.num_, den_);
  return RationalFunction(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
}

RationalFunction RationalFunction::operator*(const RationalFunction& o) const {
  return RationalFunction(num_ * o.num_, den_ * o.den_);
}

RationalFunction RationalFunction::operator/(const RationalFunction& o) const {
  if (o.num_.is_zero()) throw input_error("rational_function: division by zero");
  return RationalFunction(num_ * o.den_, den_ * o.num_);
}

RationalFunction RationalFunction::operator-() const {
  RationalFunction r(*this);
  r.num_ = -r.num_;
  return r;
}

RationalFunction RationalFunction::derivative(std::size_t var) const {
  // (n/d)' = (n'd - nd') / d^2
  return RationalFunction(num_.derivative(var) * den_ - num_ * den_.derivative(var), den_ * den_);
}

Rational RationalFunction::evaluate(const RationalPoint& at) const {
  Rational d = den_.evaluate(at);
  if (d == 0) throw precondition_error("rational_function: denominator vanishes at the point");
  return num_.evaluate(at) / d;
}

RationalFunction RationalFunction::compose(const std::vector<RationalFunction>& map) const {
  if (map.size() != dim()) throw input_error("rational_function: compose arity mismatch");
  const std::size_t target = map.empty() ? 0 : map[0].dim();
  // Substitute monomial by monomial over a common denominator: for each
  // term, multiply the numerators and match denominators up to the maximal
  // degree in each variable.
  std::vector<uint32_t> max_deg(dim(), 0);
  auto scan = [&](const Polynomial& p) {
    for (const auto& [mono, c] : p.terms())
      for (std::size_t v = 0; v < dim(); ++v)
        max_deg[v] = std::max(max_deg[v], mono.exponents[v]);
  };
  scan(num_);
  scan(den_);

  std::vector<std::vector<Polynomial>> num_pow(dim()), den_pow(dim());
  for (std::size_t v = 0; v < dim(); ++v) {
    num_pow[v].push_back(Polynomial(target, Rational(1)));
    den_pow[v].push_back(Polynomial(target, Rational(1)));
    for (uint32_t e = 1; e <= max_deg[v]; ++e) {
      num_pow[v].push_back(num_pow[v].back() * map[v].num());
      den_pow[v].push_back(den_pow[v].back() * map[v].den());
    }
  }
  auto substitute = [&](const Polynomial& p) {
    Polynomial acc(target);
    for (const auto& [mono, c] : p.terms()) {
      Polynomial t(target, c);
      for (std::size_t v = 0; v < dim(); ++v) {
        uint32_t e = mono.exponents[v];
        t = t * num_pow[v][e];
        if (max_deg[v] > e) t = t * den_pow[v][max_deg[v] - e];
      }
      acc += t;
    }
    return acc;
  };
  // Common clearing factor prod_v den_v^{max_deg[v]} cancels between
  // numerator and denominator.
  return RationalFunction(substitute(num_), substitute(den_));
}

std::string RationalFunction::to_string() const {
  if (is_polynomial() && den_ == Polynomial(dim(), Rational(1))) return num_.to_string();
  return "(" + num_.to_string() + ") / (" + den_.to_string() + ")";
}

RationalMap RationalMap::identity(std::size_t dim) {
  RationalMap m;
  m.components.reserve(dim);
  for (std::size_t i = 0; i < dim; ++i)
    m.components.emplace_back(Polynomial::variable(dim, i));
  return m;
}

bool RationalMap::defined_at(const RationalPoint& at) const {
  for (const auto& c : components)
    if (!c.defined_at(at)) return false;
  return true;
}

RationalPoint RationalMap::evaluate(const RationalPoint& at) const {
  RationalPoint out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(c.evaluate(at));
  return out;
}

RationalMap RationalMap::after(const RationalMap& inner) const {
  RationalMap out;
  out.components.reserve(components.size());
  for (const auto& c : components) out.components.push_back(c.compose(inner.components));
  return out;
}

RationalFunction lie_derivative(const VectorField& f, const RationalFunction& c) {
  if (f.chart.dim != c.dim()) throw input_error("lie_derivative: chart mismatch");
  // L_f (n/d) = (d * L_f n - n * L_f d) / d^2
  Polynomial ln = f.apply(c.num());
  Polynomial ld = f.apply(c.den());
  return RationalFunction(c.den() * ln - c.num() * ld, c.den() * c.den());
}

std::vector<RationalFunction> pushforward_rows(const RationalMap& phi, const VectorField& f) {
  std::vector<RationalFunction> out;
  out.reserve(phi.components.size());
  for (const auto& comp : phi.components) out.push_back(lie_derivative(f, comp));
  return out;
}

}  // namespace pfl
