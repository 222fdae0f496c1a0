#include <pfl/polynomial.hpp>

#include <algorithm>
#include <cctype>
#include <sstream>

namespace pfl {

bool Monomial::divides(const Monomial& other) const {
  if (dim() != other.dim()) return false;
  for (std::size_t i = 0; i < exponents.size(); ++i)
    if (exponents[i] > other.exponents[i]) return false;
  return true;
}

Monomial Monomial::operator*(const Monomial& other) const {
  Monomial r(*this);
  for (std::size_t i = 0; i < exponents.size(); ++i) r.exponents[i] += other.exponents[i];
  return r;
}

Monomial Monomial::operator/(const Monomial& other) const {
  Monomial r(*this);
  for (std::size_t i = 0; i < exponents.size(); ++i) r.exponents[i] -= other.exponents[i];
  return r;
}

bool GradedLexLess::operator()(const Monomial& a, const Monomial& b) const {
  uint32_t da = a.total_degree(), db = b.total_degree();
  if (da != db) return da < db;
  for (std::size_t i = 0; i < a.exponents.size(); ++i)
    if (a.exponents[i] != b.exponents[i]) return a.exponents[i] < b.exponents[i];
  return false;
}

Polynomial::Polynomial(std::size_t dim, const Rational& constant) : dim_(dim) {
  if (constant != 0) terms_.emplace(Monomial(dim), constant);
}

Polynomial Polynomial::variable(std::size_t dim, std::size_t index, uint32_t power) {
  if (index >= dim) throw input_error("polynomial: variable index out of range");
  Monomial m(dim);
  m.exponents[index] = power;
  Polynomial p(dim);
  p.terms_.emplace(std::move(m), Rational(1));
  return p;
}

Polynomial Polynomial::term(std::size_t dim, const Rational& c, const Monomial& m) {
  Polynomial p(dim);
  if (c != 0) p.terms_.emplace(m, c);
  return p;
}

bool Polynomial::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_constant());
}

Rational Polynomial::constant_term() const {
  auto it = terms_.find(Monomial(dim_));
  return it == terms_.end() ? Rational(0) : it->second;
}

uint32_t Polynomial::total_degree() const {
  return terms_.empty() ? 0 : terms_.rbegin()->first.total_degree();
}

uint32_t Polynomial::degree_in(std::size_t var) const {
  uint32_t d = 0;
  for (const auto& [m, c] : terms_) d = std::max(d, m.exponents[var]);
  return d;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.emplace(m, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

Polynomial Polynomial::operator+(const Polynomial& o) const {
  Polynomial r(*this);
  r += o;
  return r;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (dim_ != o.dim_) throw input_error("polynomial: dimension mismatch in add");
  for (const auto& [m, c] : o.terms_) add_term(m, c);
  return *this;
}

Polynomial Polynomial::operator-(const Polynomial& o) const {
  Polynomial r(*this);
  r -= o;
  return r;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (dim_ != o.dim_) throw input_error("polynomial: dimension mismatch in sub");
  for (const auto& [m, c] : o.terms_) add_term(m, -c);
  return *this;
}

Polynomial Polynomial::operator-() const {
  Polynomial r(dim_);
  for (const auto& [m, c] : terms_) r.terms_.emplace(m, -c);
  return r;
}

Polynomial Polynomial::operator*(const Polynomial& o) const {
  if (dim_ != o.dim_) throw input_error("polynomial: dimension mismatch in mul");
  Polynomial r(dim_);
  for (const auto& [ma, ca] : terms_)
    for (const auto& [mb, cb] : o.terms_) r.add_term(ma * mb, ca * cb);
  return r;
}

Polynomial Polynomial::operator*(const Rational& c) const {
  Polynomial r(dim_);
  if (c == 0) return r;
  for (const auto& [m, cc] : terms_) r.terms_.emplace(m, cc * c);
  return r;
}

Polynomial Polynomial::derivative(std::size_t var) const {
  if (var >= dim_) throw input_error("polynomial: derivative index out of range");
  Polynomial r(dim_);
  for (const auto& [m, c] : terms_) {
    uint32_t e = m.exponents[var];
    if (e == 0) continue;
    Monomial dm(m);
    dm.exponents[var] = e - 1;
    r.add_term(dm, c * Rational(e));
  }
  return r;
}

Rational Polynomial::evaluate(const RationalPoint& at) const {
  if (at.size() != dim_) throw input_error("polynomial: evaluation point dimension mismatch");
  Rational acc(0);
  for (const auto& [m, c] : terms_) {
    Rational t(c);
    for (std::size_t i = 0; i < dim_; ++i) {
      for (uint32_t k = 0; k < m.exponents[i]; ++k) t *= at[i];
    }
    acc += t;
  }
  return acc;
}

Polynomial Polynomial::compose(const std::vector<Polynomial>& map) const {
  if (map.size() != dim_) throw input_error("polynomial: compose arity mismatch");
  std::size_t target = map.empty() ? 0 : map[0].dim();
  for (const auto& q : map)
    if (q.dim() != target) throw input_error("polynomial: compose images on mixed charts");
  // Cache powers of each substituted image.
  std::vector<std::vector<Polynomial>> powers(dim_);
  for (std::size_t i = 0; i < dim_; ++i) powers[i].push_back(Polynomial(target, Rational(1)));
  Polynomial r(target);
  for (const auto& [m, c] : terms_) {
    Polynomial t(target, c);
    for (std::size_t i = 0; i < dim_; ++i) {
      uint32_t e = m.exponents[i];
      while (powers[i].size() <= e) powers[i].push_back(powers[i].back() * map[i]);
      if (e > 0) t = t * powers[i][e];
    }
    r += t;
  }
  return r;
}

Polynomial Polynomial::substitute(std::size_t var, const Rational& value) const {
  if (var >= dim_) throw input_error("polynomial: substitute index out of range");
  Polynomial r(dim_);
  for (const auto& [m, c] : terms_) {
    Rational f(c);
    for (uint32_t k = 0; k < m.exponents[var]; ++k) f *= value;
    if (f == 0) continue;
    Monomial mm(m);
    mm.exponents[var] = 0;
    r.add_term(mm, f);
  }
  return r;
}

const std::pair<const Monomial, Rational>& Polynomial::leading_term() const {
  if (terms_.empty()) throw internal_error("polynomial: leading term of zero");
  return *terms_.rbegin();
}

Polynomial Polynomial::divide_exact(const Polynomial& divisor) const {
  if (divisor.is_zero()) throw internal_error("polynomial: division by zero");
  if (dim_ != divisor.dim_) throw input_error("polynomial: dimension mismatch in division");
  Polynomial quotient(dim_);
  Polynomial rem(*this);
  const auto& dlead = divisor.leading_term();
  while (!rem.is_zero()) {
    const auto& rlead = rem.leading_term();
    if (!dlead.first.divides(rlead.first))
      throw internal_error("polynomial: inexact division");
    Monomial qm = rlead.first / dlead.first;
    Rational qc = rlead.second / dlead.second;
    quotient.add_term(qm, qc);
    rem -= divisor * Polynomial::term(dim_, qc, qm);
  }
  return quotient;
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream out;
  bool first = true;
  // Leading term first: iterate descending.
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    const auto& [m, c] = *it;
    if (!first) out << " + ";
    first = false;
    out << pfl::to_string(c);
    for (std::size_t i = 0; i < m.exponents.size(); ++i) {
      if (m.exponents[i] == 0) continue;
      out << (" * x" + std::to_string(i + 1));
      if (m.exponents[i] > 1) out << "^" << m.exponents[i];
    }
  }
  return out.str();
}

namespace {

struct Cursor {
  const std::string& s;
  std::size_t i = 0;
  void skip_ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  char peek() {
    skip_ws();
    return i < s.size() ? s[i] : '\0';
  }
};

Rational parse_coefficient(Cursor& c) {
  c.skip_ws();
  std::size_t start = c.i;
  if (c.i < c.s.size() && (c.s[c.i] == '+' || c.s[c.i] == '-')) ++c.i;
  while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
  if (c.i < c.s.size() && c.s[c.i] == '/') {
    ++c.i;
    while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
  }
  if (c.i == start) throw input_error("polynomial: expected coefficient in '" + c.s + "'");
  return parse_rational(c.s.substr(start, c.i - start));
}

uint32_t parse_uint(Cursor& c) {
  c.skip_ws();
  std::size_t start = c.i;
  while (c.i < c.s.size() && std::isdigit(static_cast<unsigned char>(c.s[c.i]))) ++c.i;
  if (c.i == start) throw input_error("polynomial: expected integer in '" + c.s + "'");
  return static_cast<uint32_t>(std::stoul(c.s.substr(start, c.i - start)));
}

}  // namespace

// Grammar: poly := term (('+'|'-') term)* ; term := coeff ('*' factor)* | factor ('*' factor)*
// factor := 'x' INDEX ('^' EXPONENT)? .  Accepts the printer's output and the
// usual hand-written variants such as "x1^2*x2 - 3".
Polynomial Polynomial::parse(const std::string& text, std::size_t dim) {
  Cursor c{text};
  Polynomial result(dim);
  bool expect_term = true;
  int sign = 1;
  while (!c.done()) {
    if (!expect_term) {
      char op = c.peek();
      if (op == '+') {
        sign = 1;
      } else if (op == '-') {
        sign = -1;
      } else {
        throw input_error("polynomial: expected '+' or '-' near position " +
                          std::to_string(c.i) + " in '" + text + "'");
      }
      ++c.i;
      expect_term = true;
      continue;
    }
    // One term.
    Rational coeff(sign);
    Monomial mono(dim);
    bool saw_factor = false;
    char ch = c.peek();
    if (ch == '+' || ch == '-' || std::isdigit(static_cast<unsigned char>(ch))) {
      Rational lead = parse_coefficient(c);
      coeff = Rational(sign) * lead;
      saw_factor = true;
    }
    while (true) {
      char p = c.peek();
      if (p == '*') {
        ++c.i;
        p = c.peek();
      } else if (saw_factor && p != 'x') {
        break;
      }
      if (p != 'x') {
        if (saw_factor) break;
        throw input_error("polynomial: expected variable near position " +
                          std::to_string(c.i) + " in '" + text + "'");
      }
      ++c.i;
      uint32_t index = parse_uint(c);
      if (index == 0 || index > dim)
        throw input_error("polynomial: variable x" + std::to_string(index) +
                          " out of range for dimension " + std::to_string(dim));
      uint32_t exp = 1;
      if (c.peek() == '^') {
        ++c.i;
        exp = parse_uint(c);
      }
      mono.exponents[index - 1] += exp;
      saw_factor = true;
    }
    if (!saw_factor) throw input_error("polynomial: empty term in '" + text + "'");
    result.add_term(mono, coeff);
    expect_term = false;
    sign = 1;
  }
  if (expect_term && !(text.find_first_not_of(" \t") == std::string::npos))
    throw input_error("polynomial: dangling operator in '" + text + "'");
  return result;
}

}  // namespace pfl
