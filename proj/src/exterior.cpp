#include <pfl/exterior.hpp>

#include <algorithm>

namespace pfl {

bool Chart::operator==(const Chart& o) const {
  if (dim != o.dim || names != o.names) return false;
  if (jet.has_value() != o.jet.has_value()) return false;
  return !jet || *jet == *o.jet;
}

Chart jet_chart(const JetSpec& spec) {
  if (spec.n < 0 || spec.m < 1) throw input_error("jet_chart: invalid jet spec");
  Chart c;
  c.dim = spec.chart_dim();
  c.jet = spec;
  c.names.reserve(c.dim);
  c.names.push_back("x0^0");
  for (int i = 0; i <= spec.n; ++i)
    for (int j = 1; j <= spec.m; ++j)
      c.names.push_back("x" + std::to_string(j) + "^" + std::to_string(i));
  return c;
}

Chart plain_chart(std::size_t dim) {
  Chart c;
  c.dim = dim;
  c.names.reserve(dim);
  for (std::size_t i = 1; i <= dim; ++i) c.names.push_back("x" + std::to_string(i));
  return c;
}

std::size_t jet_index(const JetSpec& spec, int j, int i) {
  if (j == 0) return 0;
  if (j < 1 || j > spec.m || i < 0 || i > spec.n) throw input_error("jet_index: out of range");
  return 1 + static_cast<std::size_t>(i) * spec.m + static_cast<std::size_t>(j - 1);
}

VectorField::VectorField(Chart c, std::vector<Polynomial> comps)
    : chart(std::move(c)), components(std::move(comps)) {
  if (components.size() != chart.dim)
    throw input_error("vector_field: component count differs from chart dimension");
  for (const auto& p : components)
    if (p.dim() != chart.dim) throw input_error("vector_field: component on wrong chart");
}

VectorField VectorField::coordinate(const Chart& c, std::size_t index) {
  std::vector<Polynomial> comps(c.dim, Polynomial(c.dim));
  comps.at(index) = Polynomial(c.dim, Rational(1));
  return VectorField(c, std::move(comps));
}

VectorField VectorField::zero(const Chart& c) {
  return VectorField(c, std::vector<Polynomial>(c.dim, Polynomial(c.dim)));
}

bool VectorField::is_zero() const {
  return std::all_of(components.begin(), components.end(),
                     [](const Polynomial& p) { return p.is_zero(); });
}

VectorField VectorField::operator+(const VectorField& o) const {
  if (chart != o.chart) throw input_error("vector_field: chart mismatch in add");
  std::vector<Polynomial> comps;
  comps.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) comps.push_back(components[i] + o.components[i]);
  return VectorField(chart, std::move(comps));
}

VectorField VectorField::operator-(const VectorField& o) const {
  if (chart != o.chart) throw input_error("vector_field: chart mismatch in sub");
  std::vector<Polynomial> comps;
  comps.reserve(components.size());
  for (std::size_t i = 0; i < components.size(); ++i) comps.push_back(components[i] - o.components[i]);
  return VectorField(chart, std::move(comps));
}

VectorField VectorField::operator*(const Polynomial& p) const {
  std::vector<Polynomial> comps;
  comps.reserve(components.size());
  for (const auto& c : components) comps.push_back(c * p);
  return VectorField(chart, std::move(comps));
}

Polynomial VectorField::apply(const Polynomial& p) const {
  if (p.dim() != chart.dim) throw input_error("vector_field: function on wrong chart");
  Polynomial out(chart.dim);
  for (std::size_t k = 0; k < chart.dim; ++k) {
    if (components[k].is_zero()) continue;
    out += components[k] * p.derivative(k);
  }
  return out;
}

OneForm::OneForm(Chart c, std::vector<Polynomial> comps)
    : chart(std::move(c)), components(std::move(comps)) {
  if (components.size() != chart.dim)
    throw input_error("one_form: component count differs from chart dimension");
  for (const auto& p : components)
    if (p.dim() != chart.dim) throw input_error("one_form: component on wrong chart");
}

OneForm OneForm::coordinate(const Chart& c, std::size_t index) {
  std::vector<Polynomial> comps(c.dim, Polynomial(c.dim));
  comps.at(index) = Polynomial(c.dim, Rational(1));
  return OneForm(c, std::move(comps));
}

bool OneForm::is_zero() const {
  return std::all_of(components.begin(), components.end(),
                     [](const Polynomial& p) { return p.is_zero(); });
}

void TwoForm::add(std::size_t i, std::size_t j, const Polynomial& c) {
  if (c.is_zero() || i == j) return;
  std::pair<std::size_t, std::size_t> key(i, j);
  Polynomial v = c;
  if (i > j) {
    key = {j, i};
    v = -c;
  }
  auto [it, inserted] = components.emplace(key, v);
  if (!inserted) {
    it->second += v;
    if (it->second.is_zero()) components.erase(it);
  }
}

Polynomial TwoForm::component(std::size_t i, std::size_t j) const {
  if (i == j) return Polynomial(chart.dim);
  auto it = components.find(i < j ? std::make_pair(i, j) : std::make_pair(j, i));
  if (it == components.end()) return Polynomial(chart.dim);
  return i < j ? it->second : -it->second;
}

bool TwoForm::is_zero() const { return components.empty(); }

Polynomial TwoForm::operator()(const VectorField& f, const VectorField& g) const {
  if (f.chart != chart || g.chart != chart) throw input_error("two_form: chart mismatch");
  Polynomial out(chart.dim);
  for (const auto& [key, c] : components) {
    auto [i, j] = key;
    out += c * (f.components[i] * g.components[j] - f.components[j] * g.components[i]);
  }
  return out;
}

void FourFormResidue::add(const std::array<std::size_t, 4>& key, const Polynomial& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = components.emplace(key, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) components.erase(it);
  }
}

bool FourFormResidue::is_zero() const { return components.empty(); }

Polynomial FourFormResidue::operator()(const VectorField& a, const VectorField& b,
                                       const VectorField& c, const VectorField& d) const {
  const VectorField* fields[4] = {&a, &b, &c, &d};
  for (const auto* f : fields)
    if (f->chart != chart) throw input_error("four_form: chart mismatch");
  Polynomial out(chart.dim);
  for (const auto& [key, coeff] : components) {
    // det of the 4x4 matrix of components, Laplace over permutations.
    static const int perm[24][4] = {
        {0, 1, 2, 3}, {0, 1, 3, 2}, {0, 2, 1, 3}, {0, 2, 3, 1}, {0, 3, 1, 2}, {0, 3, 2, 1},
        {1, 0, 2, 3}, {1, 0, 3, 2}, {1, 2, 0, 3}, {1, 2, 3, 0}, {1, 3, 0, 2}, {1, 3, 2, 0},
        {2, 0, 1, 3}, {2, 0, 3, 1}, {2, 1, 0, 3}, {2, 1, 3, 0}, {2, 3, 0, 1}, {2, 3, 1, 0},
        {3, 0, 1, 2}, {3, 0, 2, 1}, {3, 1, 0, 2}, {3, 1, 2, 0}, {3, 2, 0, 1}, {3, 2, 1, 0}};
    static const int sign[24] = {1, -1, -1, 1,  1, -1, -1, 1, 1,  -1, -1, 1,
                                 1, -1, -1, 1,  1, -1, -1, 1, 1,  -1, -1, 1};
    Polynomial det(chart.dim);
    for (int p = 0; p < 24; ++p) {
      Polynomial prod(chart.dim, Rational(sign[p]));
      for (int t = 0; t < 4; ++t) prod = prod * fields[perm[p][t]]->components[key[t]];
      det += prod;
    }
    out += coeff * det;
  }
  return out;
}

DiffeoPair::DiffeoPair(Chart chart, std::vector<Polynomial> forward,
                       std::vector<Polynomial> backward, RationalPoint base_point)
    : chart_(std::move(chart)),
      forward_(std::move(forward)),
      backward_(std::move(backward)),
      base_(std::move(base_point)) {
  const std::size_t n = chart_.dim;
  if (forward_.size() != n || backward_.size() != n || base_.size() != n)
    throw input_error("diffeo_pair: component counts differ from chart dimension");
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial round_trip = backward_[i].compose(forward_);
    if (round_trip != Polynomial::variable(n, i))
      throw precondition_error("diffeo_pair: backward(forward) is not the identity at component " +
                               std::to_string(i));
  }
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial round_trip = forward_[i].compose(backward_);
    if (round_trip != Polynomial::variable(n, i))
      throw precondition_error("diffeo_pair: forward(backward) is not the identity at component " +
                               std::to_string(i));
  }
}

RationalPoint DiffeoPair::image_of_base() const {
  RationalPoint out;
  out.reserve(forward_.size());
  for (const auto& p : forward_) out.push_back(p.evaluate(base_));
  return out;
}

DiffeoPair DiffeoPair::swapped() const { return DiffeoPair(chart_, backward_, forward_, image_of_base()); }

Distribution::Distribution(Chart chart, std::vector<VectorField> generators)
    : chart_(std::move(chart)), generators_(std::move(generators)) {
  for (const auto& g : generators_)
    if (g.chart != chart_) throw input_error("distribution: generator on wrong chart");
  rank_ = pfl::generic_rank(generator_matrix());
}

PolyMatrix Distribution::generator_matrix() const {
  PolyMatrix m(generators_.size(), chart_.dim, chart_.dim);
  for (std::size_t r = 0; r < generators_.size(); ++r)
    for (std::size_t c = 0; c < chart_.dim; ++c) m.at(r, c) = generators_[r].components[c];
  return m;
}

int Distribution::rank_at(const RationalPoint& p) const { return rank_at_point(generator_matrix(), p); }

PfaffianSystem::PfaffianSystem(Chart chart, std::vector<OneForm> generators)
    : chart_(std::move(chart)), generators_(std::move(generators)) {
  for (const auto& g : generators_)
    if (g.chart != chart_) throw input_error("pfaffian_system: generator on wrong chart");
  rank_ = pfl::generic_rank(generator_matrix());
}

PolyMatrix PfaffianSystem::generator_matrix() const {
  PolyMatrix m(generators_.size(), chart_.dim, chart_.dim);
  for (std::size_t r = 0; r < generators_.size(); ++r)
    for (std::size_t c = 0; c < chart_.dim; ++c) m.at(r, c) = generators_[r].components[c];
  return m;
}

int PfaffianSystem::rank_at(const RationalPoint& p) const {
  return rank_at_point(generator_matrix(), p);
}

VectorField lie_bracket(const VectorField& f, const VectorField& g) {
  if (f.chart != g.chart) throw input_error("lie_bracket: chart mismatch");
  const std::size_t n = f.chart.dim;
  std::vector<Polynomial> comps(n, Polynomial(n));
  for (std::size_t j = 0; j < n; ++j) {
    Polynomial acc(n);
    for (std::size_t k = 0; k < n; ++k) {
      if (!f.components[k].is_zero()) acc += f.components[k] * g.components[j].derivative(k);
      if (!g.components[k].is_zero()) acc -= g.components[k] * f.components[j].derivative(k);
    }
    comps[j] = std::move(acc);
  }
  return VectorField(f.chart, std::move(comps));
}

Polynomial pairing(const OneForm& omega, const VectorField& f) {
  if (omega.chart != f.chart) throw input_error("pairing: chart mismatch");
  Polynomial out(f.chart.dim);
  for (std::size_t i = 0; i < f.chart.dim; ++i) out += omega.components[i] * f.components[i];
  return out;
}

TwoForm exterior_derivative(const OneForm& omega) {
  TwoForm d;
  d.chart = omega.chart;
  const std::size_t n = omega.chart.dim;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      d.add(i, j, omega.components[j].derivative(i) - omega.components[i].derivative(j));
  return d;
}

FourFormResidue wedge_two_forms(const TwoForm& a, const TwoForm& b) {
  if (a.chart != b.chart) throw input_error("wedge: chart mismatch");
  FourFormResidue w;
  w.chart = a.chart;
  for (const auto& [ka, ca] : a.components) {
    for (const auto& [kb, cb] : b.components) {
      auto [i, j] = ka;
      auto [k, l] = kb;
      if (i == k || i == l || j == k || j == l) continue;
      // Sort (i,j,k,l) to a strictly increasing quadruple; the sign is the
      // parity of the sorting permutation (pair order inside (i,j), (k,l) is
      // already fixed).
      std::array<std::size_t, 4> idx = {i, j, k, l};
      int sign = 1;
      for (int s = 0; s < 3; ++s)
        for (int t = 0; t < 3 - s; ++t)
          if (idx[t] > idx[t + 1]) {
            std::swap(idx[t], idx[t + 1]);
            sign = -sign;
          }
      w.add(idx, ca * cb * Rational(sign));
    }
  }
  return w;
}

OneForm interior_product(const VectorField& f, const TwoForm& omega2) {
  if (f.chart != omega2.chart) throw input_error("interior_product: chart mismatch");
  const std::size_t n = f.chart.dim;
  std::vector<Polynomial> comps(n, Polynomial(n));
  for (const auto& [key, c] : omega2.components) {
    auto [i, j] = key;
    comps[j] += f.components[i] * c;
    comps[i] -= f.components[j] * c;
  }
  return OneForm(f.chart, std::move(comps));
}

AnnihilatorResult annihilator(const Distribution& d, const RationalPoint& base) {
  if (!d.constant_rank_at(base))
    throw precondition_error("annihilator: rank is not locally constant at the base point");
  KernelBasis kb = polynomial_kernel(d.generator_matrix(), &base);
  std::vector<OneForm> forms;
  forms.reserve(kb.vectors.size());
  for (auto& v : kb.vectors) forms.emplace_back(d.chart(), std::move(v));
  AnnihilatorResult out{PfaffianSystem(d.chart(), std::move(forms)), kb.denominator};
  return out;
}

PerpResult perp(const PfaffianSystem& system, const RationalPoint& base) {
  if (!system.constant_rank_at(base))
    throw precondition_error("perp: rank is not locally constant at the base point");
  if (system.generators().empty()) {
    // Zero system: the perp is the whole tangent bundle.
    std::vector<VectorField> gens;
    for (std::size_t i = 0; i < system.chart().dim; ++i)
      gens.push_back(VectorField::coordinate(system.chart(), i));
    return PerpResult{Distribution(system.chart(), std::move(gens)),
                      Polynomial(system.chart().dim, Rational(1))};
  }
  KernelBasis kb = polynomial_kernel(system.generator_matrix(), &base);
  std::vector<VectorField> gens;
  gens.reserve(kb.vectors.size());
  for (auto& v : kb.vectors) gens.emplace_back(system.chart(), std::move(v));
  return PerpResult{Distribution(system.chart(), std::move(gens)), kb.denominator};
}

VectorField pushforward(const VectorField& f, const DiffeoPair& pair) {
  if (f.chart != pair.chart()) throw input_error("pushforward: chart mismatch");
  const std::size_t n = f.chart.dim;
  const auto& phi = pair.forward();
  const auto& psi = pair.backward();
  // (phi_* f)^i (x) = sum_k (d phi_i / d y_k)(psi(x)) f^k(psi(x))
  std::vector<Polynomial> comps(n, Polynomial(n));
  std::vector<Polynomial> f_pulled(n, Polynomial(n));
  for (std::size_t k = 0; k < n; ++k) f_pulled[k] = f.components[k].compose(psi);
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial acc(n);
    for (std::size_t k = 0; k < n; ++k) {
      Polynomial d = phi[i].derivative(k);
      if (d.is_zero() || f_pulled[k].is_zero()) continue;
      acc += d.compose(psi) * f_pulled[k];
    }
    comps[i] = std::move(acc);
  }
  return VectorField(f.chart, std::move(comps));
}

Distribution pushforward(const Distribution& d, const DiffeoPair& pair) {
  std::vector<VectorField> gens;
  gens.reserve(d.generators().size());
  for (const auto& g : d.generators()) gens.push_back(pushforward(g, pair));
  return Distribution(d.chart(), std::move(gens));
}

}  // namespace pfl
