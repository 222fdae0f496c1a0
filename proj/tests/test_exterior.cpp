#include "doctest.h"

#include <pfl/bryant.hpp>
#include <pfl/contact.hpp>

#include <random>

using namespace pfl;

namespace {

Polynomial var(const Chart& c, std::size_t i) { return Polynomial::variable(c.dim, i); }
Polynomial con(const Chart& c, long num, long den = 1) {
  return Polynomial(c.dim, rational(num, den));
}

Polynomial random_poly(std::mt19937_64& rng, std::size_t dim, int max_terms = 3,
                       uint32_t max_deg = 2) {
  std::uniform_int_distribution<int> coeff(-3, 3);
  std::uniform_int_distribution<uint32_t> deg(0, max_deg);
  std::uniform_int_distribution<int> terms(1, max_terms);
  Polynomial p(dim);
  for (int k = terms(rng); k > 0; --k) {
    Monomial m(dim);
    std::uniform_int_distribution<std::size_t> pick(0, dim - 1);
    for (uint32_t d = deg(rng); d > 0; --d) m.exponents[pick(rng)] += 1;
    p.add_term(m, Rational(coeff(rng)));
  }
  return p;
}

VectorField random_field(std::mt19937_64& rng, const Chart& chart) {
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < chart.dim; ++i) comps.push_back(random_poly(rng, chart.dim));
  return VectorField(chart, std::move(comps));
}

OneForm random_form(std::mt19937_64& rng, const Chart& chart) {
  std::vector<Polynomial> comps;
  for (std::size_t i = 0; i < chart.dim; ++i) comps.push_back(random_poly(rng, chart.dim));
  return OneForm(chart, std::move(comps));
}

// A random triangular polynomial automorphism fixing the origin, with its
// exact inverse computed by back-substitution.
DiffeoPair random_triangular_pair(std::mt19937_64& rng, const Chart& chart) {
  const std::size_t n = chart.dim;
  std::uniform_int_distribution<int> scale_pick(0, 2);
  std::uniform_int_distribution<int> coeff(-2, 2);
  static const long scales[] = {1, 2, 3};
  std::vector<Polynomial> forward, backward;
  std::vector<Rational> s(n);
  for (std::size_t i = 0; i < n; ++i) {
    s[i] = Rational(scales[scale_pick(rng)]);
    // x_i -> s_i x_i + p_i(x_0..x_{i-1}), p_i with zero constant term
    Polynomial p(n);
    if (i > 0) {
      std::uniform_int_distribution<std::size_t> pick(0, i - 1);
      for (int t = 0; t < 2; ++t) {
        Monomial m(n);
        m.exponents[pick(rng)] += 1;
        if (t == 1) m.exponents[pick(rng)] += 1;
        p.add_term(m, Rational(coeff(rng)));
      }
    }
    forward.push_back(Polynomial::variable(n, i) * s[i] + p);
  }
  // Inverse by back-substitution: x_i = (y_i - p_i(x_<i)) / s_i.
  for (std::size_t i = 0; i < n; ++i) {
    Polynomial expr = Polynomial::variable(n, i);  // y_i
    Polynomial p = forward[i] - Polynomial::variable(n, i) * s[i];
    std::vector<Polynomial> sub;
    for (std::size_t k = 0; k < n; ++k)
      sub.push_back(k < i ? backward[k] : Polynomial::variable(n, k));
    expr -= p.compose(sub);
    backward.push_back(expr * (Rational(1) / s[i]));
  }
  return DiffeoPair(chart, std::move(forward), std::move(backward),
                    RationalPoint(n, Rational(0)));
}

}  // namespace

TEST_CASE("lie bracket examples") {
  // J^1(R,R^1): coordinates x0^0, x1^0, x1^1.
  Chart c = jet_chart(JetSpec{1, 1});
  VectorField k11 = VectorField::coordinate(c, 2);
  VectorField k01(c, {con(c, 1), var(c, 2), Polynomial(c.dim)});
  CHECK(lie_bracket(k11, k01) == VectorField::coordinate(c, 1));
  CHECK(lie_bracket(k01, k01).is_zero());

  std::mt19937_64 rng(77);
  VectorField f = random_field(rng, c);
  CHECK(lie_bracket(f, f).is_zero());
}

TEST_CASE("Kumpera-Ruiz frame brackets on J^2(R,R^2)") {
  // For the regular frame the only nonzero brackets are [k_j^i, k_0^n] = k_j^{i-1}.
  JetSpec spec{2, 2};
  Chart c = jet_chart(spec);
  std::vector<VectorField> frame = canonical_contact_frame(spec);
  const VectorField& drift = frame.back();
  for (int j = 1; j <= 2; ++j) {
    VectorField top = VectorField::coordinate(c, jet_index(spec, j, 2));
    CHECK(lie_bracket(top, drift) == VectorField::coordinate(c, jet_index(spec, j, 1)));
    VectorField mid = VectorField::coordinate(c, jet_index(spec, j, 1));
    CHECK(lie_bracket(mid, drift) == VectorField::coordinate(c, jet_index(spec, j, 0)));
    VectorField low = VectorField::coordinate(c, jet_index(spec, j, 0));
    CHECK(lie_bracket(low, drift).is_zero());
  }
}

TEST_CASE("pairing examples") {
  Chart c = plain_chart(2);
  OneForm dx1 = OneForm::coordinate(c, 0);
  CHECK(pairing(dx1, VectorField::coordinate(c, 0)) == con(c, 1));
  CHECK(pairing(dx1, VectorField::coordinate(c, 1)).is_zero());
  OneForm w(c, {var(c, 1), Polynomial(c.dim)});   // x2 dx1
  VectorField f(c, {var(c, 0), Polynomial(c.dim)});  // x1 d/dx1
  CHECK(pairing(w, f) == var(c, 0) * var(c, 1));
}

TEST_CASE("exterior derivative examples") {
  Chart c = plain_chart(3);
  CHECK(exterior_derivative(OneForm::coordinate(c, 0)).is_zero());

  OneForm x1dx2(c, {Polynomial(3), var(c, 0), Polynomial(3)});
  TwoForm d1 = exterior_derivative(x1dx2);
  CHECK(d1.component(0, 1) == con(c, 1));
  CHECK(d1.components.size() == 1);

  OneForm x2dx1(c, {var(c, 1), Polynomial(3), Polynomial(3)});
  TwoForm d2 = exterior_derivative(x2dx1);
  CHECK(d2.component(0, 1) == con(c, -1));
}

TEST_CASE("wedge of two-forms") {
  Chart c = plain_chart(4);
  TwoForm a, b;
  a.chart = c;
  b.chart = c;
  a.add(0, 1, con(c, 1));
  b.add(2, 3, con(c, 1));
  FourFormResidue w = wedge_two_forms(a, b);
  REQUIRE(w.components.size() == 1);
  CHECK(w.components.begin()->first == std::array<std::size_t, 4>{0, 1, 2, 3});
  CHECK(w.components.begin()->second == con(c, 1));

  TwoForm overlap;
  overlap.chart = c;
  overlap.add(0, 2, con(c, 1));
  CHECK(wedge_two_forms(a, overlap).is_zero());

  // Even-degree commutativity on random pairs.
  std::mt19937_64 rng(1234);
  for (int iter = 0; iter < 10; ++iter) {
    TwoForm p, q;
    p.chart = c;
    q.chart = c;
    std::uniform_int_distribution<std::size_t> idx(0, 3);
    for (int t = 0; t < 3; ++t) {
      p.add(idx(rng), idx(rng), random_poly(rng, 4, 2, 1));
      q.add(idx(rng), idx(rng), random_poly(rng, 4, 2, 1));
    }
    FourFormResidue pq = wedge_two_forms(p, q), qp = wedge_two_forms(q, p);
    CHECK(pq.components == qp.components);
  }
}

TEST_CASE("four-form contraction matches the shuffle formula") {
  Chart c = plain_chart(5);
  std::mt19937_64 rng(4321);
  for (int iter = 0; iter < 8; ++iter) {
    TwoForm a, b;
    a.chart = c;
    b.chart = c;
    std::uniform_int_distribution<std::size_t> idx(0, 4);
    for (int t = 0; t < 3; ++t) {
      a.add(idx(rng), idx(rng), random_poly(rng, 5, 2, 1));
      b.add(idx(rng), idx(rng), random_poly(rng, 5, 2, 1));
    }
    VectorField f1 = random_field(rng, c), f2 = random_field(rng, c);
    VectorField f3 = random_field(rng, c), f4 = random_field(rng, c);
    Polynomial direct = wedge_two_forms(a, b)(f1, f2, f3, f4);
    Polynomial shuffle = a(f1, f2) * b(f3, f4) - a(f1, f3) * b(f2, f4) +
                         a(f1, f4) * b(f2, f3) + b(f1, f2) * a(f3, f4) -
                         b(f1, f3) * a(f2, f4) + b(f1, f4) * a(f2, f3);
    CHECK(direct == shuffle);
  }
}

TEST_CASE("interior product examples") {
  Chart c = plain_chart(3);
  TwoForm w;
  w.chart = c;
  w.add(0, 1, con(c, 1));  // dx1 ^ dx2
  OneForm i1 = interior_product(VectorField::coordinate(c, 0), w);
  CHECK(i1 == OneForm::coordinate(c, 1));
  CHECK(interior_product(VectorField::coordinate(c, 2), w).is_zero());

  std::mt19937_64 rng(999);
  for (int iter = 0; iter < 10; ++iter) {
    TwoForm q;
    q.chart = c;
    std::uniform_int_distribution<std::size_t> idx(0, 2);
    for (int t = 0; t < 2; ++t) q.add(idx(rng), idx(rng), random_poly(rng, 3, 2, 1));
    VectorField f = random_field(rng, c);
    CHECK(pairing(interior_product(f, q), f).is_zero());
  }
}

TEST_CASE("annihilator examples") {
  Chart r3 = plain_chart(3);
  Distribution plane(r3, {VectorField::coordinate(r3, 0), VectorField::coordinate(r3, 1)});
  AnnihilatorResult ann = annihilator(plane, RationalPoint(3, Rational(0)));
  REQUIRE(ann.system.generators().size() == 1);
  CHECK(ann.system.generators()[0] == OneForm::coordinate(r3, 2));

  // Canonical contact system on J^1(R,R^1): annihilator spans dx1^0 - x1^1 dx0^0.
  Distribution contact = canonical_contact_system(JetSpec{1, 1});
  AnnihilatorResult cann = annihilator(contact, RationalPoint(3, Rational(0)));
  REQUIRE(cann.system.generators().size() == 1);
  const OneForm& w = cann.system.generators()[0];
  OneForm expected(contact.chart(),
                   {-Polynomial::variable(3, 2), Polynomial(3, Rational(1)), Polynomial(3)});
  bool proportional = true;
  for (std::size_t i = 0; i < 3 && proportional; ++i)
    for (std::size_t j = i + 1; j < 3 && proportional; ++j)
      proportional =
          (w.components[i] * expected.components[j] - w.components[j] * expected.components[i])
              .is_zero();
  CHECK(proportional);
  for (const auto& g : contact.generators()) CHECK(pairing(w, g).is_zero());

  // Defining property on random constant-rank families, and perp of the
  // annihilator recovering the original span.
  std::mt19937_64 rng(555);
  Chart r4 = plain_chart(4);
  for (int iter = 0; iter < 6; ++iter) {
    Distribution d(r4, {random_field(rng, r4), random_field(rng, r4)});
    RationalPoint base(4, Rational(0));
    if (d.rank_at(base) != d.generic_rank()) continue;
    AnnihilatorResult a = annihilator(d, base);
    for (const auto& omega : a.system.generators())
      for (const auto& g : d.generators()) CHECK(pairing(omega, g).is_zero());
    // The cleared-denominator family can degenerate where the reported locus
    // vanishes; the double-perp span identity is claimed off that locus.
    if (a.valid_locus.evaluate(base) == 0) continue;
    PerpResult back = perp(a.system, base);
    CHECK(span_equal(back.distribution, d));
  }
}

TEST_CASE("annihilator requires locally constant rank") {
  Chart r2 = plain_chart(2);
  Distribution d(r2, {VectorField(r2, {var(r2, 0), Polynomial(2)})});
  CHECK_THROWS_AS(annihilator(d, RationalPoint(2, Rational(0))), precondition_error);
}

TEST_CASE("diffeo pair verification") {
  Chart c = plain_chart(2);
  std::vector<Polynomial> fwd = {var(c, 0) + var(c, 1) * var(c, 1), var(c, 1)};
  std::vector<Polynomial> bwd = {var(c, 0) - var(c, 1) * var(c, 1), var(c, 1)};
  DiffeoPair ok(c, fwd, bwd, RationalPoint(2, Rational(0)));
  CHECK(ok.image_of_base() == RationalPoint(2, Rational(0)));

  std::vector<Polynomial> broken = {var(c, 0) + var(c, 1), var(c, 1)};
  CHECK_THROWS_AS(DiffeoPair(c, fwd, broken, RationalPoint(2, Rational(0))), precondition_error);
}

TEST_CASE("pushforward by the identity and functoriality") {
  Chart c = plain_chart(3);
  std::vector<Polynomial> id = {var(c, 0), var(c, 1), var(c, 2)};
  DiffeoPair identity(c, id, id, RationalPoint(3, Rational(0)));
  std::mt19937_64 rng(2468);
  Distribution d(c, {random_field(rng, c), random_field(rng, c)});
  Distribution same = pushforward(d, identity);
  for (std::size_t i = 0; i < d.generators().size(); ++i)
    CHECK(same.generators()[i] == d.generators()[i]);

  for (int iter = 0; iter < 5; ++iter) {
    DiffeoPair pair = random_triangular_pair(rng, c);
    Distribution fwd = pushforward(d, pair);
    Distribution back = pushforward(fwd, pair.swapped());
    CHECK(span_equal(back, d));
    // Rank preservation, generic and pointwise at corresponding points.
    CHECK(fwd.generic_rank() == d.generic_rank());
    RationalPoint p = {Rational(1), rational(1, 2), Rational(-1)};
    RationalPoint image;
    for (const auto& comp : pair.forward()) image.push_back(comp.evaluate(p));
    CHECK(fwd.rank_at(image) == d.rank_at(p));
  }
}

TEST_CASE("pushforward is natural for the bracket") {
  // phi_*[f,g] = [phi_*f, phi_*g], both sides expanded independently.
  Chart c = plain_chart(3);
  std::mt19937_64 rng(13579);
  for (int iter = 0; iter < 6; ++iter) {
    DiffeoPair pair = random_triangular_pair(rng, c);
    VectorField f = random_field(rng, c), g = random_field(rng, c);
    VectorField lhs = pushforward(lie_bracket(f, g), pair);
    VectorField rhs = lie_bracket(pushforward(f, pair), pushforward(g, pair));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("Jacobi identity on randomized triples") {
  Chart c = plain_chart(3);
  std::mt19937_64 rng(111213);
  for (int iter = 0; iter < 8; ++iter) {
    VectorField f = random_field(rng, c), g = random_field(rng, c), h = random_field(rng, c);
    VectorField acc = lie_bracket(f, lie_bracket(g, h)) + lie_bracket(g, lie_bracket(h, f)) +
                      lie_bracket(h, lie_bracket(f, g));
    CHECK(acc.is_zero());
  }
}

TEST_CASE("d of a gradient form vanishes") {
  Chart c = plain_chart(4);
  std::mt19937_64 rng(141516);
  for (int iter = 0; iter < 8; ++iter) {
    Polynomial p = random_poly(rng, 4, 4, 3);
    std::vector<Polynomial> grad;
    for (std::size_t i = 0; i < 4; ++i) grad.push_back(p.derivative(i));
    CHECK(exterior_derivative(OneForm(c, std::move(grad))).is_zero());
  }
}

TEST_CASE("bracket-form duality") {
  // d omega(f,g) = f(omega(g)) - g(omega(f)) - omega([f,g])
  Chart c = plain_chart(3);
  std::mt19937_64 rng(171819);
  for (int iter = 0; iter < 8; ++iter) {
    OneForm w = random_form(rng, c);
    VectorField f = random_field(rng, c), g = random_field(rng, c);
    Polynomial lhs = exterior_derivative(w)(f, g);
    Polynomial rhs =
        f.apply(pairing(w, g)) - g.apply(pairing(w, f)) - pairing(w, lie_bracket(f, g));
    CHECK(lhs == rhs);
  }
}
