#include <doctest.h>

#include <cmath>

#include "diracl2/operators.hpp"
#include "diracl2/poly_field.hpp"

using namespace diracl2;

namespace {

// Sample a symbolic field at every node.
CliffordField sample(const Grid& g, const PolyField& u) {
  CliffordField f(g);
  for (Index k = 0; k < g.num_nodes(); ++k) f.set(k, u.eval(g.point(k)));
  return f;
}

double max_abs_diff(const CliffordField& a, const CliffordField& b) {
  return (a.values() - b.values()).cwiseAbs().maxCoeff();
}

}  // namespace

// ===================== generator action tables =====================

TEST_CASE("generator actions are the corresponding algebra products") {
  Rng rng(41);
  for (int n = 1; n <= 4; ++n)
    for (int t = 0; t < 10; ++t) {
      Multivector<double> v(n);
      for (Index i = 0; i < v.dim(); ++i)
        v.coeffs()[i] = rng.next_unit() * 4.0 - 2.0;
      for (int i = 0; i <= n; ++i)
        for (Side side : {Side::Left, Side::Right})
          for (bool conj : {false, true}) {
            const GeneratorAction act = generator_action(n, i, side, conj);
            Multivector<double> got(n);
            for (Index c = 0; c < v.dim(); ++c)
              got.coeffs()[act.target[static_cast<std::size_t>(c)]] +=
                  act.sign[static_cast<std::size_t>(c)] * v.coeffs()[c];

            auto gen = Multivector<double>::basis(n, generator_blade(i));
            if (conj && i >= 1) gen = -gen;  // bar image of e_i
            const auto want =
                side == Side::Left ? mul(gen, v) : mul(v, gen);
            CHECK(norm0(got - want) <= 1e-14);
          }
    }
}

// ======================= stencil exactness =======================

TEST_CASE("axis derivative is exact on quadratics, faces included") {
  Rng rng(42);
  for (int n : {1, 2}) {
    const Grid g = Grid::uniform(n, 6, -1.0, 1.5);
    for (int t = 0; t < 10; ++t) {
      const PolyField u = PolyField::random(n, 2, rng);
      const CliffordField f = sample(g, u);
      for (int a = 0; a <= n; ++a) {
        const CliffordField want = sample(g, u.derivative(a));
        const CliffordField got = axis_derivative(f, a);
        CHECK(max_abs_diff(got, want) <= 1e-11);
      }
    }
  }
}

TEST_CASE("laplacian stencils are exact on cubics when four nodes exist") {
  Rng rng(43);
  const Grid g = Grid::uniform(1, 6, -1.0, 1.0);
  for (int t = 0; t < 10; ++t) {
    const PolyField u = PolyField::random(1, 3, rng);
    CHECK(max_abs_diff(laplacian(sample(g, u)), sample(g, u.laplacian())) <=
          1e-10);
  }
  // Three-node axes fall back to the uncentered quadratic stencil.
  const Grid tiny = Grid::uniform(1, 3, -1.0, 1.0);
  const PolyField q = PolyField::random(1, 2, rng);
  CHECK(max_abs_diff(laplacian(sample(tiny, q)), sample(tiny, q.laplacian())) <=
        1e-11);
}

TEST_CASE("grid Dirac operators match the symbolic ones on quadratics") {
  Rng rng(44);
  for (int n : {1, 2}) {
    const Grid g = Grid::uniform(n, 5, -1.0, 1.0);
    for (int t = 0; t < 10; ++t) {
      const PolyField u = PolyField::random(n, 2, rng);
      const CliffordField f = sample(g, u);
      for (Side side : {Side::Left, Side::Right})
        for (bool conj : {false, true})
          CHECK(max_abs_diff(dirac(f, side, conj),
                             sample(g, u.dirac(side, conj))) <= 1e-11);
    }
  }
}

TEST_CASE("sampled monogenic field is annihilated to round-off") {
  // u = x0 + e1 x1 satisfies Dirac-bar u = 0 identically.
  const Grid g = Grid::uniform(1, 9, -1.0, 1.0);
  PolyField u = PolyField::zero(1);
  u.comp(0) = Polynomial::monomial(2, {1, 0}, 1.0);
  u.comp(1) = Polynomial::monomial(2, {0, 1}, 1.0);
  const CliffordField d = dirac(sample(g, u), Side::Left, false);
  CHECK(d.values().cwiseAbs().maxCoeff() <= 1e-13);
}

// ========================= weighted integrals =========================

TEST_CASE("weighted inner product matches a direct multivector sum") {
  Rng rng(45);
  const Grid g = Grid::uniform(2, 4, -1.0, 1.0);
  const auto w = WeightSpec::quadratic0(2);
  CliffordField f(g), h(g);
  for (Index k = 0; k < g.num_nodes(); ++k)
    for (Index c = 0; c < f.components(); ++c) {
      f.values()(c, k) = rng.next_unit() - 0.5;
      h.values()(c, k) = rng.next_unit() - 0.5;
    }

  auto direct = Multivector<double>::zero(2);
  for (Index k = 0; k < g.num_nodes(); ++k) {
    const double rho = g.quad_weight(k) * std::exp(-w.phi(g.point(k)));
    direct += rho * mul(bar(f.at(k)), h.at(k));
  }
  const auto got = weighted_inner(f, h, w);
  CHECK(norm0(got - direct) <= 1e-12 * (1.0 + norm0(direct)));

  // The norm is the tau_{e_0} diagonal of the inner product.
  CHECK(weighted_norm_sq(f, w) ==
        doctest::Approx(tau(kScalarBlade, weighted_inner(f, f, w)))
            .epsilon(1e-10));
}

TEST_CASE("plain quadrature on hand-integrable fields") {
  // f = 1*e0 on [-1,1]^2, n = 1: integral |f|_0^2 = 2^1 * area = 8.
  const Grid g = Grid::uniform(1, 17, -1.0, 1.0);
  CliffordField f(g);
  f.values().row(0).setOnes();
  CHECK(plain_norm_sq(f) == doctest::Approx(8.0));

  // Trapezoid is exact on bilinear integrands: f = x0 * x1 * e1 on
  // [0,1]^2 -> integral f dx = 1/4 on component e1.
  const Grid gb(1, {5, 5}, Eigen::Vector2d(0.0, 0.0), Eigen::Vector2d(1.0, 1.0));
  CliffordField fb(gb);
  for (Index k = 0; k < gb.num_nodes(); ++k) {
    const auto x = gb.point(k);
    fb.values()(1, k) = x[0] * x[1];
  }
  CliffordField ones(gb);
  ones.values().row(0).setOnes();
  const auto ip = integral_product(ones, fb);
  CHECK(ip[generator_blade(1)] == doctest::Approx(0.25));
  CHECK(ip[kScalarBlade] == doctest::Approx(0.0));
}

TEST_CASE("rhs functional: defined, zero, and undefined cases") {
  const Grid g = Grid::uniform(1, 9, -1.0, 1.0);
  const CliffordField f = make_bump(g, 0.2, kScalarBlade);
  const CliffordField zero(g);

  // Laplacian(phi) = 2 everywhere: the functional is ||f||_phi^2 / 2.
  const auto w2 = WeightSpec::quadratic0(1);
  const auto v = rhs_functional(f, w2);
  REQUIRE(v.has_value());
  CHECK(*v == doctest::Approx(weighted_norm_sq(f, w2) / 2.0));

  // Zero weight: nonzero f sits on Laplacian 0 -> undefined.
  CHECK_FALSE(rhs_functional(f, WeightSpec::zero(1)).has_value());
  // But f = 0 contributes nothing wherever it vanishes.
  const auto z = rhs_functional(zero, WeightSpec::zero(1));
  REQUIRE(z.has_value());
  CHECK(*z == 0.0);
}

TEST_CASE("dual operator with zero weight is minus the conjugated Dirac") {
  const Grid g = Grid::uniform(2, 5, -1.0, 1.0);
  const CliffordField alpha = make_bump(g, 0.2, generator_blade(1));
  const CliffordField lhs = dual_operator_analytic(alpha, WeightSpec::zero(2));
  CliffordField rhs = dirac(alpha, Side::Left, true);
  rhs.values() *= -1.0;
  CHECK(max_abs_diff(lhs, rhs) == 0.0);
}

TEST_CASE("dual operator picks up alpha * D(phi) for the x0^2 weight") {
  const Grid g = Grid::uniform(1, 7, -1.0, 1.0);
  const auto w = WeightSpec::quadratic0(1);
  const CliffordField alpha = make_bump(g, 0.2, generator_blade(1));
  const CliffordField dual = dual_operator_analytic(alpha, w);
  const CliffordField d = dirac(alpha, Side::Left, true);
  // At each node: dual = alpha * (2 x0 e_0) - D alpha.
  for (Index k = 0; k < g.num_nodes(); ++k) {
    const double x0 = g.point(k)[0];
    const auto want = alpha.at(k) * (2.0 * x0) - d.at(k);
    CHECK(norm0(dual.at(k) - want) <= 1e-13);
  }
}

// ============================== bumps ==============================

TEST_CASE("bumps are compactly supported inside the box") {
  const Grid g = Grid::uniform(2, 9, -1.0, 1.0);
  const CliffordField b = make_bump(g, 0.2, generator_blade(2));
  CHECK(vanishes_on_boundary(b));
  // Peak at the center node, on the requested component only.
  Index centerNode = 0;
  for (int a = 0; a < g.axes(); ++a) centerNode += 4 * g.stride(a);
  CHECK(b.values()(0b10, centerNode) ==
        doctest::Approx(std::exp(-3.0)));  // profile(0)^3
  CHECK(b.values().row(0).isZero());
  CHECK(b.values().row(1).isZero());
  CHECK(b.values().row(3).isZero());

  // Custom center and scale shift the peak.
  BumpSpec spec;
  spec.component = kScalarBlade;
  spec.margin = 0.3;
  spec.scale = 2.0;
  spec.center = Eigen::Vector3d(0.25, 0.0, 0.0);
  const CliffordField shifted = make_bump(g, spec);
  CHECK(vanishes_on_boundary(shifted));
  CHECK(shifted.values()(0, centerNode + 1 * g.stride(0)) ==
        doctest::Approx(2.0 * std::exp(-3.0)));

  CHECK_THROWS_AS(make_bump(g, 0.6, kScalarBlade), config_error);
  spec.center = Eigen::Vector3d(0.9, 0.0, 0.0);  // support leaves the box
  CHECK_THROWS_AS(make_bump(g, spec), config_error);

  CliffordField touches(g);
  touches.values()(0, 0) = 1.0;  // corner node
  CHECK_FALSE(vanishes_on_boundary(touches));
}
