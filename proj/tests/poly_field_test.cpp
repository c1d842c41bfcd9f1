#include <doctest.h>

#include "diracl2/poly_field.hpp"

using namespace diracl2;

// ========================= polynomial plumbing =========================

TEST_CASE("polynomial arithmetic, derivative, eval") {
  // p = 2 x0^2 x1 - 3 x1
  Polynomial p(2);
  p.add_term({2, 1}, 2.0);
  p.add_term({0, 1}, -3.0);

  Eigen::Vector2d x(0.5, 2.0);
  CHECK(p.eval(x) == doctest::Approx(2.0 * 0.25 * 2.0 - 6.0));

  const Polynomial d0 = p.derivative(0);  // 4 x0 x1
  CHECK(d0.eval(x) == doctest::Approx(4.0));
  const Polynomial d1 = p.derivative(1);  // 2 x0^2 - 3
  CHECK(d1.eval(x) == doctest::Approx(-2.5));

  // (x0 + x1)(x0 - x1) = x0^2 - x1^2; cancelling terms are pruned.
  Polynomial a(2), b(2);
  a.add_term({1, 0}, 1.0);
  a.add_term({0, 1}, 1.0);
  b.add_term({1, 0}, 1.0);
  b.add_term({0, 1}, -1.0);
  const Polynomial prod = a * b;
  CHECK(prod.terms().size() == 2);
  CHECK(prod.eval(x) == doctest::Approx(0.25 - 4.0));

  const Polynomial zero = a - a;
  CHECK(zero.is_zero());
}

// ==================== symbolic field calculus laws ====================
//
// With integer coefficients and degree <= 4, every operation below is exact
// in double arithmetic, so the identities are coefficient equalities.

namespace {

double defect(const PolyField& a, const PolyField& b) {
  return (a - b).max_abs_coeff();
}

// Left-multiplication field by the generator word of `blade`.
PolyField constant_blade_field(int n, Blade blade) {
  PolyField f = PolyField::zero(n);
  f.comp(static_cast<Index>(blade.mask)) = Polynomial::constant(n + 1, 1.0);
  return f;
}

}  // namespace

TEST_CASE("evaluation commutes with the Clifford structure") {
  Rng rng(31);
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 20; ++t) {
      const PolyField u = PolyField::random(n, 3, rng);
      const PolyField v = PolyField::random(n, 3, rng);
      Eigen::VectorXd x(n + 1);
      for (int a = 0; a <= n; ++a) x[a] = rng.next_unit() * 2.0 - 1.0;

      CHECK(norm0((u + v).eval(x) - (u.eval(x) + v.eval(x))) <=
            1e-12 * (1.0 + norm0(u.eval(x)) + norm0(v.eval(x))));
      CHECK(norm0((u * v).eval(x) - mul(u.eval(x), v.eval(x))) <=
            1e-12 * (1.0 + norm0(u.eval(x)) * norm0(v.eval(x))));
      CHECK(norm0(u.bar().eval(x) - bar(u.eval(x))) == 0.0);
    }
}

TEST_CASE("conjugation rule: bar(Dirac u) = bar(u) Dirac-bar from the right") {
  Rng rng(32);
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 100; ++t) {
      const PolyField u = PolyField::random(n, 4, rng);
      // bar(D-bar u) = bar(u) D (right, conjugated)
      CHECK(defect(u.dirac(Side::Left, false).bar(),
                   u.bar().dirac(Side::Right, true)) == 0.0);
      // bar(D u) = bar(u) D-bar (right, plain)
      CHECK(defect(u.dirac(Side::Left, true).bar(),
                   u.bar().dirac(Side::Right, false)) == 0.0);
    }
}

TEST_CASE("product rule with the commutator correction") {
  Rng rng(33);
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 100; ++t) {
      const PolyField u = PolyField::random(n, 2, rng);
      const PolyField v = PolyField::random(n, 2, rng);

      // D-bar(uv) = (D-bar u) v + u (D-bar v)
      //             + sum_j (e_j u - u e_j) d_j v.
      PolyField rhs = u.dirac(Side::Left, false) * v +
                      u * v.dirac(Side::Left, false);
      for (int j = 1; j <= n; ++j) {
        const PolyField commutator =
            u.mul_generator(j, Side::Left) - u.mul_generator(j, Side::Right);
        rhs = rhs + commutator * v.derivative(j);
      }
      CHECK(defect((u * v).dirac(Side::Left, false), rhs) == 0.0);
    }
}

TEST_CASE("Dirac operators factor the Laplacian, both orders") {
  Rng rng(34);
  for (int n = 1; n <= 3; ++n)
    for (int t = 0; t < 100; ++t) {
      const PolyField u = PolyField::random(n, 4, rng);
      const PolyField lap = u.laplacian();
      CHECK(defect(u.dirac(Side::Left, true).dirac(Side::Left, false), lap) ==
            0.0);
      CHECK(defect(u.dirac(Side::Left, false).dirac(Side::Left, true), lap) ==
            0.0);
    }
}

TEST_CASE("x0 + e1 x1 is annihilated by the left Dirac operator") {
  PolyField u = PolyField::zero(1);
  u.comp(0) = Polynomial::monomial(2, {1, 0}, 1.0);  // x0 on e0
  u.comp(1) = Polynomial::monomial(2, {0, 1}, 1.0);  // x1 on e1
  const PolyField d = u.dirac(Side::Left, false);
  CHECK(d.max_abs_coeff() == 0.0);

  // The conjugated operator does not annihilate it.
  CHECK(u.dirac(Side::Left, true).max_abs_coeff() == 2.0);
}

TEST_CASE("generator multiplication fields match the algebra") {
  Rng rng(35);
  const int n = 2;
  for (int t = 0; t < 20; ++t) {
    const PolyField u = PolyField::random(n, 3, rng);
    Eigen::VectorXd x(n + 1);
    for (int a = 0; a <= n; ++a) x[a] = rng.next_unit() - 0.5;
    for (int j = 0; j <= n; ++j) {
      const auto ej = Multivector<double>::basis(n, generator_blade(j));
      CHECK(norm0(u.mul_generator(j, Side::Left).eval(x) -
                  mul(ej, u.eval(x))) == 0.0);
      CHECK(norm0(u.mul_generator(j, Side::Right).eval(x) -
                  mul(u.eval(x), ej)) == 0.0);
    }
  }
}

TEST_CASE("constant blade fields multiply like blades") {
  const int n = 2;
  const PolyField e1 = constant_blade_field(n, generator_blade(1));
  const PolyField e2 = constant_blade_field(n, generator_blade(2));
  const PolyField e12 = constant_blade_field(n, Blade{0b11});
  CHECK(defect(e1 * e2, e12) == 0.0);
  CHECK(defect(e1 * e1 + constant_blade_field(n, kScalarBlade),
               PolyField::zero(n)) == 0.0);
}
