#include <doctest.h>

#include <algorithm>

#include "diracl2/identities.hpp"
#include "diracl2/parallel.hpp"

using namespace diracl2;

// ========================= exact suite smoke runs =========================

TEST_CASE("core algebra laws hold on seeded trials") {
  for (int n = 1; n <= 4; ++n) {
    const IdentityReport r = verify_core_laws(n, 50, 12345);
    CAPTURE(n);
    CAPTURE(r.counterexample ? r.counterexample->description : "");
    CHECK(r.passed());
    CHECK(r.trials == 50);
    CHECK(r.kind == ScalarKind::ExactRational);
  }
}

TEST_CASE("scalar parts of bar(a) e_j a and bar(a) a e_j vanish") {
  for (int n = 1; n <= 4; ++n) {
    const IdentityReport r = verify_scalar_annihilation(n, 50, 54321);
    CAPTURE(n);
    CHECK(r.passed());
  }
}

TEST_CASE("diagonal Hessian rule on seeded trials") {
  for (int n = 1; n <= 4; ++n) {
    const IdentityReport r = verify_diagonal_hessian_identity(n, 50, 777);
    CAPTURE(n);
    CHECK(r.passed());
  }
}

TEST_CASE("mixed-pair families and assembly") {
  for (int n = 2; n <= 4; ++n) {
    const IdentityReport mixed = verify_mixed_hessian_cases(n, 40, 999);
    CAPTURE(n);
    CAPTURE(mixed.counterexample ? mixed.counterexample->description : "");
    CHECK(mixed.passed());

    const IdentityReport assembly = verify_hessian_assembly(n, 40, 888);
    CAPTURE(assembly.counterexample ? assembly.counterexample->description
                                    : "");
    CHECK(assembly.passed());
  }
}

TEST_CASE("aggregate verify bundle") {
  const auto one = verify_identities(1, 30, 2026);
  CHECK(one.size() == 4);  // mixed-pair suite needs two generators
  const auto two = verify_identities(2, 30, 2026);
  CHECK(two.size() == 5);
  for (const auto& r : two) {
    CAPTURE(r.identity);
    CHECK(r.passed());
  }

  // Same seed, same reports — including across worker caps.
  set_thread_cap(1);
  const auto serial = verify_identities(2, 30, 4242);
  set_thread_cap(4);
  const auto parallel = verify_identities(2, 30, 4242);
  set_thread_cap(0);
  REQUIRE(serial.size() == parallel.size());
  for (std::size_t i = 0; i < serial.size(); ++i) {
    CHECK(serial[i].identity == parallel[i].identity);
    CHECK(serial[i].passes == parallel[i].passes);
    CHECK(serial[i].notes == parallel[i].notes);
    CHECK(serial[i].counterexample.has_value() ==
          parallel[i].counterexample.has_value());
  }
}

// ========================== frozen worked example ==========================
//
// n = 2, alpha = e_1, generator-diagonal Hessian entries c_1 = c_2 = 1:
// only the (2,2) entry survives and the contraction equals -8.

TEST_CASE("hand-worked contraction value -8") {
  HessianStub H = HessianStub::zero(2);
  H.h(1, 1) = Rational(1);
  H.h(2, 2) = Rational(1);
  const auto alpha = Multivector<Rational>::basis(2, generator_blade(1));
  CHECK(hessian_form_bruteforce(alpha, H) == Rational(-8));
  CHECK(hessian_form_closed(alpha, H) == Rational(-8));
}

TEST_CASE("scalar alpha contraction: only even/in or odd/out squares") {
  // alpha = c e_0: for every generator i, i is outside the empty blade and
  // |A| = 0 is even, so nothing is selected: the contraction vanishes no
  // matter the Hessian.
  Rng rng(4001);
  const auto alpha = Multivector<Rational>::scalar(2, Rational(3, 2));
  const HessianStub H = HessianStub::random_symmetric(2, rng);
  CHECK(hessian_form_bruteforce(alpha, H) == Rational(0));
  CHECK(hessian_form_closed(alpha, H) == Rational(0));
}

// ======================== mixed-pair sign oracle ========================

TEST_CASE("mixed pair brute signs equal the literal four-blade product") {
  for (int n = 2; n <= 3; ++n)
    for (int i = 1; i <= n; ++i)
      for (int j = 1; j <= n; ++j) {
        if (i == j) continue;
        const auto pairs = mixed_pairs(n, i, j);
        CHECK(pairs.size() == (std::size_t(1) << n));
        for (const MixedPair& p : pairs) {
          CHECK(p.maskB == (p.maskA ^ generator_blade(i).mask ^
                            generator_blade(j).mask));
          // Literal product bar(e_A) e_i e_B bar(e_j), scalar part.
          const auto eA = Multivector<Rational>::basis(n, Blade{p.maskA});
          const auto eB = Multivector<Rational>::basis(n, Blade{p.maskB});
          const auto ei = Multivector<Rational>::basis(n, generator_blade(i));
          auto ejbar = Multivector<Rational>::basis(n, generator_blade(j));
          ejbar = -ejbar;  // bar of a single generator
          const auto prod = mul(mul(mul(bar(eA), ei), eB), ejbar);
          // The product of four blades is a signed blade; the pair list
          // promises it lands on the scalar.
          CHECK(prod.scalar_part() == Rational(p.bruteSign));
        }
      }
}

TEST_CASE("hand-pinned mixed pair: n=2, i=1, j=2, A empty") {
  const auto pairs = mixed_pairs(2, 1, 2);
  const auto it = std::find_if(pairs.begin(), pairs.end(),
                               [](const MixedPair& p) { return p.maskA == 0; });
  REQUIRE(it != pairs.end());
  CHECK(it->family == MixedFamily::Neither);
  CHECK(it->maskB == 0b11);
  // bar(e_0) e_1 e_12 bar(e_2) = e_1 e_1 e_2 (-e_2) ... = -1.
  CHECK(it->bruteSign == -1);
  CHECK(it->formulaSign == -1);
}

// ===================== double-precision contraction =====================

TEST_CASE("double evaluator matches the exact closed form") {
  Rng rng(4002);
  for (int n = 2; n <= 4; ++n) {
    const HessianContraction contraction(n);
    for (int t = 0; t < 25; ++t) {
      const auto alpha = random_int_multivector(n, rng);
      const HessianStub H = HessianStub::random_symmetric(n, rng);

      Eigen::VectorXd coeffs(Index(1) << n);
      for (Index c = 0; c < coeffs.size(); ++c)
        coeffs[c] = to_double(alpha.coeffs()[c]);
      Eigen::MatrixXd Hd(n + 1, n + 1);
      for (int a = 0; a <= n; ++a)
        for (int b = 0; b <= n; ++b) Hd(a, b) = to_double(H.h(a, b));

      const double exact = to_double(hessian_form_closed(alpha, H));
      CHECK(contraction(coeffs, Hd) ==
            doctest::Approx(exact).epsilon(1e-12));
    }
  }
}

// ================== sampled-field norm decomposition ==================

TEST_CASE("decomposition bookkeeping on a sampled bump") {
  const Grid g = Grid::uniform(1, 33, -1.0, 1.0);
  CliffordField alpha = make_bump(g, 0.2, kScalarBlade);
  {
    const CliffordField second = make_bump(g, 0.3, generator_blade(1));
    alpha.values() += second.values();
  }

  const auto w = WeightSpec::quadratic0(1);
  const DecompositionReport rep = dual_norm_decomposition(alpha, w);
  CHECK(rep.dualNormSq > 0.0);
  CHECK(rep.diracNormSq > 0.0);
  CHECK(rep.laplaceTerm > 0.0);
  // Two dimensions leave no room for mixed generator pairs and the single
  // generator axis has zero Hessian entry under x0^2.
  CHECK(rep.hessianTerm == 0.0);
  CHECK(rep.defectRel ==
        doctest::Approx(std::abs(rep.dualNormSq - rep.diracNormSq -
                                 rep.laplaceTerm - rep.hessianTerm) /
                        rep.dualNormSq)
            .epsilon(1e-12));
  // Second-order stencils on a 33-node grid: the books balance loosely
  // here and tightly in the refinement acceptance run.
  CHECK(rep.defectRel < 0.05);

  // Fields that touch the boundary are rejected.
  CliffordField bad(g);
  bad.values().setOnes();
  CHECK_THROWS_AS(dual_norm_decomposition(bad, w), config_error);
}

TEST_CASE("decomposition defect shrinks at second order with a full-rank "
          "density curvature") {
  // The anisotropic weight is the one catalog entry whose phi varies along
  // generator directions, so its contraction matrix
  // Hess(phi) - grad(phi) grad(phi)^T picks up off-diagonal entries that a
  // bare Hessian would miss; the defect only converges because the gradient
  // outer product is included.
  const Grid base = Grid::uniform(2, 17, -1.0, 1.0);
  const auto w = WeightSpec::aniso_quadratic(2);
  std::vector<double> defects;
  for (int level = 0; level < 3; ++level) {
    const Grid g = base.refined(level);
    CliffordField alpha = make_bump(g, 0.2, kScalarBlade);
    BumpSpec odd;
    odd.component = generator_blade(1);
    odd.margin = 0.25;
    odd.scale = 1.3;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(3);
    c[0] = 0.1;
    odd.center = c;
    alpha.values() += make_bump(g, odd).values();
    BumpSpec even;
    even.component = Blade{0b11};
    even.margin = 0.22;
    even.scale = -0.9;
    alpha.values() += make_bump(g, even).values();
    defects.push_back(dual_norm_decomposition(alpha, w).defectRel);
  }
  const double order = std::log2(defects[1] / defects[2]);
  CHECK(order > 1.7);
  CHECK(order < 2.3);
}

TEST_CASE("estimate inequality on a desk-size example") {
  // || dual(alpha) ||^2 >= integral |alpha|^2 Laplacian(phi) e^-phi.
  const Grid g = Grid::uniform(2, 17, -1.0, 1.0);
  const CliffordField alpha = make_bump(g, 0.25, Blade{0b11});
  for (const char* name : {"zero", "quadratic0", "aniso"}) {
    const auto w = WeightSpec::parse(2, name);
    const DecompositionReport rep = dual_norm_decomposition(alpha, w);
    CAPTURE(name);
    CHECK(rep.dualNormSq >= rep.laplaceTerm * (1.0 - 1e-6) - 1e-12);
  }
}
