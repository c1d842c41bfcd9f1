#pragma once

#include <optional>
#include <string>
#include <vector>

#include "diracl2/operators.hpp"
#include "diracl2/rational.hpp"
#include "diracl2/rng.hpp"

namespace diracl2 {

// ========================== identity verification ==========================
//
// Exact-rational brute force for the algebraic identities behind the
// weighted-norm decomposition of the dual Dirac operator, plus the
// floating-point decomposition itself on sampled bump fields.  Randomized
// suites report pass counts and, on failure, a reproducible counterexample;
// enumerated suites also record, as errata notes, any tabulated per-case sign
// formula that enumeration contradicts (brute force stays the arbiter).

struct Counterexample {
  std::string description;
  std::uint64_t trial = 0;
  std::vector<std::string> inputs;
};

struct IdentityReport {
  std::string identity;
  int n = 0;
  std::int64_t trials = 0;
  std::int64_t passes = 0;
  std::optional<Counterexample> counterexample;
  std::uint64_t seed = 0;
  ScalarKind kind = ScalarKind::ExactRational;
  std::vector<std::string> notes;

  bool passed() const { return !counterexample && passes == trials; }
};

// ------------------------- Hessian stand-ins -------------------------
//
// Symmetric exact matrices standing in for the Hessian of a weight at a
// point, so the pointwise algebraic content of the decomposition can be
// checked independently of any particular weight function.

struct HessianStub {
  int n = 0;
  Eigen::Matrix<Rational, Eigen::Dynamic, Eigen::Dynamic> h;

  static HessianStub zero(int n);
  static HessianStub random_symmetric(int n, Rng& rng);
  // Zero mixed generator entries, nonpositive generator diagonal; the x_0
  // row and column stay arbitrary (they never obstruct the bound).
  static HessianStub random_admissible(int n, Rng& rng);
};

// The pointwise Hessian-contraction term of the decomposition,
//   sum_{j=1..n} sum_{i=0..n} <tau_{e_0},
//       bar(alpha) e_j alpha bar(e_i) - bar(alpha) alpha e_j bar(e_i)> h_{ji},
// evaluated literally with full products (the arbiter) ...
Rational hessian_form_bruteforce(const Multivector<Rational>& alpha,
                                 const HessianStub& H);
// ... and via the closed form: the diagonal square-sum rule plus the four
// mixed-pair families (zero column against x_0 drops out entirely).
Rational hessian_form_closed(const Multivector<Rational>& alpha,
                             const HessianStub& H);

// ------------------------- mixed-pair machinery -------------------------

// Classification of an ordered generator pair (i, j) against the bar-side
// blade A: which of i, j lie in A.  Each class has its own tabulated sign
// formula; the partner blade is always B = A xor {i} xor {j}.
enum class MixedFamily { FirstOnly, SecondOnly, Both, Neither };

const char* to_string(MixedFamily f);

struct MixedPair {
  std::uint32_t maskA = 0;
  std::uint32_t maskB = 0;
  MixedFamily family = MixedFamily::FirstOnly;
  int bruteSign = 0;    // scalar part of bar(e_A) e_i e_B bar(e_j)
  int formulaSign = 0;  // the tabulated per-case formula prediction
};

// All 2^n contributing pairs for ordered (i, j), i != j, i, j in 1..n.
std::vector<MixedPair> mixed_pairs(int n, int i, int j);

// ------------------------------ suites ------------------------------

// Generator relations, unit, involution grade signs and involutivity,
// conjugation anti-homomorphism, associativity, inner-product laws,
// Cauchy-Schwarz, and the coefficient functionals; all exact.
IdentityReport verify_core_laws(int n, std::int64_t trials,
                                std::uint64_t seed);

// [bar(alpha) e_j alpha]_0 = 0 and [bar(alpha) alpha e_j]_0 = 0 for every
// generator; the reason the x_0 Hessian column drops out.
IdentityReport verify_scalar_annihilation(int n, std::int64_t trials,
                                          std::uint64_t seed);

// Diagonal rule: sum_i <tau_{e_0}, bar(a) e_i a bar(e_i) - bar(a) a> c_i
// equals -2^(n+1) sum_i (selected coefficient squares) c_i.
IdentityReport verify_diagonal_hessian_identity(int n, std::int64_t trials,
                                                std::uint64_t seed);

// Mixed-pair families: enumerated per-case sign check against brute force
// (mismatches recorded as errata), bilinear-form agreement on random
// elements, and vanishing of the grade-1/2 parts of bar(a) a that justifies
// dropping the non-family terms.  Requires n >= 2.
IdentityReport verify_mixed_hessian_cases(int n, std::int64_t trials,
                                          std::uint64_t seed);

// Full assembly: brute-force Hessian contraction equals the closed form on
// random symmetric stubs, and is nonnegative on admissible stubs.
IdentityReport verify_hessian_assembly(int n, std::int64_t trials,
                                       std::uint64_t seed);

// The exact suites behind `verify --n N`; mixed cases are included for
// n >= 2.
std::vector<IdentityReport> verify_identities(int n, std::int64_t trials,
                                              std::uint64_t seed);

// --------------------- sampled-field decomposition ---------------------
//
// Numerical check of the weighted-norm decomposition
//   ||dual(alpha)||^2 = ||Dirac(alpha)||^2
//                       + integral |alpha|_0^2 Laplacian(phi) e^(-phi)
//                       + contraction term against the density curvature
//                         Hess(phi) - grad(phi) grad(phi)^T
// on a compactly supported sampled field.  The gradient outer product in the
// contraction matrix is required for balance whenever phi varies along
// generator directions; for e_0-only weights it drops out of the contraction
// entirely.  All derivatives of alpha are finite differences, so the defect
// shrinks at second order (weights with exact discrete cancellation, e.g. a
// constant density, sit at roundoff instead).

struct DecompositionReport {
  double dualNormSq = 0.0;
  double diracNormSq = 0.0;
  double laplaceTerm = 0.0;
  double hessianTerm = 0.0;
  double defect = 0.0;
  double defectRel = 0.0;
  double maxSpacing = 0.0;
};

DecompositionReport dual_norm_decomposition(const CliffordField& alpha,
                                            const WeightSpec& w);

// The Hessian contraction integrand in doubles: closed-form evaluation with
// precomputed blade tables, one instance per algebra dimension.
class HessianContraction {
 public:
  explicit HessianContraction(int n);

  // alphaCoeffs: 2^n blade coefficients at one point; H: (n+1)^2 Hessian.
  double operator()(const Eigen::Ref<const Eigen::VectorXd>& alphaCoeffs,
                    const Eigen::MatrixXd& H) const;

 private:
  struct PairEntry {
    std::uint32_t a, b;
    double sign;
  };
  int n_;
  std::vector<std::vector<std::uint32_t>> diag_;  // masks per generator
  std::vector<std::vector<PairEntry>> mixed_;     // per ordered (i, j)
};

}  // namespace diracl2
