#pragma once

#include <optional>

#include "diracl2/identities.hpp"
#include "diracl2/operators.hpp"

namespace diracl2 {

// ========================== discrete Dirac solver ==========================
//
// The interior-collocation Dirac system: unknowns are all node values of u,
// equations impose (Dirac u)(x_k) = f(x_k) at interior nodes with central
// differences.  Among all discrete solutions the solver returns the one of
// minimal weighted norm by running conjugate gradients on the normal
// equations of the weighted adjoint; the returned u then lies in the range
// of that adjoint, which is what makes the norm bound certifiable.

class DiscreteDiracOperator {
 public:
  DiscreteDiracOperator(Grid grid, WeightSpec weight);

  const Grid& grid() const { return grid_; }
  const WeightSpec& weight() const { return weight_; }

  Index domain_size() const;  // all nodes x components
  Index range_size() const;   // interior nodes x components

  // L u: central-difference Dirac applied at interior nodes.
  void apply(const Eigen::VectorXd& u, Eigen::VectorXd& out) const;
  // Plain transpose of `apply`.
  void apply_transpose(const Eigen::VectorXd& v, Eigen::VectorXd& out) const;
  // Weighted adjoint: W_domain^(-1) L^T W_range, the operator whose range
  // the minimal-norm solution lives in.
  void apply_adjoint(const Eigen::VectorXd& v, Eigen::VectorXd& out) const;

  // Weighted inner products (quadrature weight times e^(-phi), scaled by
  // 2^n so they match the field-level norms).
  double dot_domain(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
  double dot_range(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;

  // Gather f at interior nodes into the range layout.
  Eigen::VectorXd restrict_interior(const CliffordField& f) const;

  const Eigen::VectorXd& domain_weights() const { return rhoDomain_; }
  const Eigen::VectorXd& range_weights() const { return rhoRange_; }

 private:
  Grid grid_;
  WeightSpec weight_;
  Index comps_;
  std::vector<GeneratorAction> actions_;      // left e_i tables
  std::vector<Index> interiorOf_;             // node -> interior index or -1
  Eigen::VectorXd rhoDomain_;                 // per node
  Eigen::VectorXd rhoRange_;                  // per interior node
};

struct SolveOptions {
  double tol = 1e-10;       // relative residual target
  Index maxIterations = 0;  // 0: 10 * sqrt(#unknowns)
};

struct SolveReport {
  bool converged = false;
  Index iterations = 0;
  double relResidual = 0.0;
  double normUSqWeighted = 0.0;            // ||u||_phi^2
  std::optional<double> rhsFunctional;     // integral |f|_0^2/Lap(phi) e^(-phi)
  // ||u||_phi^2 / (2^(2n) * rhsFunctional): the general existence bound.
  std::optional<double> boundRatioScaled;
  // ||u||_phi^2 / rhsFunctional: the sharper two-dimensional bound (n = 1).
  std::optional<double> boundRatioPlane;
};

// Minimal-weighted-norm solve of the interior Dirac system.  Never fabricates
// an answer: on non-convergence the report says so and u is the best iterate.
std::pair<CliffordField, SolveReport> solve_min_norm(
    const CliffordField& f, const WeightSpec& w, const SolveOptions& opts = {});

// Weak-solution defect against a smooth compactly supported test field:
//   integral [ alpha f + (alpha Dirac) u ] dx
// which tends to zero when u solves Dirac u = f weakly.
Multivector<double> weak_defect(const CliffordField& u, const CliffordField& f,
                                const CliffordField& alpha);

// The Cauchy kernel bar(x)/(omega * |x|^(n+1)) sampled away from the origin;
// nodes with |x| <= exclusionRadius are zeroed.  The origin must lie inside
// the open box.
CliffordField cauchy_kernel(const Grid& grid, double exclusionRadius);

// Surface measure of the unit sphere in R^(n+1).
double unit_sphere_area(int dimension);

// Plain-Lebesgue bound certificate on a slab a <= x_0 <= b for the
// x_0^2 weight: compares integral |u|_0^2 dx against
// 2^(2n) * c(a,b) * integral |f|_0^2 dx with c(a,b) = e^(max(a^2,b^2)) / 2.
struct SlabBound {
  double a = 0.0, b = 0.0;
  double cab = 0.0;
  double plainNormUSq = 0.0;
  double plainNormFSq = 0.0;
  double ratio = 0.0;
};

SlabBound slab_bound_report(const CliffordField& u, const CliffordField& f,
                            const WeightSpec& w);

// Test helper: component of r orthogonal (in the domain inner product) to
// the operator's adjoint range; used to certify minimality of solutions.
Eigen::VectorXd null_space_component(const DiscreteDiracOperator& op,
                                     const Eigen::VectorXd& r, double tol,
                                     Index maxIterations);

}  // namespace diracl2
