#pragma once

#include <string>
#include <vector>

#include <Eigen/Core>

#include "diracl2/grid.hpp"
#include "diracl2/multivector.hpp"

namespace diracl2 {

// ============================ weight functions ============================
//
// Smooth weights phi for the measure e^(-phi) dx, restricted to a closed-form
// catalog so that gradients and Hessians are exact.  The sufficient condition
// for the existence bound ("admissible" below) asks for a nonnegative
// Laplacian, vanishing mixed second derivatives among the generator axes,
// and nonpositive pure second derivatives along the generator axes; the
// x_0 axis is unconstrained apart from the Laplacian.

enum class WeightFamily {
  Zero,            // phi = 0 (plain Lebesgue measure)
  Quadratic0,      // phi = x_0^2
  AnisoQuadratic,  // phi = (n+1) x_0^2 - sum_i x_i^2, Laplacian = 2
  AxialPoly        // phi = p(x_0) for a caller-supplied polynomial p
};

class WeightSpec {
 public:
  static WeightSpec zero(int n);
  static WeightSpec quadratic0(int n);
  static WeightSpec aniso_quadratic(int n);
  // coeffs are p's coefficients in ascending degree order.
  static WeightSpec axial_poly(int n, std::vector<double> coeffs);

  WeightFamily family() const { return family_; }
  int n() const { return n_; }
  const std::vector<double>& poly_coeffs() const { return coeffs_; }

  double phi(const Eigen::VectorXd& x) const;
  Eigen::VectorXd grad_phi(const Eigen::VectorXd& x) const;
  Eigen::MatrixXd hessian(const Eigen::VectorXd& x) const;
  double laplacian(const Eigen::VectorXd& x) const;

  // True when no mixed second derivative is ever nonzero (all catalog
  // families), letting assemblers skip the cross-term machinery.
  bool diagonal_hessian() const { return true; }

  // The conjugated gradient paravector D(phi) = d0(phi) e_0 - sum_i di(phi) e_i.
  Multivector<double> conjugated_gradient(const Eigen::VectorXd& x) const;

  // Checks the sufficient hypotheses for the existence bound over the given
  // box, sampling the x_0 axis for the polynomial family (the other families
  // are decided structurally).  On failure *why names the violated clause.
  bool admissible_for_bound(const Grid& grid, std::string* why = nullptr) const;

  // Stable lowercase identifier used by reports and the CLI grammar.
  std::string name() const;

  // Parses "zero" | "quadratic0" | "aniso" | "axialpoly:c0,c1,..." .
  static WeightSpec parse(int n, const std::string& text);

 private:
  WeightSpec(WeightFamily f, int n, std::vector<double> coeffs);

  double p(double t, int derivative) const;  // AxialPoly helper

  WeightFamily family_;
  int n_;
  std::vector<double> coeffs_;
};

}  // namespace diracl2
