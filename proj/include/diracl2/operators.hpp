#pragma once

#include <optional>

#include "diracl2/field.hpp"
#include "diracl2/weight.hpp"

namespace diracl2 {

// ===================== generator multiplication table =====================
//
// Left or right multiplication by a (possibly conjugated) generator is a
// signed permutation of blade components.  These tables drive every grid
// operator, so they are computed once per (n, generator, side, conjugation).

struct GeneratorAction {
  // Component c of the input contributes sign[c] times to component
  // target[c] of the output.
  std::vector<int> target;
  std::vector<double> sign;
};

GeneratorAction generator_action(int n, int generator, Side side,
                                 bool conjugated);

// ========================= finite differences =========================
//
// Second-order stencils throughout: central in the interior, one-sided
// three-point first derivatives and four-point second derivatives on the
// faces (falling back to the uncentered three-point second derivative when
// an axis has only three nodes).

// d/dx_axis applied to every blade component.
CliffordField axis_derivative(const CliffordField& f, int axis);

// Sum over axes i of e_i * df/dx_i (Side::Left) or df/dx_i * e_i
// (Side::Right); `conjugated` replaces e_i by its bar image (e_0 fixed,
// e_i negated).
CliffordField dirac(const CliffordField& f, Side side = Side::Left,
                    bool conjugated = false);

// Componentwise sum of pure second derivatives.
CliffordField laplacian(const CliffordField& f);

// ====================== weighted integrals ======================

// (f, g)_phi = integral of bar(f(x)) g(x) e^(-phi(x)) dx by trapezoid
// quadrature; an algebra element.
Multivector<double> weighted_inner(const CliffordField& f,
                                   const CliffordField& g,
                                   const WeightSpec& w);

// ||f||_phi^2 = integral of |f(x)|_0^2 e^(-phi(x)) dx (scalar fast path).
double weighted_norm_sq(const CliffordField& f, const WeightSpec& w);

// integral of f(x) g(x) dx with the plain Lebesgue measure and no
// conjugation; building block for weak-solution defects.
Multivector<double> integral_product(const CliffordField& f,
                                     const CliffordField& g);

// integral of |f(x)|_0^2 dx.
double plain_norm_sq(const CliffordField& f);

// integral of |f|_0^2 / laplacian(phi) e^(-phi) dx.  Nodes where f vanishes
// contribute zero; a node with f != 0 and laplacian(phi) <= 0 makes the
// integrand undefined and returns nullopt.
std::optional<double> rhs_functional(const CliffordField& f,
                                     const WeightSpec& w);

// The formal weighted adjoint of the Dirac operator, evaluated with exact
// weight derivatives and finite-difference field derivatives:
//   alpha * D(phi) - D(alpha).
CliffordField dual_operator_analytic(const CliffordField& alpha,
                                     const WeightSpec& w);

// ========================= bump construction =========================

struct BumpSpec {
  Blade component = kScalarBlade;
  double margin = 0.2;  // fraction of each axis length kept identically zero
  double scale = 1.0;
  // Optional support center per axis; defaults to the box center.  The
  // support is the centered product of intervals of half-width
  // (1/2 - margin) * axis length and must stay inside the open box.
  std::optional<Eigen::VectorXd> center;
};

// Smooth compactly supported field: scale * prod_a g((x_a - c_a)/w_a) on the
// blade component, with g the standard exp(-1/(1-t^2)) profile; identically
// zero outside the support, in particular on a margin-wide boundary collar.
CliffordField make_bump(const Grid& grid, const BumpSpec& spec);
CliffordField make_bump(const Grid& grid, double margin, Blade component);

// True when the outermost node layer of every face carries exactly zero on
// every component: the discrete form of "compactly supported inside".
bool vanishes_on_boundary(const CliffordField& f);

}  // namespace diracl2
