#include "diracl2/weight.hpp"

#include <cmath>
#include <sstream>

namespace diracl2 {

WeightSpec::WeightSpec(WeightFamily f, int n, std::vector<double> coeffs)
    : family_(f), n_(n), coeffs_(std::move(coeffs)) {
  require(n >= 1 && n <= kMaxAlgebraN, "weight: n out of range");
  if (family_ == WeightFamily::AxialPoly)
    require(!coeffs_.empty(), "axialpoly weight needs coefficients");
}

WeightSpec WeightSpec::zero(int n) {
  return WeightSpec(WeightFamily::Zero, n, {});
}
WeightSpec WeightSpec::quadratic0(int n) {
  return WeightSpec(WeightFamily::Quadratic0, n, {});
}
WeightSpec WeightSpec::aniso_quadratic(int n) {
  return WeightSpec(WeightFamily::AnisoQuadratic, n, {});
}
WeightSpec WeightSpec::axial_poly(int n, std::vector<double> coeffs) {
  return WeightSpec(WeightFamily::AxialPoly, n, std::move(coeffs));
}

double WeightSpec::p(double t, int derivative) const {
  // Value of p, p', or p'' at t, coefficients in ascending order.
  double acc = 0.0;
  for (int d = static_cast<int>(coeffs_.size()) - 1; d >= derivative; --d) {
    double factor = 1.0;
    for (int k = 0; k < derivative; ++k) factor *= static_cast<double>(d - k);
    acc = acc * t + coeffs_[static_cast<std::size_t>(d)] * factor;
  }
  return acc;
}

double WeightSpec::phi(const Eigen::VectorXd& x) const {
  switch (family_) {
    case WeightFamily::Zero:
      return 0.0;
    case WeightFamily::Quadratic0:
      return x[0] * x[0];
    case WeightFamily::AnisoQuadratic: {
      double s = static_cast<double>(n_ + 1) * x[0] * x[0];
      for (int i = 1; i <= n_; ++i) s -= x[i] * x[i];
      return s;
    }
    case WeightFamily::AxialPoly:
      return p(x[0], 0);
  }
  return 0.0;
}

Eigen::VectorXd WeightSpec::grad_phi(const Eigen::VectorXd& x) const {
  Eigen::VectorXd g = Eigen::VectorXd::Zero(n_ + 1);
  switch (family_) {
    case WeightFamily::Zero:
      break;
    case WeightFamily::Quadratic0:
      g[0] = 2.0 * x[0];
      break;
    case WeightFamily::AnisoQuadratic:
      g[0] = 2.0 * static_cast<double>(n_ + 1) * x[0];
      for (int i = 1; i <= n_; ++i) g[i] = -2.0 * x[i];
      break;
    case WeightFamily::AxialPoly:
      g[0] = p(x[0], 1);
      break;
  }
  return g;
}

Eigen::MatrixXd WeightSpec::hessian(const Eigen::VectorXd& x) const {
  Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n_ + 1, n_ + 1);
  switch (family_) {
    case WeightFamily::Zero:
      break;
    case WeightFamily::Quadratic0:
      h(0, 0) = 2.0;
      break;
    case WeightFamily::AnisoQuadratic:
      h(0, 0) = 2.0 * static_cast<double>(n_ + 1);
      for (int i = 1; i <= n_; ++i) h(i, i) = -2.0;
      break;
    case WeightFamily::AxialPoly:
      h(0, 0) = p(x[0], 2);
      break;
  }
  return h;
}

double WeightSpec::laplacian(const Eigen::VectorXd& x) const {
  switch (family_) {
    case WeightFamily::Zero:
      return 0.0;
    case WeightFamily::Quadratic0:
      return 2.0;
    case WeightFamily::AnisoQuadratic:
      return 2.0;  // 2(n+1) - 2n
    case WeightFamily::AxialPoly:
      return p(x[0], 2);
  }
  return 0.0;
}

Multivector<double> WeightSpec::conjugated_gradient(
    const Eigen::VectorXd& x) const {
  const Eigen::VectorXd g = grad_phi(x);
  Multivector<double> out(n_);
  out[generator_blade(0)] = g[0];
  for (int i = 1; i <= n_; ++i) out[generator_blade(i)] = -g[i];
  return out;
}

bool WeightSpec::admissible_for_bound(const Grid& grid,
                                      std::string* why) const {
  require(grid.n() == n_, "weight/grid algebra mismatch");
  // All families: mixed second derivatives vanish and the generator-axis
  // pure second derivatives are <= 0 by construction (0, 0, -2, 0).  The
  // only data-dependent clause is Laplacian >= 0 for the polynomial family,
  // checked at the grid's x_0 stations.
  if (family_ == WeightFamily::AxialPoly) {
    for (Index i = 0; i < grid.extent(0); ++i) {
      const double t = grid.coordinate(0, i);
      if (p(t, 2) < 0.0) {
        if (why != nullptr) {
          std::ostringstream os;
          os << "laplacian of phi is negative at x0=" << t;
          *why = os.str();
        }
        return false;
      }
    }
  }
  return true;
}

std::string WeightSpec::name() const {
  switch (family_) {
    case WeightFamily::Zero:
      return "zero";
    case WeightFamily::Quadratic0:
      return "quadratic0";
    case WeightFamily::AnisoQuadratic:
      return "aniso";
    case WeightFamily::AxialPoly: {
      std::ostringstream os;
      os << "axialpoly:";
      for (std::size_t i = 0; i < coeffs_.size(); ++i) {
        if (i > 0) os << ',';
        os << coeffs_[i];
      }
      return os.str();
    }
  }
  return "?";
}

WeightSpec WeightSpec::parse(int n, const std::string& text) {
  if (text == "zero") return zero(n);
  if (text == "quadratic0") return quadratic0(n);
  if (text == "aniso") return aniso_quadratic(n);
  const std::string prefix = "axialpoly:";
  if (text.rfind(prefix, 0) == 0) {
    std::vector<double> coeffs;
    std::stringstream body(text.substr(prefix.size()));
    std::string item;
    while (std::getline(body, item, ',')) {
      try {
        std::size_t used = 0;
        coeffs.push_back(std::stod(item, &used));
        require(used == item.size(), "trailing junk in coefficient");
      } catch (const std::exception&) {
        throw config_error("bad axialpoly coefficient '" + item + "'");
      }
    }
    require(!coeffs.empty(), "axialpoly weight needs coefficients");
    return axial_poly(n, std::move(coeffs));
  }
  throw config_error(
      "unknown weight '" + text +
      "' (expected zero | quadratic0 | aniso | axialpoly:c0,c1,...)");
}

}  // namespace diracl2
