#pragma once

#include <string>

#include <Eigen/Core>

#include "diracl2/grid.hpp"
#include "diracl2/multivector.hpp"

namespace diracl2 {

// =========================== sampled fields ===========================
//
// An algebra-valued function sampled at every grid node: a dense 2^n x N
// matrix whose column k holds the blade coefficients at node k.  Column-major
// storage therefore matches the on-disk layout (node-major, blade-minor,
// masks ascending within a node).

class CliffordField {
 public:
  explicit CliffordField(Grid grid);

  const Grid& grid() const { return grid_; }
  int n() const { return grid_.n(); }
  Index components() const { return values_.rows(); }

  Eigen::MatrixXd& values() { return values_; }
  const Eigen::MatrixXd& values() const { return values_; }

  Multivector<double> at(Index node) const {
    return Multivector<double>(grid_.n(), values_.col(node));
  }
  void set(Index node, const Multivector<double>& v) {
    values_.col(node) = v.coeffs();
  }

  bool all_finite() const { return values_.allFinite(); }

  // Raises numeric_error when any sample is NaN or infinite.
  void require_finite(const char* what) const;

  void require_same_grid(const CliffordField& o, const char* what) const;

  // ------------------------- snapshot formats -------------------------
  // Both formats carry a header (n, extents, axis bounds) followed by the
  // samples node-major, blade-minor.  Binary is little-endian IEEE doubles;
  // CSV prints shortest round-trip decimals.
  void save_binary(const std::string& path) const;
  void save_csv(const std::string& path) const;
  static CliffordField load_binary(const std::string& path);
  static CliffordField load_csv(const std::string& path);

 private:
  Grid grid_;
  Eigen::MatrixXd values_;
};

// Shortest decimal form that parses back to exactly the same double; used
// by every text artifact the library emits.
std::string format_double(double v);

}  // namespace diracl2
