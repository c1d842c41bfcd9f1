#pragma once

#include <vector>

#include <Eigen/Core>

#include "diracl2/common.hpp"

namespace diracl2 {

// ============================ tensor grids ============================
//
// A uniform tensor-product grid on a closed box in R^(n+1).  Axis 0 is the
// distinguished coordinate x_0; axes 1..n pair with the generators.  Node
// enumeration is row-major with axis 0 slowest and axis n fastest, and a
// node is "interior" when none of its axis indices touch the box faces.

class Grid {
 public:
  Grid(int n, std::vector<Index> extents, Eigen::VectorXd lows,
       Eigen::VectorXd highs);

  // Convenience: same extent and [lo, hi] interval on every axis.
  static Grid uniform(int n, Index extent, double lo, double hi);

  int n() const { return n_; }
  int axes() const { return n_ + 1; }

  Index extent(int axis) const { return extents_[axis]; }
  const std::vector<Index>& extents() const { return extents_; }
  double low(int axis) const { return lows_[axis]; }
  double high(int axis) const { return highs_[axis]; }
  double spacing(int axis) const { return spacing_[axis]; }
  double max_spacing() const;

  Index num_nodes() const { return num_nodes_; }
  Index num_interior() const { return num_interior_; }
  // Node-index step between neighbors along an axis.
  Index stride(int axis) const { return strides_[axis]; }

  void multi_index(Index node, std::vector<Index>& mi) const;
  Index node_index(const std::vector<Index>& mi) const;
  bool is_interior(Index node) const;

  // Coordinates of a node.
  Eigen::VectorXd point(Index node) const;
  double coordinate(int axis, Index axisIndex) const {
    return lows_[axis] + spacing_[axis] * static_cast<double>(axisIndex);
  }

  // Trapezoid quadrature weight: product of h_i, halved on each axis whose
  // index sits on a face.
  double quad_weight(Index node) const;

  // Interior node indices in ascending order.
  const std::vector<Index>& interior_nodes() const;

  // Same box with every axis interval split in two `levels` times, so the
  // spacing halves per level and the node set is nested.
  Grid refined(int levels = 1) const;

  bool same_layout(const Grid& o) const {
    return n_ == o.n_ && extents_ == o.extents_ && lows_ == o.lows_ &&
           highs_ == o.highs_;
  }

 private:
  int n_;
  std::vector<Index> extents_;
  Eigen::VectorXd lows_, highs_, spacing_;
  std::vector<Index> strides_;
  Index num_nodes_, num_interior_;
  mutable std::vector<Index> interior_cache_;
};

}  // namespace diracl2
