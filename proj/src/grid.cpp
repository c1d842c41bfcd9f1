#include "diracl2/grid.hpp"

#include <algorithm>
#include <string>

namespace diracl2 {

Grid::Grid(int n, std::vector<Index> extents, Eigen::VectorXd lows,
           Eigen::VectorXd highs)
    : n_(n),
      extents_(std::move(extents)),
      lows_(std::move(lows)),
      highs_(std::move(highs)) {
  require(n_ >= 1 && n_ <= kMaxAlgebraN,
          "grid algebra parameter n must be in [1, " +
              std::to_string(kMaxAlgebraN) + "], got " + std::to_string(n_));
  const int ax = axes();
  require(static_cast<int>(extents_.size()) == ax,
          "grid needs " + std::to_string(ax) + " extents, got " +
              std::to_string(extents_.size()));
  require(lows_.size() == ax && highs_.size() == ax,
          "grid needs " + std::to_string(ax) + " axis bounds");
  spacing_.resize(ax);
  for (int a = 0; a < ax; ++a) {
    require(extents_[a] >= 3, "grid extent on axis " + std::to_string(a) +
                                  " must be >= 3, got " +
                                  std::to_string(extents_[a]));
    require(lows_[a] < highs_[a],
            "grid axis " + std::to_string(a) + " has empty interval");
    spacing_[a] =
        (highs_[a] - lows_[a]) / static_cast<double>(extents_[a] - 1);
  }
  strides_.assign(ax, 1);
  for (int a = ax - 2; a >= 0; --a) strides_[a] = strides_[a + 1] * extents_[a + 1];
  num_nodes_ = strides_[0] * extents_[0];
  num_interior_ = 1;
  for (int a = 0; a < ax; ++a) num_interior_ *= (extents_[a] - 2);
}

Grid Grid::uniform(int n, Index extent, double lo, double hi) {
  return Grid(n, std::vector<Index>(n + 1, extent),
              Eigen::VectorXd::Constant(n + 1, lo),
              Eigen::VectorXd::Constant(n + 1, hi));
}

double Grid::max_spacing() const { return spacing_.maxCoeff(); }

void Grid::multi_index(Index node, std::vector<Index>& mi) const {
  mi.resize(axes());
  for (int a = 0; a < axes(); ++a) {
    mi[a] = node / strides_[a];
    node -= mi[a] * strides_[a];
  }
}

Index Grid::node_index(const std::vector<Index>& mi) const {
  Index node = 0;
  for (int a = 0; a < axes(); ++a) node += mi[a] * strides_[a];
  return node;
}

bool Grid::is_interior(Index node) const {
  for (int a = 0; a < axes(); ++a) {
    const Index i = (node / strides_[a]) % extents_[a];
    if (i == 0 || i == extents_[a] - 1) return false;
  }
  return true;
}

Eigen::VectorXd Grid::point(Index node) const {
  Eigen::VectorXd x(axes());
  for (int a = 0; a < axes(); ++a) {
    const Index i = (node / strides_[a]) % extents_[a];
    x[a] = coordinate(a, i);
  }
  return x;
}

double Grid::quad_weight(Index node) const {
  double w = 1.0;
  for (int a = 0; a < axes(); ++a) {
    const Index i = (node / strides_[a]) % extents_[a];
    w *= spacing_[a];
    if (i == 0 || i == extents_[a] - 1) w *= 0.5;
  }
  return w;
}

const std::vector<Index>& Grid::interior_nodes() const {
  if (interior_cache_.empty() && num_interior_ > 0) {
    interior_cache_.reserve(static_cast<std::size_t>(num_interior_));
    for (Index k = 0; k < num_nodes_; ++k)
      if (is_interior(k)) interior_cache_.push_back(k);
  }
  return interior_cache_;
}

Grid Grid::refined(int levels) const {
  require(levels >= 0, "refinement level must be >= 0");
  std::vector<Index> ext(extents_);
  for (int a = 0; a < axes(); ++a)
    ext[a] = ((extents_[a] - 1) << levels) + 1;
  return Grid(n_, std::move(ext), lows_, highs_);
}

}  // namespace diracl2
