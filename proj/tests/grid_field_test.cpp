#include <doctest.h>

#include <cstdio>
#include <string>

#include "diracl2/field.hpp"
#include "diracl2/rng.hpp"

using namespace diracl2;

// =============================== grids ===============================

TEST_CASE("grid geometry on a hand-checked 2D example") {
  // n = 1, axes x0 in [0, 1] with 3 nodes and x1 in [-1, 1] with 5 nodes.
  const Grid g(1, {3, 5}, Eigen::Vector2d(0.0, -1.0), Eigen::Vector2d(1.0, 1.0));
  CHECK(g.axes() == 2);
  CHECK(g.num_nodes() == 15);
  CHECK(g.num_interior() == 3);
  CHECK(g.spacing(0) == doctest::Approx(0.5));
  CHECK(g.spacing(1) == doctest::Approx(0.5));
  // Axis 0 slowest: node index = i0 * 5 + i1.
  CHECK(g.stride(0) == 5);
  CHECK(g.stride(1) == 1);

  const Eigen::VectorXd p = g.point(7);  // i0 = 1, i1 = 2
  CHECK(p[0] == doctest::Approx(0.5));
  CHECK(p[1] == doctest::Approx(0.0));
  CHECK(g.is_interior(7));
  CHECK_FALSE(g.is_interior(0));
  CHECK_FALSE(g.is_interior(14));

  // Corner, edge, and interior trapezoid weights.
  CHECK(g.quad_weight(0) == doctest::Approx(0.25 * 0.25));   // both faces
  CHECK(g.quad_weight(1) == doctest::Approx(0.25 * 0.5));    // one face
  CHECK(g.quad_weight(7) == doctest::Approx(0.25));          // interior

  // Weights sum to the box volume.
  double total = 0.0;
  for (Index k = 0; k < g.num_nodes(); ++k) total += g.quad_weight(k);
  CHECK(total == doctest::Approx(2.0));
}

TEST_CASE("interior nodes are exactly the off-face nodes") {
  const Grid g = Grid::uniform(2, 4, -1.0, 1.0);
  const auto& interior = g.interior_nodes();
  CHECK(interior.size() == 8);  // 2^3 interior in a 4^3 grid
  std::vector<Index> mi;
  for (Index k : interior) {
    g.multi_index(k, mi);
    for (int a = 0; a < g.axes(); ++a) {
      CHECK(mi[a] > 0);
      CHECK(mi[a] < g.extent(a) - 1);
    }
    CHECK(g.node_index(mi) == k);
  }
}

TEST_CASE("refinement nests the node set and halves spacing") {
  const Grid g(1, {3, 4}, Eigen::Vector2d(-1.0, 0.0), Eigen::Vector2d(1.0, 3.0));
  const Grid f = g.refined(2);
  CHECK(f.extent(0) == 9);
  CHECK(f.extent(1) == 13);
  CHECK(f.spacing(0) == doctest::Approx(g.spacing(0) / 4.0));
  CHECK(f.low(0) == g.low(0));
  CHECK(f.high(1) == g.high(1));
  CHECK(g.refined(0).same_layout(g));

  // Every coarse station reappears on the fine axis.
  for (Index i = 0; i < g.extent(0); ++i)
    CHECK(f.coordinate(0, 4 * i) == doctest::Approx(g.coordinate(0, i)));
}

TEST_CASE("grid validation") {
  CHECK_THROWS_AS(Grid(1, {2, 3}, Eigen::Vector2d(0, 0), Eigen::Vector2d(1, 1)),
                  config_error);
  CHECK_THROWS_AS(Grid(1, {3, 3}, Eigen::Vector2d(0, 1), Eigen::Vector2d(1, 1)),
                  config_error);
  CHECK_THROWS_AS(Grid(0, {3}, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)),
                  config_error);
  CHECK_THROWS_AS(Grid(1, {3}, Eigen::VectorXd::Zero(1), Eigen::VectorXd::Ones(1)),
                  config_error);  // extents must cover n+1 axes
}

// ============================ sampled fields ============================

namespace {

CliffordField random_field(const Grid& g, std::uint64_t seed) {
  CliffordField f(g);
  Rng rng(seed);
  for (Index k = 0; k < g.num_nodes(); ++k)
    for (Index c = 0; c < f.components(); ++c)
      f.values()(c, k) = rng.next_unit() * 16.0 - 8.0;
  return f;
}

struct TempPath {
  std::string path;
  explicit TempPath(const char* name) : path(name) {}
  ~TempPath() { std::remove(path.c_str()); }
};

}  // namespace

TEST_CASE("binary snapshot round-trips bit for bit") {
  const Grid g(2, {3, 4, 5}, Eigen::Vector3d(-1.0, 0.0, 2.0),
               Eigen::Vector3d(1.0, 1.0, 2.5));
  const CliffordField f = random_field(g, 99);
  const TempPath tmp("field_roundtrip.dl2fld");
  f.save_binary(tmp.path);
  const CliffordField back = CliffordField::load_binary(tmp.path);
  CHECK(back.grid().same_layout(g));
  CHECK(back.values() == f.values());
}

TEST_CASE("csv snapshot round-trips exactly via shortest decimals") {
  const Grid g(1, {3, 3}, Eigen::Vector2d(-1.0, -1.0), Eigen::Vector2d(1.0, 1.0));
  CliffordField f = random_field(g, 100);
  f.values()(0, 0) = 0.1;              // classic non-dyadic
  f.values()(1, 1) = 1.0 / 3.0;
  const TempPath tmp("field_roundtrip.csv");
  f.save_csv(tmp.path);
  const CliffordField back = CliffordField::load_csv(tmp.path);
  CHECK(back.grid().same_layout(g));
  CHECK(back.values() == f.values());
}

TEST_CASE("finiteness guard") {
  const Grid g = Grid::uniform(1, 3, -1.0, 1.0);
  CliffordField f(g);
  CHECK_NOTHROW(f.require_finite("test"));
  f.values()(0, 4) = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(f.require_finite("test"), numeric_error);
}

TEST_CASE("format_double survives the round trip") {
  for (double v : {0.0, -0.0, 0.1, 1.0 / 3.0, 1e-300, -2.5e17,
                   6.02214076e23, 1.7976931348623157e308}) {
    const std::string s = format_double(v);
    CHECK(std::stod(s) == v);
  }
}
