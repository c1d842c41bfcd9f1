#include "diracl2/operators.hpp"

#include <cmath>
#include <mutex>

#include "diracl2/parallel.hpp"

namespace diracl2 {

GeneratorAction generator_action(int n, int generator, Side side,
                                 bool conjugated) {
  require(generator >= 0 && generator <= n, "generator index out of range");
  const Index d = Index(1) << n;
  GeneratorAction act;
  act.target.resize(static_cast<std::size_t>(d));
  act.sign.resize(static_cast<std::size_t>(d));
  const Blade g = generator_blade(generator);
  // bar(e_0) = e_0, bar(e_i) = -e_i.
  const double conjSign = (conjugated && generator >= 1) ? -1.0 : 1.0;
  for (Index c = 0; c < d; ++c) {
    const Blade b{static_cast<std::uint32_t>(c)};
    const BladeProduct p =
        side == Side::Left ? blade_product(g, b) : blade_product(b, g);
    act.target[static_cast<std::size_t>(c)] =
        static_cast<int>(p.blade.mask);
    act.sign[static_cast<std::size_t>(c)] =
        conjSign * static_cast<double>(p.sign);
  }
  return act;
}

namespace {

// One-dimensional stencil application along `axis` at node k; `second`
// selects the second derivative.  Index arithmetic stays in the axis line.
struct AxisStencil {
  const Grid& grid;
  int axis;
  Index stride, extent;
  double h;

  AxisStencil(const Grid& g, int a)
      : grid(g),
        axis(a),
        stride(g.stride(a)),
        extent(g.extent(a)),
        h(g.spacing(a)) {}

  Index line_index(Index node) const { return (node / stride) % extent; }
};

}  // namespace

CliffordField axis_derivative(const CliffordField& f, int axis) {
  f.require_finite("axis_derivative");
  const Grid& grid = f.grid();
  require(axis >= 0 && axis < grid.axes(), "derivative axis out of range");
  CliffordField out(grid);
  const AxisStencil st(grid, axis);
  const Eigen::MatrixXd& in = f.values();
  Eigen::MatrixXd& dv = out.values();
  const double inv2h = 1.0 / (2.0 * st.h);
  parallel_for(grid.num_nodes(), [&](Index k) {
    const Index i = st.line_index(k);
    if (i > 0 && i < st.extent - 1) {
      dv.col(k) = (in.col(k + st.stride) - in.col(k - st.stride)) * inv2h;
    } else if (i == 0) {
      dv.col(k) = (-3.0 * in.col(k) + 4.0 * in.col(k + st.stride) -
                   in.col(k + 2 * st.stride)) *
                  inv2h;
    } else {
      dv.col(k) = (3.0 * in.col(k) - 4.0 * in.col(k - st.stride) +
                   in.col(k - 2 * st.stride)) *
                  inv2h;
    }
  });
  return out;
}

CliffordField dirac(const CliffordField& f, Side side, bool conjugated) {
  f.require_finite("dirac");
  const Grid& grid = f.grid();
  const int n = grid.n();
  const Index d = f.components();
  CliffordField out(grid);
  const Eigen::MatrixXd& in = f.values();
  Eigen::MatrixXd& ov = out.values();

  std::vector<GeneratorAction> acts;
  acts.reserve(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i)
    acts.push_back(generator_action(n, i, side, conjugated));

  std::vector<AxisStencil> stencils;
  stencils.reserve(static_cast<std::size_t>(n + 1));
  for (int a = 0; a <= n; ++a) stencils.emplace_back(grid, a);

  parallel_for(grid.num_nodes(), [&](Index k) {
    for (int a = 0; a <= n; ++a) {
      const AxisStencil& st = stencils[static_cast<std::size_t>(a)];
      const double inv2h = 1.0 / (2.0 * st.h);
      const Index i = st.line_index(k);
      for (Index c = 0; c < d; ++c) {
        double deriv;
        if (i > 0 && i < st.extent - 1)
          deriv = (in(c, k + st.stride) - in(c, k - st.stride)) * inv2h;
        else if (i == 0)
          deriv = (-3.0 * in(c, k) + 4.0 * in(c, k + st.stride) -
                   in(c, k + 2 * st.stride)) *
                  inv2h;
        else
          deriv = (3.0 * in(c, k) - 4.0 * in(c, k - st.stride) +
                   in(c, k - 2 * st.stride)) *
                  inv2h;
        const GeneratorAction& act = acts[static_cast<std::size_t>(a)];
        ov(act.target[static_cast<std::size_t>(c)], k) +=
            act.sign[static_cast<std::size_t>(c)] * deriv;
      }
    }
  });
  return out;
}

CliffordField laplacian(const CliffordField& f) {
  f.require_finite("laplacian");
  const Grid& grid = f.grid();
  CliffordField out(grid);
  const Eigen::MatrixXd& in = f.values();
  Eigen::MatrixXd& ov = out.values();
  for (int a = 0; a < grid.axes(); ++a) {
    const AxisStencil st(grid, a);
    const double invh2 = 1.0 / (st.h * st.h);
    const bool wide = st.extent >= 4;
    parallel_for(grid.num_nodes(), [&](Index k) {
      const Index i = st.line_index(k);
      if (i > 0 && i < st.extent - 1) {
        ov.col(k) += (in.col(k + st.stride) - 2.0 * in.col(k) +
                      in.col(k - st.stride)) *
                     invh2;
      } else {
        // Direction of the one-sided stencil: +stride at the low face.
        const Index s = (i == 0) ? st.stride : -st.stride;
        if (wide)
          ov.col(k) += (2.0 * in.col(k) - 5.0 * in.col(k + s) +
                        4.0 * in.col(k + 2 * s) - in.col(k + 3 * s)) *
                       invh2;
        else
          ov.col(k) +=
              (in.col(k) - 2.0 * in.col(k + s) + in.col(k + 2 * s)) * invh2;
      }
    });
  }
  return out;
}

// ---------------------------------------------------------------------
// quadrature helpers

namespace {

// Per-chunk accumulation of sum_k rho(k) * bar(f_k) g_k into `acc`.
void accumulate_weighted_products(const CliffordField& f,
                                  const CliffordField& g, const WeightSpec& w,
                                  Index b, Index e, Eigen::VectorXd& acc) {
  const Grid& grid = f.grid();
  const int n = grid.n();
  const Index d = f.components();
  const SignTable& table = SignTable::get(n);
  const Eigen::MatrixXd& fv = f.values();
  const Eigen::MatrixXd& gv = g.values();
  for (Index k = b; k < e; ++k) {
    const double rho = grid.quad_weight(k) * std::exp(-w.phi(grid.point(k)));
    for (Index ia = 0; ia < d; ++ia) {
      const double xa = fv(ia, k);
      if (xa == 0.0) continue;
      const double barxa =
          bar_sign(std::popcount(static_cast<std::uint32_t>(ia))) < 0 ? -xa
                                                                      : xa;
      for (Index ib = 0; ib < d; ++ib) {
        const double xb = gv(ib, k);
        if (xb == 0.0) continue;
        const int s = table.sign(static_cast<std::uint32_t>(ia),
                                 static_cast<std::uint32_t>(ib));
        acc[ia ^ ib] += rho * s * barxa * xb;
      }
    }
  }
}

}  // namespace

Multivector<double> weighted_inner(const CliffordField& f,
                                   const CliffordField& g,
                                   const WeightSpec& w) {
  f.require_same_grid(g, "weighted_inner");
  require(w.n() == f.n(), "weighted_inner: weight/field algebra mismatch");
  f.require_finite("weighted_inner");
  g.require_finite("weighted_inner");
  const Eigen::VectorXd sum = parallel_sum_vec(
      f.grid().num_nodes(), f.components(),
      [&](Index b, Index e, Eigen::VectorXd& acc) {
        accumulate_weighted_products(f, g, w, b, e, acc);
      });
  return Multivector<double>(f.n(), sum);
}

double weighted_norm_sq(const CliffordField& f, const WeightSpec& w) {
  require(w.n() == f.n(), "weighted_norm_sq: weight/field algebra mismatch");
  f.require_finite("weighted_norm_sq");
  const Grid& grid = f.grid();
  const Eigen::MatrixXd& fv = f.values();
  const double sum =
      parallel_sum(grid.num_nodes(), [&](Index b, Index e) {
        double acc = 0.0;
        for (Index k = b; k < e; ++k)
          acc += grid.quad_weight(k) * std::exp(-w.phi(grid.point(k))) *
                 fv.col(k).squaredNorm();
        return acc;
      });
  return static_cast<double>(Index(1) << f.n()) * sum;
}

Multivector<double> integral_product(const CliffordField& f,
                                     const CliffordField& g) {
  f.require_same_grid(g, "integral_product");
  f.require_finite("integral_product");
  g.require_finite("integral_product");
  const Grid& grid = f.grid();
  const int n = grid.n();
  const Index d = f.components();
  const SignTable& table = SignTable::get(n);
  const Eigen::MatrixXd& fv = f.values();
  const Eigen::MatrixXd& gv = g.values();
  const Eigen::VectorXd sum = parallel_sum_vec(
      grid.num_nodes(), d, [&](Index b, Index e, Eigen::VectorXd& acc) {
        for (Index k = b; k < e; ++k) {
          const double wq = grid.quad_weight(k);
          for (Index ia = 0; ia < d; ++ia) {
            const double xa = fv(ia, k);
            if (xa == 0.0) continue;
            for (Index ib = 0; ib < d; ++ib) {
              const double xb = gv(ib, k);
              if (xb == 0.0) continue;
              const int s = table.sign(static_cast<std::uint32_t>(ia),
                                       static_cast<std::uint32_t>(ib));
              acc[ia ^ ib] += wq * s * xa * xb;
            }
          }
        }
      });
  return Multivector<double>(n, sum);
}

double plain_norm_sq(const CliffordField& f) {
  f.require_finite("plain_norm_sq");
  const Grid& grid = f.grid();
  const Eigen::MatrixXd& fv = f.values();
  const double sum = parallel_sum(grid.num_nodes(), [&](Index b, Index e) {
    double acc = 0.0;
    for (Index k = b; k < e; ++k)
      acc += grid.quad_weight(k) * fv.col(k).squaredNorm();
    return acc;
  });
  return static_cast<double>(Index(1) << f.n()) * sum;
}

std::optional<double> rhs_functional(const CliffordField& f,
                                     const WeightSpec& w) {
  require(w.n() == f.n(), "rhs_functional: weight/field algebra mismatch");
  f.require_finite("rhs_functional");
  const Grid& grid = f.grid();
  const Eigen::MatrixXd& fv = f.values();
  bool defined = true;
  std::mutex flagMutex;
  const double sum = parallel_sum(grid.num_nodes(), [&](Index b, Index e) {
    double acc = 0.0;
    for (Index k = b; k < e; ++k) {
      const double fsq = fv.col(k).squaredNorm();
      if (fsq == 0.0) continue;  // 0 / anything contributes nothing
      const Eigen::VectorXd x = grid.point(k);
      const double lap = w.laplacian(x);
      if (lap <= 0.0) {
        std::lock_guard<std::mutex> lock(flagMutex);
        defined = false;
        return acc;
      }
      acc += grid.quad_weight(k) * std::exp(-w.phi(x)) * fsq / lap;
    }
    return acc;
  });
  if (!defined) return std::nullopt;
  return static_cast<double>(Index(1) << f.n()) * sum;
}

CliffordField dual_operator_analytic(const CliffordField& alpha,
                                     const WeightSpec& w) {
  require(w.n() == alpha.n(), "dual operator: weight/field algebra mismatch");
  alpha.require_finite("dual_operator_analytic");
  const Grid& grid = alpha.grid();
  // alpha * D(phi) with exact weight derivatives, minus D(alpha) by finite
  // differences.
  CliffordField out = dirac(alpha, Side::Left, /*conjugated=*/true);
  Eigen::MatrixXd& ov = out.values();
  ov = -ov;
  const int n = grid.n();
  const Index d = alpha.components();
  const SignTable& table = SignTable::get(n);
  const Eigen::MatrixXd& av = alpha.values();
  parallel_for(grid.num_nodes(), [&](Index k) {
    const Multivector<double> dphi = w.conjugated_gradient(grid.point(k));
    for (Index ia = 0; ia < d; ++ia) {
      const double xa = av(ia, k);
      if (xa == 0.0) continue;
      for (Index ib = 0; ib < d; ++ib) {
        const double xb = dphi.coeffs()[ib];
        if (xb == 0.0) continue;
        const int s = table.sign(static_cast<std::uint32_t>(ia),
                                 static_cast<std::uint32_t>(ib));
        ov(ia ^ ib, k) += s * xa * xb;
      }
    }
  });
  return out;
}

// ---------------------------------------------------------------------
// bumps

namespace {

// Standard mollifier profile on (-1, 1), identically zero outside.
double bump_profile(double t) {
  const double t2 = t * t;
  if (t2 >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t2));
}

}  // namespace

CliffordField make_bump(const Grid& grid, const BumpSpec& spec) {
  require(spec.margin > 0.0 && spec.margin < 0.5,
          "bump margin must lie in (0, 0.5)");
  require(spec.component.mask < (std::uint32_t(1) << grid.n()),
          "bump component outside the algebra");
  const int ax = grid.axes();
  Eigen::VectorXd center(ax), halfwidth(ax);
  for (int a = 0; a < ax; ++a) {
    const double len = grid.high(a) - grid.low(a);
    halfwidth[a] = (0.5 - spec.margin) * len;
    center[a] = spec.center ? (*spec.center)[a]
                            : 0.5 * (grid.low(a) + grid.high(a));
    require(center[a] - halfwidth[a] > grid.low(a) - 1e-12 &&
                center[a] + halfwidth[a] < grid.high(a) + 1e-12,
            "bump support leaves the domain on axis " + std::to_string(a));
  }
  CliffordField out(grid);
  Eigen::MatrixXd& ov = out.values();
  const Index row = static_cast<Index>(spec.component.mask);
  parallel_for(grid.num_nodes(), [&](Index k) {
    const Eigen::VectorXd x = grid.point(k);
    double v = spec.scale;
    for (int a = 0; a < ax && v != 0.0; ++a)
      v *= bump_profile((x[a] - center[a]) / halfwidth[a]);
    ov(row, k) = v;
  });
  return out;
}

CliffordField make_bump(const Grid& grid, double margin, Blade component) {
  BumpSpec spec;
  spec.component = component;
  spec.margin = margin;
  return make_bump(grid, spec);
}

bool vanishes_on_boundary(const CliffordField& f) {
  const Grid& grid = f.grid();
  const Eigen::MatrixXd& fv = f.values();
  for (Index k = 0; k < grid.num_nodes(); ++k) {
    if (grid.is_interior(k)) continue;
    if (!(fv.col(k).array() == 0.0).all()) return false;
  }
  return true;
}

}  // namespace diracl2
