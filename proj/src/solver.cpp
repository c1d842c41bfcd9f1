#include "diracl2/solver.hpp"

#include <cmath>

#include "diracl2/parallel.hpp"

namespace diracl2 {

DiscreteDiracOperator::DiscreteDiracOperator(Grid grid, WeightSpec weight)
    : grid_(std::move(grid)), weight_(std::move(weight)) {
  require(weight_.n() == grid_.n(), "operator: weight/grid algebra mismatch");
  const int n = grid_.n();
  comps_ = Index(1) << n;
  actions_.reserve(static_cast<std::size_t>(n + 1));
  for (int i = 0; i <= n; ++i)
    actions_.push_back(generator_action(n, i, Side::Left, false));

  interiorOf_.assign(static_cast<std::size_t>(grid_.num_nodes()), Index(-1));
  const auto& interior = grid_.interior_nodes();
  for (Index m = 0; m < static_cast<Index>(interior.size()); ++m)
    interiorOf_[static_cast<std::size_t>(interior[static_cast<std::size_t>(m)])] = m;

  rhoDomain_.resize(grid_.num_nodes());
  parallel_for(grid_.num_nodes(), [&](Index k) {
    rhoDomain_[k] =
        grid_.quad_weight(k) * std::exp(-weight_.phi(grid_.point(k)));
  });
  rhoRange_.resize(grid_.num_interior());
  for (Index m = 0; m < grid_.num_interior(); ++m)
    rhoRange_[m] = rhoDomain_[interior[static_cast<std::size_t>(m)]];
}

Index DiscreteDiracOperator::domain_size() const {
  return grid_.num_nodes() * comps_;
}

Index DiscreteDiracOperator::range_size() const {
  return grid_.num_interior() * comps_;
}

void DiscreteDiracOperator::apply(const Eigen::VectorXd& u,
                                  Eigen::VectorXd& out) const {
  require(u.size() == domain_size(), "apply: wrong input size");
  out.setZero(range_size());
  const auto& interior = grid_.interior_nodes();
  const int n = grid_.n();
  const Index D = comps_;
  parallel_for(grid_.num_interior(), [&](Index m) {
    const Index k = interior[static_cast<std::size_t>(m)];
    for (int a = 0; a <= n; ++a) {
      const Index s = grid_.stride(a);
      const double inv2h = 1.0 / (2.0 * grid_.spacing(a));
      const GeneratorAction& act = actions_[static_cast<std::size_t>(a)];
      for (Index c = 0; c < D; ++c) {
        const double d = (u[(k + s) * D + c] - u[(k - s) * D + c]) * inv2h;
        out[m * D + act.target[static_cast<std::size_t>(c)]] +=
            act.sign[static_cast<std::size_t>(c)] * d;
      }
    }
  });
}

void DiscreteDiracOperator::apply_transpose(const Eigen::VectorXd& v,
                                            Eigen::VectorXd& out) const {
  require(v.size() == range_size(), "apply_transpose: wrong input size");
  out.setZero(domain_size());
  const int n = grid_.n();
  const Index D = comps_;
  parallel_for(grid_.num_nodes(), [&](Index q) {
    for (int a = 0; a <= n; ++a) {
      const Index s = grid_.stride(a);
      const double inv2h = 1.0 / (2.0 * grid_.spacing(a));
      const Index i = (q / s) % grid_.extent(a);
      const GeneratorAction& act = actions_[static_cast<std::size_t>(a)];
      if (i >= 1) {
        const Index m = interiorOf_[static_cast<std::size_t>(q - s)];
        if (m >= 0)
          for (Index c = 0; c < D; ++c)
            out[q * D + c] +=
                act.sign[static_cast<std::size_t>(c)] * inv2h *
                v[m * D + act.target[static_cast<std::size_t>(c)]];
      }
      if (i + 1 < grid_.extent(a)) {
        const Index m = interiorOf_[static_cast<std::size_t>(q + s)];
        if (m >= 0)
          for (Index c = 0; c < D; ++c)
            out[q * D + c] -=
                act.sign[static_cast<std::size_t>(c)] * inv2h *
                v[m * D + act.target[static_cast<std::size_t>(c)]];
      }
    }
  });
}

void DiscreteDiracOperator::apply_adjoint(const Eigen::VectorXd& v,
                                          Eigen::VectorXd& out) const {
  require(v.size() == range_size(), "apply_adjoint: wrong input size");
  Eigen::VectorXd scaled(range_size());
  const Index D = comps_;
  parallel_for(grid_.num_interior(), [&](Index m) {
    scaled.segment(m * D, D) = v.segment(m * D, D) * rhoRange_[m];
  });
  apply_transpose(scaled, out);
  parallel_for(grid_.num_nodes(), [&](Index k) {
    out.segment(k * D, D) /= rhoDomain_[k];
  });
}

double DiscreteDiracOperator::dot_domain(const Eigen::VectorXd& a,
                                         const Eigen::VectorXd& b) const {
  const Index D = comps_;
  const double sum = parallel_sum(grid_.num_nodes(), [&](Index lo, Index hi) {
    double acc = 0.0;
    for (Index k = lo; k < hi; ++k)
      acc += rhoDomain_[k] * a.segment(k * D, D).dot(b.segment(k * D, D));
    return acc;
  });
  return static_cast<double>(comps_) * sum;
}

double DiscreteDiracOperator::dot_range(const Eigen::VectorXd& a,
                                        const Eigen::VectorXd& b) const {
  const Index D = comps_;
  const double sum =
      parallel_sum(grid_.num_interior(), [&](Index lo, Index hi) {
        double acc = 0.0;
        for (Index m = lo; m < hi; ++m)
          acc += rhoRange_[m] * a.segment(m * D, D).dot(b.segment(m * D, D));
        return acc;
      });
  return static_cast<double>(comps_) * sum;
}

Eigen::VectorXd DiscreteDiracOperator::restrict_interior(
    const CliffordField& f) const {
  require(f.grid().same_layout(grid_), "restrict: field on a different grid");
  Eigen::VectorXd out(range_size());
  const auto& interior = grid_.interior_nodes();
  const Index D = comps_;
  parallel_for(grid_.num_interior(), [&](Index m) {
    out.segment(m * D, D) =
        f.values().col(interior[static_cast<std::size_t>(m)]);
  });
  return out;
}

// ---------------------------------------------------------------------
// conjugate gradients on the normal equations

namespace {

struct NormalCgResult {
  Eigen::VectorXd y;  // range-space solution of (L L*) y = rhs
  Index iterations = 0;
  bool reachedTol = false;
};

// CG in the range inner product for the self-adjoint positive semidefinite
// normal operator v -> L (L* v).  Stops at relResidual <= tol (recurrence
// estimate) or after maxIterations.
NormalCgResult cg_normal(const DiscreteDiracOperator& op,
                         const Eigen::VectorXd& rhs, double tol,
                         Index maxIterations) {
  NormalCgResult res;
  res.y = Eigen::VectorXd::Zero(rhs.size());
  const double rhsNormSq = op.dot_range(rhs, rhs);
  if (rhsNormSq == 0.0) {
    res.reachedTol = true;
    return res;
  }
  Eigen::VectorXd r = rhs;
  Eigen::VectorXd p = r;
  Eigen::VectorXd tmpDomain, q;
  double rr = rhsNormSq;
  const double target = tol * tol * rhsNormSq;
  for (Index it = 1; it <= maxIterations; ++it) {
    op.apply_adjoint(p, tmpDomain);
    op.apply(tmpDomain, q);
    const double pq = op.dot_range(p, q);
    res.iterations = it;
    if (!(pq > 0.0)) break;  // rhs has hit the null space: stagnate honestly
    const double alpha = rr / pq;
    res.y += alpha * p;
    r -= alpha * q;
    const double rrNew = op.dot_range(r, r);
    if (rrNew <= target) {
      res.reachedTol = true;
      break;
    }
    p = r + (rrNew / rr) * p;
    rr = rrNew;
  }
  return res;
}

Index default_max_iterations(const DiscreteDiracOperator& op,
                             const SolveOptions& opts) {
  if (opts.maxIterations > 0) return opts.maxIterations;
  return 10 * static_cast<Index>(std::ceil(
                  std::sqrt(static_cast<double>(op.domain_size()))));
}

}  // namespace

std::pair<CliffordField, SolveReport> solve_min_norm(const CliffordField& f,
                                                     const WeightSpec& w,
                                                     const SolveOptions& opts) {
  require(opts.tol > 0.0, "solver tolerance must be positive");
  f.require_finite("solve_min_norm");
  DiscreteDiracOperator op(f.grid(), w);
  const Eigen::VectorXd fr = op.restrict_interior(f);

  SolveReport rep;
  CliffordField u(f.grid());

  const double fNormSq = op.dot_range(fr, fr);
  if (fNormSq == 0.0) {
    rep.converged = true;
  } else {
    const Index maxIter = default_max_iterations(op, opts);
    const NormalCgResult cg = cg_normal(op, fr, opts.tol, maxIter);
    rep.iterations = cg.iterations;
    Eigen::VectorXd uFlat;
    op.apply_adjoint(cg.y, uFlat);
    if (!uFlat.allFinite())
      throw numeric_error("solver produced non-finite iterates");
    Eigen::VectorXd residual;
    op.apply(uFlat, residual);
    residual = fr - residual;
    rep.relResidual =
        std::sqrt(op.dot_range(residual, residual) / fNormSq);
    rep.converged = rep.relResidual <= opts.tol;
    u.values() = Eigen::Map<const Eigen::MatrixXd>(
        uFlat.data(), u.components(), u.grid().num_nodes());
  }

  rep.normUSqWeighted = weighted_norm_sq(u, w);
  rep.rhsFunctional = rhs_functional(f, w);
  if (rep.rhsFunctional && *rep.rhsFunctional > 0.0) {
    const double scale = std::ldexp(1.0, 2 * f.n());  // 2^(2n)
    rep.boundRatioScaled = rep.normUSqWeighted / (scale * *rep.rhsFunctional);
    rep.boundRatioPlane = rep.normUSqWeighted / *rep.rhsFunctional;
  }
  return {std::move(u), rep};
}

Multivector<double> weak_defect(const CliffordField& u, const CliffordField& f,
                                const CliffordField& alpha) {
  u.require_same_grid(f, "weak_defect");
  u.require_same_grid(alpha, "weak_defect");
  if (!vanishes_on_boundary(alpha))
    throw config_error("weak_defect requires a compactly supported test "
                       "field (zero boundary layer)");
  const CliffordField alphaDirac = dirac(alpha, Side::Right, false);
  return integral_product(alpha, f) + integral_product(alphaDirac, u);
}

double unit_sphere_area(int dimension) {
  require(dimension >= 1, "sphere dimension must be >= 1");
  const double d = static_cast<double>(dimension);
  return 2.0 * std::pow(M_PI, d / 2.0) / std::tgamma(d / 2.0);
}

CliffordField cauchy_kernel(const Grid& grid, double exclusionRadius) {
  require(exclusionRadius >= 0.0, "exclusion radius must be >= 0");
  for (int a = 0; a < grid.axes(); ++a)
    require(grid.low(a) < 0.0 && grid.high(a) > 0.0,
            "Cauchy kernel needs the origin inside the open box");
  const int n = grid.n();
  const double omega = unit_sphere_area(n + 1);
  CliffordField out(grid);
  Eigen::MatrixXd& ov = out.values();
  parallel_for(grid.num_nodes(), [&](Index k) {
    const Eigen::VectorXd x = grid.point(k);
    const double r = x.norm();
    if (r <= exclusionRadius || r == 0.0) return;
    const double scale = 1.0 / (omega * std::pow(r, n + 1));
    ov(0, k) = x[0] * scale;
    for (int i = 1; i <= n; ++i)
      ov(static_cast<Index>(generator_blade(i).mask), k) = -x[i] * scale;
  });
  return out;
}

SlabBound slab_bound_report(const CliffordField& u, const CliffordField& f,
                            const WeightSpec& w) {
  u.require_same_grid(f, "slab_bound_report");
  require(w.family() == WeightFamily::Quadratic0,
          "slab bound is derived for the x_0^2 weight only");
  SlabBound sb;
  sb.a = u.grid().low(0);
  sb.b = u.grid().high(0);
  sb.cab = std::exp(std::max(sb.a * sb.a, sb.b * sb.b)) / 2.0;
  sb.plainNormUSq = plain_norm_sq(u);
  sb.plainNormFSq = plain_norm_sq(f);
  const double denom =
      std::ldexp(1.0, 2 * u.n()) * sb.cab * sb.plainNormFSq;
  sb.ratio = denom == 0.0 ? 0.0 : sb.plainNormUSq / denom;
  return sb;
}

Eigen::VectorXd null_space_component(const DiscreteDiracOperator& op,
                                     const Eigen::VectorXd& r, double tol,
                                     Index maxIterations) {
  Eigen::VectorXd lr;
  op.apply(r, lr);
  const NormalCgResult cg = cg_normal(op, lr, tol, maxIterations);
  Eigen::VectorXd back;
  op.apply_adjoint(cg.y, back);
  return r - back;
}

}  // namespace diracl2
