#include <hho/quasilinear.hpp>

#include <cmath>
#include <sstream>

#include <hho/error.hpp>

namespace hho {

namespace {

double checked_coefficient(const QuasilinearProblemData& problem, const Point& x, double t) {
  const double a = problem.a(x, t);
  if (!(a >= problem.alpha - 1e-12 && a <= problem.upper + 1e-12)) {
    std::ostringstream msg;
    msg << "coefficient a = " << a << " at (" << x.x() << ", " << x.y() << "), u = " << t << " leaves ["
        << problem.alpha << ", " << problem.upper << "]";
    throw Error(ErrorKind::InvalidProblem, msg.str());
  }
  return a;
}

void require_coefficient(const QuasilinearProblemData& problem) {
  if (!problem.a || !problem.a_u) throw Error(ErrorKind::InvalidProblem, "coefficient a and its derivative a_u are required");
  if (!(problem.alpha > 0.) || !(problem.upper >= problem.alpha)) throw Error(ErrorKind::InvalidProblem, "coefficient bounds must satisfy 0 < alpha <= M");
}

// Columns: G e_j at the quadrature points, x and y components.
struct GradientValues {
  Eigen::MatrixXd x, y;
};

GradientValues gradient_values(const CellContext& ctx, const LocalOperators& ops) {
  const Tabulation& t = ctx.cell_basis().table();
  const auto dc = static_cast<Eigen::Index>(ctx.cell_dofs());
  return {t.values.leftCols(dc) * ops.gradient.topRows(dc), t.values.leftCols(dc) * ops.gradient.bottomRows(dc)};
}

template <typename LocalMatrix>
double sum_cells(const Discretization& disc, const HybridVector& u, const HybridVector& v, LocalMatrix&& local_matrix) {
  double s = 0.;
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c) {
    const Cell& cell = disc.mesh().cell(c);
    s += v.restrict_to(cell, c).dot(local_matrix(c) * u.restrict_to(cell, c));
  }
  return s;
}

}  // namespace

FaceWeights iterate_face_weights(const Discretization& disc, const QuasilinearProblemData& problem, const HybridVector& w) {
  require_coefficient(problem);
  FaceWeights weights(disc.mesh().n_cells());
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c) {
    const CellContext& ctx = disc.context(c);
    const Eigen::VectorXd rw = disc.ops(c).reconstruction * w.restrict_to(ctx.cell(), c);
    weights[c].assign(ctx.n_faces(), 0.);
    for (std::size_t j = 0; j < ctx.n_faces(); ++j) {
      const Tabulation& tr = ctx.trace(j);
      const Eigen::VectorXd values = tr.values * rw;
      const auto& pts = ctx.face_basis(j).rule().points;
      for (std::size_t q = 0; q < pts.size(); ++q)
        weights[c][j] = std::max(weights[c][j], std::abs(checked_coefficient(problem, pts[q], values(static_cast<Eigen::Index>(q)))));
    }
  }
  return weights;
}

FaceWeights constant_face_weights(const Discretization& disc, double value) {
  if (!(value > 0.) || !std::isfinite(value)) throw Error(ErrorKind::InvalidArgument, "constant stabilization weight must be positive and finite");
  FaceWeights weights(disc.mesh().n_cells());
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c) weights[c].assign(disc.mesh().cell(c).faces.size(), value);
  return weights;
}

NonlinearLocalMatrices nonlinear_local_matrices(const CellContext& ctx, const LocalOperators& ops,
                                                const QuasilinearProblemData& problem, std::span<const double> weights,
                                                const Eigen::Ref<const Eigen::VectorXd>& w_local) {
  require_coefficient(problem);
  const Tabulation& t = ctx.cell_basis().table();
  const auto& pts = ctx.cell_basis().rule().points;
  const auto nq = t.weights.size();

  const Eigen::MatrixXd r_values = t.values * ops.reconstruction;  // R e_j at quadrature points
  const Eigen::VectorXd rw = r_values * w_local;
  const GradientValues g = gradient_values(ctx, ops);
  const Eigen::VectorXd gwx = g.x * w_local, gwy = g.y * w_local;

  Eigen::VectorXd wa(nq), wdx(nq), wdy(nq);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const Point& x = pts[static_cast<std::size_t>(q)];
    wa(q) = t.weights(q) * checked_coefficient(problem, x, rw(q));
    const double au = t.weights(q) * problem.a_u(x, rw(q));
    wdx(q) = au * gwx(q);
    wdy(q) = au * gwy(q);
  }

  NonlinearLocalMatrices m;
  m.diffusion = g.x.transpose() * wa.asDiagonal() * g.x + g.y.transpose() * wa.asDiagonal() * g.y + ops.stabilization(weights);
  m.derivative = (g.x.transpose() * wdx.asDiagonal() + g.y.transpose() * wdy.asDiagonal()) * r_values;
  return m;
}

double nonlinear_form(const Discretization& disc, const QuasilinearProblemData& problem, const FaceWeights& weights,
                      const HybridVector& w, const HybridVector& u, const HybridVector& v) {
  return sum_cells(disc, u, v, [&](std::size_t c) {
    return nonlinear_local_matrices(disc.context(c), disc.ops(c), problem, weights[c], w.restrict_to(disc.mesh().cell(c), c)).diffusion;
  });
}

double linearized_form(const Discretization& disc, const QuasilinearProblemData& problem, const FaceWeights& weights,
                       const HybridVector& w, const HybridVector& psi, const HybridVector& v) {
  return sum_cells(disc, psi, v, [&](std::size_t c) {
    auto m = nonlinear_local_matrices(disc.context(c), disc.ops(c), problem, weights[c], w.restrict_to(disc.mesh().cell(c), c));
    return Eigen::MatrixXd(m.diffusion + m.derivative);
  });
}

double exact_linearized_form(const Discretization& disc, const QuasilinearProblemData& problem, const FaceWeights& weights,
                             const ScalarFunction& u, const VectorFunction& grad_u, const HybridVector& psi,
                             const HybridVector& v) {
  require_coefficient(problem);
  return sum_cells(disc, psi, v, [&](std::size_t c) {
    const CellContext& ctx = disc.context(c);
    const LocalOperators& ops = disc.ops(c);
    const Tabulation& t = ctx.cell_basis().table();
    const auto& pts = ctx.cell_basis().rule().points;
    const GradientValues g = gradient_values(ctx, ops);
    const Eigen::MatrixXd r_values = t.values * ops.reconstruction;
    const auto nq = t.weights.size();
    Eigen::VectorXd wa(nq), wdx(nq), wdy(nq);
    for (Eigen::Index q = 0; q < nq; ++q) {
      const Point& x = pts[static_cast<std::size_t>(q)];
      const double uq = u(x);
      const Point du = grad_u(x);
      wa(q) = t.weights(q) * checked_coefficient(problem, x, uq);
      const double au = t.weights(q) * problem.a_u(x, uq);
      wdx(q) = au * du.x();
      wdy(q) = au * du.y();
    }
    return Eigen::MatrixXd(g.x.transpose() * wa.asDiagonal() * g.x + g.y.transpose() * wa.asDiagonal() * g.y +
                           (g.x.transpose() * wdx.asDiagonal() + g.y.transpose() * wdy.asDiagonal()) * r_values +
                           ops.stabilization(weights[c]));
  });
}

double load_form(const Discretization& disc, const ScalarFunction& f, const HybridVector& v) {
  double s = 0.;
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c) {
    const CellContext& ctx = disc.context(c);
    s += local_load(ctx, f).dot(v.restrict_to(ctx.cell(), c));
  }
  return s;
}

//------------------------------------------------------------------------------
// Iteration
//------------------------------------------------------------------------------

QuasilinearSolution fixed_point_solve(const Discretization& disc, const QuasilinearProblemData& problem,
                                      const IterationOptions& options) {
  require_coefficient(problem);
  if (!problem.f) throw Error(ErrorKind::InvalidProblem, "load f is required");
  if (!(options.tol > 0.)) throw Error(ErrorKind::InvalidArgument, "tolerance must be positive");
  if (options.max_iter < 1) throw Error(ErrorKind::InvalidArgument, "max_iter must be at least 1");

  const Mesh& mesh = disc.mesh();
  LinearProblemData poisson;
  poisson.a = [](const Point&) { return 1.; };
  poisson.p = problem.f;

  QuasilinearSolution sol;
  sol.initial_guess = solve_linear_problem(disc, poisson);
  HybridVector u = sol.initial_guess;
  IterationReport& report = sol.report;

  for (int n = 0; n < options.max_iter; ++n) {
    const FaceWeights weights = options.weights == WeightPolicy::CurrentIterate ? iterate_face_weights(disc, problem, u)
                                                                                : constant_face_weights(disc, problem.upper);
    std::vector<LocalSystem> locals;
    locals.reserve(mesh.n_cells());
    for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
      const CellContext& ctx = disc.context(c);
      const Eigen::VectorXd w = u.restrict_to(ctx.cell(), c);
      NonlinearLocalMatrices m = nonlinear_local_matrices(ctx, disc.ops(c), problem, weights[c], w);
      LocalSystem ls;
      ls.matrix = m.diffusion + m.derivative;
      ls.rhs = ls.matrix * w - m.diffusion * w + local_load(ctx, problem.f);
      locals.push_back(std::move(ls));
    }
    HybridVector next = solve_linear(disc, assemble_and_condense(disc, locals));

    HybridVector diff = next;
    diff.data() -= u.data();
    const double num = gradient_norm(disc, diff);
    const double den = gradient_norm(disc, next);
    const double increment = num == 0. ? 0. : num / den;

    report.iterations = n + 1;
    report.increments.push_back(increment);
    u = std::move(next);
    if (increment <= options.tol) {
      report.converged = true;
      break;
    }
    if (!(increment <= options.divergence_threshold)) {
      report.diverged = true;
      break;
    }
  }

  if (problem.grad_u_exact) {
    const GradientError e = reconstructed_gradient_error(disc, problem.grad_u_exact, u);
    report.absolute_error = e.absolute;
    report.relative_error = e.relative;
  }
  sol.u = std::move(u);
  return sol;
}

GradientError reconstructed_gradient_error(const Discretization& disc, const VectorFunction& grad_u, const HybridVector& uh) {
  const double norm = gradient_l2_norm(disc, grad_u);
  if (!(norm > 0.)) throw Error(ErrorKind::InvalidArgument, "exact gradient has zero norm");
  const double abs = energy_error(disc, grad_u, uh);
  return {abs, abs / norm};
}

}  // namespace hho
