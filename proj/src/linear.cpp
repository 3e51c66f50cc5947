#include <hho/linear.hpp>

#include <cmath>
#include <sstream>

#include <Eigen/SparseLU>

#include <hho/error.hpp>

namespace hho {

void validate(const Discretization& disc, const LinearProblemData& problem) {
  if (!problem.a || !problem.p) throw Error(ErrorKind::InvalidProblem, "diffusion coefficient and load are required");
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c) {
    for (const Point& x : cell_quadrature(disc.mesh(), c, disc.quad_degree()).points) {
      if (!(problem.a(x) > 0.)) {
        std::ostringstream msg;
        msg << "diffusion coefficient a = " << problem.a(x) << " is not positive at (" << x.x() << ", " << x.y() << ")";
        throw Error(ErrorKind::InvalidProblem, msg.str());
      }
      if (problem.a0 && problem.a0(x) < 0.) {
        std::ostringstream msg;
        msg << "reaction coefficient a0 = " << problem.a0(x) << " is negative at (" << x.x() << ", " << x.y() << ")";
        throw Error(ErrorKind::InvalidProblem, msg.str());
      }
    }
  }
}

Eigen::VectorXd local_load(const CellContext& ctx, const ScalarFunction& f) {
  const Tabulation& t = ctx.cell_basis().table();
  const auto& pts = ctx.cell_basis().rule().points;
  const auto dc = static_cast<Eigen::Index>(ctx.cell_dofs());
  Eigen::VectorXd fw(t.weights.size());
  for (Eigen::Index q = 0; q < fw.size(); ++q) fw(q) = t.weights(q) * f(pts[static_cast<std::size_t>(q)]);
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(ctx.n_local()));
  rhs.head(dc) = t.values.leftCols(dc).transpose() * fw;
  return rhs;
}

LocalSystem local_bilinear_form(const CellContext& ctx, const LocalOperators& ops, const LinearProblemData& problem) {
  const Tabulation& t = ctx.cell_basis().table();
  const auto& pts = ctx.cell_basis().rule().points;
  const auto dc = static_cast<Eigen::Index>(ctx.cell_dofs());
  const auto nq = t.weights.size();

  // Values at quadrature points of G e_j (x, y) and grad R e_j, one column per local DOF.
  const Eigen::MatrixXd gx = t.values.leftCols(dc) * ops.gradient.topRows(dc);
  const Eigen::MatrixXd gy = t.values.leftCols(dc) * ops.gradient.bottomRows(dc);

  Eigen::VectorXd wa(nq), wa0 = Eigen::VectorXd::Zero(nq);
  Eigen::VectorXd wbx = Eigen::VectorXd::Zero(nq), wby = Eigen::VectorXd::Zero(nq);
  for (Eigen::Index q = 0; q < nq; ++q) {
    const Point& x = pts[static_cast<std::size_t>(q)];
    wa(q) = t.weights(q) * problem.a(x);
    if (problem.a0) wa0(q) = t.weights(q) * problem.a0(x);
    if (problem.b) {
      const Point b = problem.b(x);
      wbx(q) = t.weights(q) * b.x();
      wby(q) = t.weights(q) * b.y();
    }
  }

  LocalSystem ls;
  ls.matrix = gx.transpose() * wa.asDiagonal() * gx + gy.transpose() * wa.asDiagonal() * gy;
  ls.matrix += ops.stabilization(face_sup_weights(ctx, problem.a));

  const Eigen::MatrixXd phi = t.values.leftCols(dc);
  if (problem.b) {
    const Eigen::MatrixXd rx = t.dx * ops.reconstruction;
    const Eigen::MatrixXd ry = t.dy * ops.reconstruction;
    ls.matrix.topRows(dc) += phi.transpose() * (wbx.asDiagonal() * rx + wby.asDiagonal() * ry);
  }
  if (problem.a0) ls.matrix.topLeftCorner(dc, dc) += phi.transpose() * wa0.asDiagonal() * phi;

  ls.rhs = local_load(ctx, problem.p);
  return ls;
}

std::vector<LocalSystem> assemble_local_systems(const Discretization& disc, const LinearProblemData& problem) {
  validate(disc, problem);
  std::vector<LocalSystem> locals;
  locals.reserve(disc.mesh().n_cells());
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c) locals.push_back(local_bilinear_form(disc.context(c), disc.ops(c), problem));
  return locals;
}

//------------------------------------------------------------------------------
// Static condensation
//------------------------------------------------------------------------------

namespace {

std::vector<Eigen::Index> interior_face_rows(const Mesh& mesh, Eigen::Index df, Eigen::Index& n_rows) {
  std::vector<Eigen::Index> rows(mesh.n_faces(), -1);
  n_rows = 0;
  for (std::size_t f = 0; f < mesh.n_faces(); ++f) {
    if (!mesh.face(f).boundary) {
      rows[f] = n_rows;
      n_rows += df;
    }
  }
  return rows;
}

}  // namespace

CondensedSystem assemble_and_condense(const Discretization& disc, const std::vector<LocalSystem>& locals,
                                      const HybridVector* boundary) {
  const Mesh& mesh = disc.mesh();
  if (locals.size() != mesh.n_cells()) throw Error(ErrorKind::InvalidArgument, "one local system per cell required");
  const auto dc = static_cast<Eigen::Index>(cell_dimension(disc.degree()));
  const auto df = static_cast<Eigen::Index>(face_dimension(disc.degree()));

  CondensedSystem sys;
  Eigen::Index n_rows = 0;
  sys.face_row = interior_face_rows(mesh, df, n_rows);
  sys.boundary_values = disc.zero();
  if (boundary) {
    for (std::size_t f = 0; f < mesh.n_faces(); ++f)
      if (mesh.face(f).boundary) sys.boundary_values.face(f) = boundary->face(f);
  }
  sys.rhs = Eigen::VectorXd::Zero(n_rows);
  sys.recovery.reserve(mesh.n_cells());

  std::vector<Eigen::Triplet<double>> triplets;
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    const LocalSystem& ls = locals[c];
    const Eigen::Index nf = ls.matrix.cols() - dc;

    CellRecovery rec;
    rec.cell_block.compute(ls.matrix.topLeftCorner(dc, dc));
    if (!(rec.cell_block.rcond() > 1e-14)) {
      throw Error(ErrorKind::Numerical, "singular cell block on cell " + std::to_string(c) + " (centroid " +
                                            std::to_string(cell.centroid.x()) + ", " + std::to_string(cell.centroid.y()) + ")");
    }
    rec.cell_to_faces = ls.matrix.topRightCorner(dc, nf);
    rec.cell_rhs = ls.rhs.head(dc);

    const Eigen::MatrixXd schur = ls.matrix.bottomRightCorner(nf, nf) -
                                  ls.matrix.bottomLeftCorner(nf, dc) * rec.cell_block.solve(rec.cell_to_faces);
    const Eigen::VectorXd schur_rhs = ls.rhs.tail(nf) - ls.matrix.bottomLeftCorner(nf, dc) * rec.cell_block.solve(rec.cell_rhs);

    Eigen::VectorXd fixed = Eigen::VectorXd::Zero(nf);
    for (std::size_t j = 0; j < cell.faces.size(); ++j) {
      if (mesh.face(cell.faces[j]).boundary) fixed.segment(static_cast<Eigen::Index>(j) * df, df) = sys.boundary_values.face(cell.faces[j]);
    }
    const Eigen::VectorXd lifted_rhs = schur_rhs - schur * fixed;

    for (std::size_t i = 0; i < cell.faces.size(); ++i) {
      const Eigen::Index row = sys.face_row[cell.faces[i]];
      if (row < 0) continue;
      const auto li = static_cast<Eigen::Index>(i) * df;
      sys.rhs.segment(row, df) += lifted_rhs.segment(li, df);
      for (std::size_t j = 0; j < cell.faces.size(); ++j) {
        const Eigen::Index col = sys.face_row[cell.faces[j]];
        if (col < 0) continue;
        const auto lj = static_cast<Eigen::Index>(j) * df;
        for (Eigen::Index a = 0; a < df; ++a)
          for (Eigen::Index b = 0; b < df; ++b) triplets.emplace_back(row + a, col + b, schur(li + a, lj + b));
      }
    }
    sys.recovery.push_back(std::move(rec));
  }

  sys.matrix.resize(n_rows, n_rows);
  sys.matrix.setFromTriplets(triplets.begin(), triplets.end());
  sys.matrix.makeCompressed();
  return sys;
}

namespace {

// b - A x, summed in long double.
Eigen::VectorXd extended_residual(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& x, const Eigen::VectorXd& b) {
  std::vector<long double> r(static_cast<std::size_t>(b.size()));
  for (Eigen::Index i = 0; i < b.size(); ++i) r[static_cast<std::size_t>(i)] = b(i);
  for (Eigen::Index j = 0; j < a.outerSize(); ++j)
    for (Eigen::SparseMatrix<double>::InnerIterator it(a, j); it; ++it)
      r[static_cast<std::size_t>(it.row())] -= static_cast<long double>(it.value()) * x(it.col());
  Eigen::VectorXd out(b.size());
  for (Eigen::Index i = 0; i < b.size(); ++i) out(i) = static_cast<double>(r[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace

HybridVector solve_linear(const Discretization& disc, const CondensedSystem& system) {
  const Mesh& mesh = disc.mesh();
  const auto df = static_cast<Eigen::Index>(face_dimension(disc.degree()));
  HybridVector u = system.boundary_values;

  Eigen::VectorXd x = Eigen::VectorXd::Zero(system.rhs.size());
  const double bnorm = system.rhs.norm();
  if (system.rhs.size() > 0 && bnorm > 0.) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
    lu.analyzePattern(system.matrix);
    lu.factorize(system.matrix);
    if (lu.info() != Eigen::Success) throw Error(ErrorKind::Numerical, "sparse factorization of the face system failed: " + lu.lastErrorMessage());
    x = lu.solve(system.rhs);
    // Iterative refinement with the residual accumulated in extended precision.
    Eigen::VectorXd r = extended_residual(system.matrix, x, system.rhs);
    for (int it = 0; it < 4 && r.norm() > 1e-14 * bnorm; ++it) {
      x += lu.solve(r);
      r = extended_residual(system.matrix, x, system.rhs);
    }
    const double rel = r.norm() / bnorm;
    if (!(rel <= 1e-12)) {
      std::ostringstream msg;
      msg << "face system relative residual " << std::scientific << rel << " exceeds 1e-12";
      throw Error(ErrorKind::Numerical, msg.str());
    }
  }

  for (std::size_t f = 0; f < mesh.n_faces(); ++f)
    if (system.face_row[f] >= 0) u.face(f) = x.segment(system.face_row[f], df);

  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    const Eigen::VectorXd local = u.restrict_to(cell, c);
    const CellRecovery& rec = system.recovery[c];
    u.cell(c) = rec.cell_block.solve(rec.cell_rhs - rec.cell_to_faces * local.tail(local.size() - u.cell(c).size()));
  }
  return u;
}

HybridVector solve_uncondensed(const Discretization& disc, const std::vector<LocalSystem>& locals, const HybridVector* boundary) {
  const Mesh& mesh = disc.mesh();
  HybridVector u = disc.zero();
  if (boundary) {
    for (std::size_t f = 0; f < mesh.n_faces(); ++f)
      if (mesh.face(f).boundary) u.face(f) = boundary->face(f);
  }
  const auto dc = static_cast<Eigen::Index>(u.cell_dofs());
  const auto df = static_cast<Eigen::Index>(u.face_dofs());

  // Free unknowns: every cell block and interior face block.
  std::vector<Eigen::Index> index(static_cast<std::size_t>(u.data().size()), -1);
  Eigen::Index n = 0;
  for (std::size_t c = 0; c < mesh.n_cells(); ++c)
    for (Eigen::Index a = 0; a < dc; ++a) index[static_cast<std::size_t>(u.cell_offset(c) + a)] = n++;
  for (std::size_t f = 0; f < mesh.n_faces(); ++f)
    if (!mesh.face(f).boundary)
      for (Eigen::Index a = 0; a < df; ++a) index[static_cast<std::size_t>(u.face_offset(f) + a)] = n++;

  std::vector<Eigen::Triplet<double>> triplets;
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    std::vector<Eigen::Index> global;
    for (Eigen::Index a = 0; a < dc; ++a) global.push_back(u.cell_offset(c) + a);
    for (std::size_t f : cell.faces)
      for (Eigen::Index a = 0; a < df; ++a) global.push_back(u.face_offset(f) + a);
    const LocalSystem& ls = locals[c];
    for (std::size_t i = 0; i < global.size(); ++i) {
      const Eigen::Index row = index[static_cast<std::size_t>(global[i])];
      if (row < 0) continue;
      rhs(row) += ls.rhs(static_cast<Eigen::Index>(i));
      for (std::size_t j = 0; j < global.size(); ++j) {
        const double aij = ls.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
        const Eigen::Index col = index[static_cast<std::size_t>(global[j])];
        if (col < 0) {
          rhs(row) -= aij * u.data()(global[j]);
        } else {
          triplets.emplace_back(row, col, aij);
        }
      }
    }
  }
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(triplets.begin(), triplets.end());
  Eigen::SparseLU<Eigen::SparseMatrix<double>, Eigen::COLAMDOrdering<int>> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw Error(ErrorKind::Numerical, "factorization of the full system failed");
  const Eigen::VectorXd x = lu.solve(rhs);
  for (std::size_t i = 0; i < index.size(); ++i)
    if (index[i] >= 0) u.data()(static_cast<Eigen::Index>(i)) = x(index[i]);
  return u;
}

HybridVector solve_linear_problem(const Discretization& disc, const LinearProblemData& problem, const HybridVector* boundary) {
  return solve_linear(disc, assemble_and_condense(disc, assemble_local_systems(disc, problem), boundary));
}

//------------------------------------------------------------------------------
// Errors
//------------------------------------------------------------------------------

double energy_error(const Discretization& disc, const VectorFunction& grad_u, const HybridVector& uh) {
  const auto dc = static_cast<Eigen::Index>(cell_dimension(disc.degree()));
  double s = 0.;
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c) {
    const CellBasisSet& set = disc.context(c).cell_basis();
    const Tabulation& t = set.table();
    const Eigen::VectorXd g = disc.ops(c).gradient * uh.restrict_to(disc.mesh().cell(c), c);
    const Eigen::VectorXd gx = t.values.leftCols(dc) * g.head(dc);
    const Eigen::VectorXd gy = t.values.leftCols(dc) * g.tail(dc);
    for (Eigen::Index q = 0; q < t.weights.size(); ++q) {
      const Point e = grad_u(set.rule().points[static_cast<std::size_t>(q)]) - Point(gx(q), gy(q));
      s += t.weights(q) * e.squaredNorm();
    }
  }
  return std::sqrt(s);
}

double gradient_l2_norm(const Discretization& disc, const VectorFunction& grad_u) {
  double s = 0.;
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c) {
    const QuadratureRule rule = cell_quadrature(disc.mesh(), c, disc.quad_degree());
    for (std::size_t q = 0; q < rule.size(); ++q) s += rule.weights[q] * grad_u(rule.points[q]).squaredNorm();
  }
  return std::sqrt(s);
}

}  // namespace hho
