#include <hho/local_operators.hpp>

#include <algorithm>
#include <cmath>

#include <hho/error.hpp>

namespace hho {

//------------------------------------------------------------------------------
// HybridVector
//------------------------------------------------------------------------------

HybridVector::HybridVector(const Mesh& mesh, int degree)
    : m_degree(degree), m_n_cells(mesh.n_cells()), m_n_faces(mesh.n_faces()) {
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "degree must be nonnegative");
  m_data = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m_n_cells * cell_dofs() + m_n_faces * face_dofs()));
}

Eigen::VectorXd HybridVector::restrict_to(const Cell& cell, std::size_t cell_id) const {
  const auto dc = static_cast<Eigen::Index>(cell_dofs());
  const auto df = static_cast<Eigen::Index>(face_dofs());
  Eigen::VectorXd local(dc + df * static_cast<Eigen::Index>(cell.faces.size()));
  local.head(dc) = this->cell(cell_id);
  for (std::size_t j = 0; j < cell.faces.size(); ++j) local.segment(dc + static_cast<Eigen::Index>(j) * df, df) = face(cell.faces[j]);
  return local;
}

bool HybridVector::vanishes_on_boundary(const Mesh& mesh) const {
  for (std::size_t f = 0; f < mesh.n_faces(); ++f)
    if (mesh.face(f).boundary && (face(f).array() != 0.).any()) return false;
  return true;
}

//------------------------------------------------------------------------------
// CellContext
//------------------------------------------------------------------------------

CellContext::CellContext(const Mesh& mesh, std::size_t cell_id, int degree, int quad_degree)
    : m_mesh(&mesh), m_cell_id(cell_id), m_degree(degree), m_cell(mesh, cell_id, degree + 1, quad_degree) {
  const Cell& c = mesh.cell(cell_id);
  m_faces.reserve(c.faces.size());
  m_traces.reserve(c.faces.size());
  for (std::size_t f : c.faces) {
    m_faces.emplace_back(mesh, f, degree, quad_degree);
    m_traces.push_back(tabulate(m_cell.basis(), m_faces.back().rule()));
  }
}

//------------------------------------------------------------------------------
// Reconstructions
//------------------------------------------------------------------------------

Eigen::MatrixXd build_reconstruction(const CellContext& ctx) {
  const auto n1 = static_cast<Eigen::Index>(ctx.cell_basis().basis().size());
  const auto dc = static_cast<Eigen::Index>(ctx.cell_dofs());
  const auto df = static_cast<Eigen::Index>(ctx.face_dofs());
  const auto nloc = static_cast<Eigen::Index>(ctx.n_local());
  const Eigen::MatrixXd& K = ctx.cell_basis().stiffness();

  // Right-hand side of (grad R v, grad w)_T = (grad v_T, grad w)_T + sum_F (v_F - v_T, grad w . n_TF)_F
  Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(n1, nloc);
  rhs.leftCols(dc) = K.leftCols(dc);
  for (std::size_t j = 0; j < ctx.n_faces(); ++j) {
    const Point& n = ctx.cell().normals[j];
    const Tabulation& tr = ctx.trace(j);
    const Eigen::MatrixXd dn = n.x() * tr.dx + n.y() * tr.dy;
    const Eigen::MatrixXd dnw = dn.transpose() * tr.weights.asDiagonal();
    rhs.leftCols(dc) -= dnw * tr.values.leftCols(dc);
    rhs.middleCols(ctx.face_offset(j), df) += dnw * ctx.face_basis(j).table().values;
  }

  // Solve on the zero-mean complement (drop the constant), then fix the mean.
  Eigen::MatrixXd R = Eigen::MatrixXd::Zero(n1, nloc);
  Eigen::LDLT<Eigen::MatrixXd> ldlt(K.bottomRightCorner(n1 - 1, n1 - 1));
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().array() > 0.).all()) {
    throw Error(ErrorKind::Numerical, "singular reconstruction system on cell " + std::to_string(ctx.cell_id()));
  }
  R.bottomRows(n1 - 1) = ldlt.solve(rhs.bottomRows(n1 - 1));

  const Eigen::RowVectorXd means = ctx.cell_basis().mass().row(0);  // integrals of the basis functions
  Eigen::RowVectorXd target = Eigen::RowVectorXd::Zero(nloc);
  target.head(dc) = means.head(dc);
  R.row(0) = (target - means.tail(n1 - 1) * R.bottomRows(n1 - 1)) / means(0);
  return R;
}

Eigen::MatrixXd build_gradient_reconstruction(const CellContext& ctx) {
  const auto dc = static_cast<Eigen::Index>(ctx.cell_dofs());
  const auto df = static_cast<Eigen::Index>(ctx.face_dofs());
  const auto nloc = static_cast<Eigen::Index>(ctx.n_local());
  const Tabulation& t = ctx.cell_basis().table();
  const Eigen::MatrixXd phi_w = t.values.leftCols(dc).transpose() * t.weights.asDiagonal();
  Eigen::LLT<Eigen::MatrixXd> llt(ctx.cell_basis().mass().topLeftCorner(dc, dc));
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::Numerical, "singular cell mass matrix on cell " + std::to_string(ctx.cell_id()));

  Eigen::MatrixXd G(2 * dc, nloc);
  for (int c = 0; c < 2; ++c) {
    const Eigen::MatrixXd& d = c == 0 ? t.dx : t.dy;
    Eigen::MatrixXd rhs = Eigen::MatrixXd::Zero(dc, nloc);
    rhs.leftCols(dc) = phi_w * d.leftCols(dc);
    for (std::size_t j = 0; j < ctx.n_faces(); ++j) {
      const double nc = ctx.cell().normals[j][c];
      const Tabulation& tr = ctx.trace(j);
      const Eigen::MatrixXd tau_w = nc * tr.values.leftCols(dc).transpose() * tr.weights.asDiagonal();
      rhs.leftCols(dc) -= tau_w * tr.values.leftCols(dc);
      rhs.middleCols(ctx.face_offset(j), df) += tau_w * ctx.face_basis(j).table().values;
    }
    G.middleRows(c * dc, dc) = llt.solve(rhs);
  }
  return G;
}

Stabilization build_stabilization(const CellContext& ctx, const Eigen::MatrixXd& reconstruction,
                                  std::span<const double> weights) {
  if (weights.size() != ctx.n_faces()) throw Error(ErrorKind::InvalidArgument, "one stabilization weight per face required");
  for (double w : weights)
    if (!(w > 0.)) throw Error(ErrorKind::InvalidArgument, "stabilization weights must be positive");

  const auto dc = static_cast<Eigen::Index>(ctx.cell_dofs());
  const auto df = static_cast<Eigen::Index>(ctx.face_dofs());
  const auto nloc = static_cast<Eigen::Index>(ctx.n_local());
  const Eigen::MatrixXd& M = ctx.cell_basis().mass();

  // D = R - pi_T^k R, in the degree k+1 basis
  Eigen::MatrixXd D = reconstruction;
  D.topRows(dc) -= M.topLeftCorner(dc, dc).llt().solve(M.topRows(dc) * reconstruction);

  Stabilization out;
  out.form = Eigen::MatrixXd::Zero(nloc, nloc);
  for (std::size_t j = 0; j < ctx.n_faces(); ++j) {
    const Tabulation& tr = ctx.trace(j);
    const FaceBasisSet& fb = ctx.face_basis(j);
    const Eigen::MatrixXd psi_w = fb.table().values.transpose() * tr.weights.asDiagonal();
    const Eigen::LLT<Eigen::MatrixXd> mf(fb.mass());
    Eigen::MatrixXd S = -mf.solve(psi_w * tr.values * D);
    S.leftCols(dc) -= mf.solve(psi_w * tr.values.leftCols(dc));
    S.middleCols(ctx.face_offset(j), df) += Eigen::MatrixXd::Identity(df, df);
    const double h_F = ctx.mesh().face(ctx.cell().faces[j]).diameter;
    out.form += (weights[j] / h_F) * S.transpose() * fb.mass() * S;
    out.face_residuals.push_back(std::move(S));
  }
  return out;
}

LocalOperators build_local_operators(const CellContext& ctx) {
  LocalOperators ops;
  ops.cell_id = ctx.cell_id();
  ops.degree = ctx.degree();
  ops.quad_degree = ctx.cell_basis().rule().degree;
  ops.faces = ctx.cell().faces;
  for (std::size_t f : ops.faces) ops.face_diameters.push_back(ctx.mesh().face(f).diameter);
  ops.reconstruction = build_reconstruction(ctx);
  ops.gradient = build_gradient_reconstruction(ctx);
  const std::vector<double> unit(ctx.n_faces(), 1.);
  ops.face_residuals = build_stabilization(ctx, ops.reconstruction, unit).face_residuals;
  for (std::size_t j = 0; j < ctx.n_faces(); ++j) ops.face_masses.push_back(ctx.face_basis(j).mass());
  const auto dc = static_cast<Eigen::Index>(ctx.cell_dofs());
  ops.cell_mass = ctx.cell_basis().mass().topLeftCorner(dc, dc);
  return ops;
}

Eigen::MatrixXd LocalOperators::stabilization(std::span<const double> weights) const {
  const auto nloc = static_cast<Eigen::Index>(n_local());
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(nloc, nloc);
  for (std::size_t j = 0; j < face_residuals.size(); ++j)
    s += (weights[j] / face_diameters[j]) * face_residuals[j].transpose() * face_masses[j] * face_residuals[j];
  return s;
}

double LocalOperators::gradient_norm_squared(const Eigen::Ref<const Eigen::VectorXd>& local) const {
  const Eigen::VectorXd g = gradient * local;
  const auto dc = cell_mass.rows();
  return g.head(dc).dot(cell_mass * g.head(dc)) + g.tail(dc).dot(cell_mass * g.tail(dc));
}

std::vector<double> face_sup_weights(const CellContext& ctx, const ScalarFunction& a) {
  std::vector<double> w(ctx.n_faces(), 0.);
  for (std::size_t j = 0; j < ctx.n_faces(); ++j)
    for (const Point& p : ctx.face_basis(j).rule().points) w[j] = std::max(w[j], std::abs(a(p)));
  return w;
}

//------------------------------------------------------------------------------
// Discretization, interpolation, norms
//------------------------------------------------------------------------------

Discretization::Discretization(const Mesh& mesh, int degree, int quad_degree)
    : m_mesh(&mesh), m_degree(degree), m_quad_degree(quad_degree < 0 ? default_quadrature_degree(degree) : quad_degree) {
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "degree must be nonnegative");
  m_contexts.reserve(mesh.n_cells());
  m_ops.reserve(mesh.n_cells());
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    m_contexts.emplace_back(mesh, c, m_degree, m_quad_degree);
    m_ops.push_back(build_local_operators(m_contexts.back()));
  }
}

HybridVector interpolate(const Discretization& disc, const ScalarFunction& v) {
  const Mesh& mesh = disc.mesh();
  HybridVector out = disc.zero();
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    out.cell(c) = project_cell(disc.context(c).cell_basis(), v, cell_dimension(disc.degree()));
  }
  for (std::size_t f = 0; f < mesh.n_faces(); ++f) {
    const FaceBasisSet set(mesh, f, disc.degree(), disc.quad_degree());
    out.face(f) = project_face(set, v);
  }
  return out;
}

Eigen::VectorXd reconstruction_at(const LocalOperators& ops, const Tabulation& table,
                                  const Eigen::Ref<const Eigen::VectorXd>& local) {
  return table.values * (ops.reconstruction * local);
}

DiscreteNorms norms(const Discretization& disc, const HybridVector& v, const ScalarFunction& a) {
  double energy = 0., h1 = 0.;
  const auto dc = static_cast<Eigen::Index>(cell_dimension(disc.degree()));
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c) {
    const CellContext& ctx = disc.context(c);
    const LocalOperators& ops = disc.ops(c);
    const Eigen::VectorXd local = v.restrict_to(ctx.cell(), c);
    const Tabulation& t = ctx.cell_basis().table();

    const Eigen::VectorXd g = ops.gradient * local;
    const Eigen::VectorXd gx = t.values.leftCols(dc) * g.head(dc);
    const Eigen::VectorXd gy = t.values.leftCols(dc) * g.tail(dc);
    const Eigen::VectorXd vx = t.dx.leftCols(dc) * local.head(dc);
    const Eigen::VectorXd vy = t.dy.leftCols(dc) * local.head(dc);
    for (Eigen::Index q = 0; q < t.weights.size(); ++q) {
      const double aq = a(ctx.cell_basis().rule().points[static_cast<std::size_t>(q)]);
      energy += t.weights(q) * aq * (gx(q) * gx(q) + gy(q) * gy(q));
      h1 += t.weights(q) * (vx(q) * vx(q) + vy(q) * vy(q));
    }

    const std::vector<double> weights = face_sup_weights(ctx, a);
    for (std::size_t j = 0; j < ctx.n_faces(); ++j) {
      const Tabulation& tr = ctx.trace(j);
      const Eigen::VectorXd jump = ctx.face_basis(j).table().values * local.segment(ctx.face_offset(j), ctx.face_dofs()) -
                                   tr.values.leftCols(dc) * local.head(dc);
      const double jj = jump.dot(tr.weights.cwiseProduct(jump));
      const double h_F = ops.face_diameters[j];
      energy += weights[j] / h_F * jj;
      h1 += jj / h_F;
    }
  }
  return {std::sqrt(energy), std::sqrt(h1)};
}

double gradient_norm(const Discretization& disc, const HybridVector& v) {
  double s = 0.;
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c)
    s += disc.ops(c).gradient_norm_squared(v.restrict_to(disc.mesh().cell(c), c));
  return std::sqrt(s);
}

double cell_l2_norm(const Discretization& disc, const HybridVector& v) {
  double s = 0.;
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c) {
    const auto vc = v.cell(c);
    s += vc.dot(disc.ops(c).cell_mass * vc);
  }
  return std::sqrt(s);
}

}  // namespace hho
