#include <hho/basis.hpp>

#include <hho/error.hpp>

namespace hho {

std::vector<std::array<int, 2>> monomial_exponents(int degree) {
  std::vector<std::array<int, 2>> e;
  for (int d = 0; d <= degree; ++d)
    for (int b = 0; b <= d; ++b) e.push_back({d - b, b});
  return e;
}

//------------------------------------------------------------------------------
// CellBasis
//------------------------------------------------------------------------------

CellBasis::CellBasis(const Point& center, double scale, int degree)
    : m_center(center), m_scale(scale), m_degree(degree), m_exponents(monomial_exponents(degree)) {
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "basis degree must be nonnegative");
  if (!(scale > 0.)) throw Error(ErrorKind::InvalidArgument, "basis scale must be positive");
}

namespace {

// powers[i] = t^i for i <= degree
Eigen::VectorXd powers(double t, int degree) {
  Eigen::VectorXd p(degree + 1);
  p(0) = 1.;
  for (int i = 1; i <= degree; ++i) p(i) = p(i - 1) * t;
  return p;
}

}  // namespace

Eigen::VectorXd CellBasis::values(const Point& p) const {
  const Point s = (p - m_center) / m_scale;
  const Eigen::VectorXd px = powers(s.x(), m_degree), py = powers(s.y(), m_degree);
  Eigen::VectorXd v(size());
  for (std::size_t i = 0; i < size(); ++i) v(i) = px(m_exponents[i][0]) * py(m_exponents[i][1]);
  return v;
}

Eigen::Matrix<double, Eigen::Dynamic, 2> CellBasis::gradients(const Point& p) const {
  const Point s = (p - m_center) / m_scale;
  const Eigen::VectorXd px = powers(s.x(), m_degree), py = powers(s.y(), m_degree);
  Eigen::Matrix<double, Eigen::Dynamic, 2> g(size(), 2);
  for (std::size_t i = 0; i < size(); ++i) {
    const int a = m_exponents[i][0], b = m_exponents[i][1];
    g(i, 0) = a > 0 ? a * px(a - 1) * py(b) / m_scale : 0.;
    g(i, 1) = b > 0 ? b * px(a) * py(b - 1) / m_scale : 0.;
  }
  return g;
}

//------------------------------------------------------------------------------
// FaceBasis
//------------------------------------------------------------------------------

FaceBasis::FaceBasis(const Point& midpoint, const Point& tangent, double scale, int degree)
    : m_midpoint(midpoint), m_tangent(tangent), m_scale(scale), m_degree(degree) {
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "basis degree must be nonnegative");
  if (!(scale > 0.)) throw Error(ErrorKind::InvalidArgument, "basis scale must be positive");
}

Eigen::VectorXd FaceBasis::values(const Point& p) const {
  return powers((p - m_midpoint).dot(m_tangent) / m_scale, m_degree);
}

//------------------------------------------------------------------------------
// Tabulations and basis sets
//------------------------------------------------------------------------------

Tabulation tabulate(const CellBasis& basis, const QuadratureRule& rule) {
  const auto nq = static_cast<Eigen::Index>(rule.size());
  const auto n = static_cast<Eigen::Index>(basis.size());
  Tabulation t;
  t.values.resize(nq, n);
  t.dx.resize(nq, n);
  t.dy.resize(nq, n);
  t.weights = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), nq);
  for (Eigen::Index q = 0; q < nq; ++q) {
    t.values.row(q) = basis.values(rule.points[q]).transpose();
    const auto g = basis.gradients(rule.points[q]);
    t.dx.row(q) = g.col(0).transpose();
    t.dy.row(q) = g.col(1).transpose();
  }
  return t;
}

Tabulation tabulate(const FaceBasis& basis, const QuadratureRule& rule) {
  const auto nq = static_cast<Eigen::Index>(rule.size());
  Tabulation t;
  t.values.resize(nq, static_cast<Eigen::Index>(basis.size()));
  t.weights = Eigen::Map<const Eigen::VectorXd>(rule.weights.data(), nq);
  for (Eigen::Index q = 0; q < nq; ++q) t.values.row(q) = basis.values(rule.points[q]).transpose();
  return t;
}

CellBasisSet::CellBasisSet(const Mesh& mesh, std::size_t cell_id, int degree, int quad_degree)
    : m_cell_id(cell_id),
      m_basis(mesh.cell(cell_id).centroid, mesh.cell(cell_id).diameter, degree),
      m_rule(cell_quadrature(mesh, cell_id, quad_degree)),
      m_table(tabulate(m_basis, m_rule)) {
  const auto& W = m_table.weights.asDiagonal();
  m_mass = m_table.values.transpose() * W * m_table.values;
  m_stiffness = m_table.dx.transpose() * W * m_table.dx + m_table.dy.transpose() * W * m_table.dy;
}

FaceBasisSet::FaceBasisSet(const Mesh& mesh, std::size_t face_id, int degree, int quad_degree)
    : m_face_id(face_id),
      m_basis(mesh.face(face_id).midpoint, mesh.face(face_id).tangent, mesh.face(face_id).diameter, degree),
      m_rule(face_quadrature(mesh, face_id, quad_degree)),
      m_table(tabulate(m_basis, m_rule)) {
  m_mass = m_table.values.transpose() * m_table.weights.asDiagonal() * m_table.values;
}

//------------------------------------------------------------------------------
// Projections
//------------------------------------------------------------------------------

namespace {

Eigen::VectorXd l2_project(const Eigen::MatrixXd& mass, const Tabulation& t, const QuadratureRule& rule,
                           const ScalarFunction& f, Eigen::Index n) {
  Eigen::VectorXd fq(static_cast<Eigen::Index>(rule.size()));
  for (std::size_t q = 0; q < rule.size(); ++q) fq(static_cast<Eigen::Index>(q)) = f(rule.points[q]);
  const Eigen::VectorXd rhs = t.values.leftCols(n).transpose() * t.weights.cwiseProduct(fq);
  Eigen::LLT<Eigen::MatrixXd> llt(mass.topLeftCorner(n, n));
  if (llt.info() != Eigen::Success) throw Error(ErrorKind::Numerical, "singular mass matrix in L2 projection");
  return llt.solve(rhs);
}

}  // namespace

Eigen::VectorXd project_cell(const CellBasisSet& set, const ScalarFunction& f, std::size_t n) {
  const auto dim = static_cast<Eigen::Index>(n == 0 ? set.basis().size() : n);
  return l2_project(set.mass(), set.table(), set.rule(), f, dim);
}

Eigen::VectorXd project_face(const FaceBasisSet& set, const ScalarFunction& f) {
  return l2_project(set.mass(), set.table(), set.rule(), f, static_cast<Eigen::Index>(set.basis().size()));
}

double evaluate(const CellBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& coefficients, const Point& p) {
  return basis.values(p).head(coefficients.size()).dot(coefficients);
}

double evaluate(const FaceBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& coefficients, const Point& p) {
  return basis.values(p).head(coefficients.size()).dot(coefficients);
}

}  // namespace hho
