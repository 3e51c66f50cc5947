#include <hho/quadrature.hpp>

#include <cmath>
#include <map>
#include <mutex>

#include <Eigen/Eigenvalues>

#include <hho/error.hpp>

namespace hho {

namespace {

struct GaussTable {
  std::vector<double> nodes, weights;
};

const GaussTable& cached_gauss(int n) {
  static std::mutex mutex;
  static std::map<int, GaussTable> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(n);
  if (it == cache.end()) {
    GaussTable t;
    gauss_legendre(n, t.nodes, t.weights);
    it = cache.emplace(n, std::move(t)).first;
  }
  return it->second;
}

}  // namespace

void gauss_legendre(int n_points, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n_points < 1) throw Error(ErrorKind::InvalidArgument, "Gauss-Legendre rule needs at least one point");
  // Jacobi matrix of the Legendre three-term recurrence on [-1, 1].
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n_points, n_points);
  for (int i = 1; i < n_points; ++i) {
    const double b = i / std::sqrt(4. * i * i - 1.);
    jacobi(i, i - 1) = b;
    jacobi(i - 1, i) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(jacobi);
  nodes.resize(n_points);
  weights.resize(n_points);
  for (int i = 0; i < n_points; ++i) {
    const double v0 = eig.eigenvectors()(0, i);
    nodes[i] = 0.5 * (eig.eigenvalues()(i) + 1.);
    weights[i] = v0 * v0;  // 2 v0^2 on [-1,1], halved on [0,1]
  }
}

QuadratureRule triangle_quadrature(const Point& a, const Point& b, const Point& c, int degree) {
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "quadrature degree must be nonnegative");
  // Duffy map (s, t) -> a + s (b - a) + s t (c - b), Jacobian 2|T| s; the extra
  // factor s raises the degree in s by one.
  const int n = (degree + 3) / 2;
  const GaussTable& g = cached_gauss(n);
  const double twice_area = (b - a).x() * (c - a).y() - (b - a).y() * (c - a).x();

  QuadratureRule rule;
  rule.degree = degree;
  rule.points.reserve(n * n);
  rule.weights.reserve(n * n);
  for (int i = 0; i < n; ++i) {
    const double s = g.nodes[i];
    for (int j = 0; j < n; ++j) {
      const double t = g.nodes[j];
      rule.points.push_back(a + s * (b - a) + s * t * (c - b));
      rule.weights.push_back(g.weights[i] * g.weights[j] * s * twice_area);
    }
  }
  return rule;
}

QuadratureRule cell_quadrature(const Mesh& mesh, std::size_t cell_id, int degree) {
  if (cell_id >= mesh.n_cells()) throw Error(ErrorKind::InvalidArgument, "cell id out of range");
  const Cell& cell = mesh.cell(cell_id);
  QuadratureRule rule;
  rule.degree = degree;
  const std::size_t nv = cell.vertices.size();
  for (std::size_t i = 0; i < nv; ++i) {
    const Point& p = mesh.vertex(cell.vertices[i]);
    const Point& q = mesh.vertex(cell.vertices[(i + 1) % nv]);
    const double twice_area = (p - cell.centroid).x() * (q - cell.centroid).y() - (p - cell.centroid).y() * (q - cell.centroid).x();
    if (!(twice_area > 1e-14 * cell.diameter * cell.diameter)) {
      throw Error(ErrorKind::Mesh, "cell " + std::to_string(cell_id) + " is not star-shaped with respect to its centroid");
    }
    QuadratureRule sub = triangle_quadrature(cell.centroid, p, q, degree);
    rule.points.insert(rule.points.end(), sub.points.begin(), sub.points.end());
    rule.weights.insert(rule.weights.end(), sub.weights.begin(), sub.weights.end());
  }
  return rule;
}

QuadratureRule face_quadrature(const Mesh& mesh, std::size_t face_id, int degree) {
  if (face_id >= mesh.n_faces()) throw Error(ErrorKind::InvalidArgument, "face id out of range");
  if (degree < 0) throw Error(ErrorKind::InvalidArgument, "quadrature degree must be nonnegative");
  const Face& face = mesh.face(face_id);
  const Point& a = mesh.vertex(face.vertices[0]);
  const Point& b = mesh.vertex(face.vertices[1]);
  const GaussTable& g = cached_gauss(degree / 2 + 1);
  QuadratureRule rule;
  rule.degree = degree;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    rule.points.push_back(a + g.nodes[i] * (b - a));
    rule.weights.push_back(g.weights[i] * face.diameter);
  }
  return rule;
}

}  // namespace hho
