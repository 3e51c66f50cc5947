// Scaled monomial bases on cells and faces.
//
// Cell basis of degree l: ((x - x_T)/h_T)^a ((y - y_T)/h_T)^b for a + b <= l, in
// graded order (all degree-0 terms, then degree 1, ...). The first
// (k+1)(k+2)/2 functions of a degree-(k+1) basis therefore span P^k(T).
// Face basis of degree l: (s/h_F)^i, s the arclength coordinate measured from
// the face midpoint along the face tangent.

#ifndef HHO_BASIS_HPP
#define HHO_BASIS_HPP

#include <array>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include <hho/mesh.hpp>
#include <hho/quadrature.hpp>

namespace hho {

using ScalarFunction = std::function<double(const Point&)>;
using VectorFunction = std::function<Point(const Point&)>;

constexpr std::size_t cell_dimension(int degree) {
  return degree < 0 ? 0 : static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
}
constexpr std::size_t face_dimension(int degree) { return degree < 0 ? 0 : static_cast<std::size_t>(degree + 1); }

/// Exponent pairs (a, b) of the graded monomial ordering.
std::vector<std::array<int, 2>> monomial_exponents(int degree);

class CellBasis {
public:
  CellBasis(const Point& center, double scale, int degree);

  int degree() const { return m_degree; }
  std::size_t size() const { return m_exponents.size(); }
  const Point& center() const { return m_center; }
  double scale() const { return m_scale; }
  const std::vector<std::array<int, 2>>& exponents() const { return m_exponents; }

  Eigen::VectorXd values(const Point& p) const;
  /// Row i holds the gradient of basis function i.
  Eigen::Matrix<double, Eigen::Dynamic, 2> gradients(const Point& p) const;

private:
  Point m_center;
  double m_scale;
  int m_degree;
  std::vector<std::array<int, 2>> m_exponents;
};

class FaceBasis {
public:
  FaceBasis(const Point& midpoint, const Point& tangent, double scale, int degree);

  int degree() const { return m_degree; }
  std::size_t size() const { return static_cast<std::size_t>(m_degree + 1); }

  Eigen::VectorXd values(const Point& p) const;

private:
  Point m_midpoint, m_tangent;
  double m_scale;
  int m_degree;
};

/// Basis values tabulated at quadrature points (one row per point).
struct Tabulation {
  Eigen::MatrixXd values;
  Eigen::MatrixXd dx, dy;  ///< empty for face bases
  Eigen::VectorXd weights;
};

Tabulation tabulate(const CellBasis& basis, const QuadratureRule& rule);
Tabulation tabulate(const FaceBasis& basis, const QuadratureRule& rule);

/// Cell basis with its quadrature rule, tabulation, mass and stiffness matrices.
class CellBasisSet {
public:
  CellBasisSet(const Mesh& mesh, std::size_t cell_id, int degree, int quad_degree);

  std::size_t cell_id() const { return m_cell_id; }
  const CellBasis& basis() const { return m_basis; }
  const QuadratureRule& rule() const { return m_rule; }
  const Tabulation& table() const { return m_table; }
  const Eigen::MatrixXd& mass() const { return m_mass; }
  const Eigen::MatrixXd& stiffness() const { return m_stiffness; }

private:
  std::size_t m_cell_id;
  CellBasis m_basis;
  QuadratureRule m_rule;
  Tabulation m_table;
  Eigen::MatrixXd m_mass, m_stiffness;
};

class FaceBasisSet {
public:
  FaceBasisSet(const Mesh& mesh, std::size_t face_id, int degree, int quad_degree);

  std::size_t face_id() const { return m_face_id; }
  const FaceBasis& basis() const { return m_basis; }
  const QuadratureRule& rule() const { return m_rule; }
  const Tabulation& table() const { return m_table; }
  const Eigen::MatrixXd& mass() const { return m_mass; }

private:
  std::size_t m_face_id;
  FaceBasis m_basis;
  QuadratureRule m_rule;
  Tabulation m_table;
  Eigen::MatrixXd m_mass;
};

/// L2-orthogonal projection onto the span of the first `n` basis functions
/// (all of them when n == 0). Throws on a singular mass matrix.
Eigen::VectorXd project_cell(const CellBasisSet& set, const ScalarFunction& f, std::size_t n = 0);
Eigen::VectorXd project_face(const FaceBasisSet& set, const ScalarFunction& f);

double evaluate(const CellBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& coefficients, const Point& p);
double evaluate(const FaceBasis& basis, const Eigen::Ref<const Eigen::VectorXd>& coefficients, const Point& p);

}  // namespace hho

#endif
