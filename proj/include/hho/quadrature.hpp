// Quadrature rules on polygonal cells and on faces.
//
// Cell rules are built on the fan of sub-triangles (centroid, v_i, v_{i+1});
// each sub-triangle carries a collapsed Gauss-Legendre product rule.

#ifndef HHO_QUADRATURE_HPP
#define HHO_QUADRATURE_HPP

#include <vector>

#include <hho/mesh.hpp>

namespace hho {

struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int degree = 0;  ///< exactness degree

  std::size_t size() const { return points.size(); }
};

/// Gauss-Legendre nodes and weights on [0,1] (Golub-Welsch).
void gauss_legendre(int n_points, std::vector<double>& nodes, std::vector<double>& weights);

/// Rule exact for bivariate polynomials of total degree <= degree on the triangle (a, b, c).
QuadratureRule triangle_quadrature(const Point& a, const Point& b, const Point& c, int degree);

QuadratureRule cell_quadrature(const Mesh& mesh, std::size_t cell_id, int degree);
QuadratureRule face_quadrature(const Mesh& mesh, std::size_t face_id, int degree);

}  // namespace hho

#endif
