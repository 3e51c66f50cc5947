// Hybrid unknowns and the per-cell HHO operators.
//
// Local DOF ordering on a cell T: the cell block (dim P^k(T)) first, then one
// block of k+1 face coefficients per face, faces in ascending global id
// (Cell::faces).
//
//   R_T^{k+1}: potential reconstruction, P^{k+1}(T) coefficients
//   G_T^k    : gradient reconstruction, P^k(T)^2 coefficients (x block, y block)
//   S_F^k    : face residual pi_F^k(v_F - v_T - (R v - pi_T^k R v))

#ifndef HHO_LOCAL_OPERATORS_HPP
#define HHO_LOCAL_OPERATORS_HPP

#include <span>
#include <vector>

#include <Eigen/Dense>

#include <hho/basis.hpp>
#include <hho/mesh.hpp>

namespace hho {

/// Default quadrature exactness for a scheme of degree k.
constexpr int default_quadrature_degree(int k) { return 2 * (k + 2); }

/// Global coefficient vector: all cell blocks, then all face blocks.
class HybridVector {
public:
  HybridVector() = default;
  HybridVector(const Mesh& mesh, int degree);

  int degree() const { return m_degree; }
  std::size_t n_cells() const { return m_n_cells; }
  std::size_t n_faces() const { return m_n_faces; }
  std::size_t cell_dofs() const { return cell_dimension(m_degree); }
  std::size_t face_dofs() const { return face_dimension(m_degree); }

  Eigen::VectorXd& data() { return m_data; }
  const Eigen::VectorXd& data() const { return m_data; }

  auto cell(std::size_t i) { return m_data.segment(cell_offset(i), static_cast<Eigen::Index>(cell_dofs())); }
  auto cell(std::size_t i) const { return m_data.segment(cell_offset(i), static_cast<Eigen::Index>(cell_dofs())); }
  auto face(std::size_t f) { return m_data.segment(face_offset(f), static_cast<Eigen::Index>(face_dofs())); }
  auto face(std::size_t f) const { return m_data.segment(face_offset(f), static_cast<Eigen::Index>(face_dofs())); }

  Eigen::Index cell_offset(std::size_t i) const { return static_cast<Eigen::Index>(i * cell_dofs()); }
  Eigen::Index face_offset(std::size_t f) const {
    return static_cast<Eigen::Index>(m_n_cells * cell_dofs() + f * face_dofs());
  }

  /// Local vector [v_T; v_F...] for a cell, faces in Cell::faces order.
  Eigen::VectorXd restrict_to(const Cell& cell, std::size_t cell_id) const;

  /// True when every boundary-face block is exactly zero (membership in U_{h,0}^k).
  bool vanishes_on_boundary(const Mesh& mesh) const;

private:
  int m_degree = 0;
  std::size_t m_n_cells = 0, m_n_faces = 0;
  Eigen::VectorXd m_data;
};

/// Bases and quadrature needed to build the operators of one cell.
class CellContext {
public:
  CellContext(const Mesh& mesh, std::size_t cell_id, int degree, int quad_degree);

  const Mesh& mesh() const { return *m_mesh; }
  const Cell& cell() const { return m_mesh->cell(m_cell_id); }
  std::size_t cell_id() const { return m_cell_id; }
  int degree() const { return m_degree; }

  /// Degree k+1 cell basis; its first cell_dofs() functions span P^k(T).
  const CellBasisSet& cell_basis() const { return m_cell; }
  const FaceBasisSet& face_basis(std::size_t j) const { return m_faces[j]; }
  /// Degree-(k+1) cell basis tabulated on the rule of local face j.
  const Tabulation& trace(std::size_t j) const { return m_traces[j]; }

  std::size_t n_faces() const { return m_faces.size(); }
  std::size_t cell_dofs() const { return cell_dimension(m_degree); }
  std::size_t face_dofs() const { return face_dimension(m_degree); }
  std::size_t n_local() const { return cell_dofs() + n_faces() * face_dofs(); }
  Eigen::Index face_offset(std::size_t j) const { return static_cast<Eigen::Index>(cell_dofs() + j * face_dofs()); }

private:
  const Mesh* m_mesh;
  std::size_t m_cell_id;
  int m_degree;
  CellBasisSet m_cell;
  std::vector<FaceBasisSet> m_faces;
  std::vector<Tabulation> m_traces;
};

struct LocalOperators {
  std::size_t cell_id = 0;
  int degree = 0;
  int quad_degree = 0;
  std::vector<std::size_t> faces;
  std::vector<double> face_diameters;
  Eigen::MatrixXd reconstruction;               ///< dim P^{k+1} x n_local
  Eigen::MatrixXd gradient;                     ///< 2 dim P^k x n_local
  std::vector<Eigen::MatrixXd> face_residuals;  ///< S_F, (k+1) x n_local each
  std::vector<Eigen::MatrixXd> face_masses;     ///< M_F
  Eigen::MatrixXd cell_mass;                    ///< mass matrix of P^k(T)

  std::size_t n_local() const { return static_cast<std::size_t>(reconstruction.cols()); }

  /// sum_F (weight_F / h_F) S_F^T M_F S_F
  Eigen::MatrixXd stabilization(std::span<const double> weights) const;

  /// ||G v||_T^2 for a local vector.
  double gradient_norm_squared(const Eigen::Ref<const Eigen::VectorXd>& local) const;
};

Eigen::MatrixXd build_reconstruction(const CellContext& ctx);
Eigen::MatrixXd build_gradient_reconstruction(const CellContext& ctx);

struct Stabilization {
  std::vector<Eigen::MatrixXd> face_residuals;
  Eigen::MatrixXd form;
};

/// Face residuals S_F and the weighted form for positive weights a_TF (one per local face).
Stabilization build_stabilization(const CellContext& ctx, const Eigen::MatrixXd& reconstruction,
                                  std::span<const double> weights);

LocalOperators build_local_operators(const CellContext& ctx);

/// max |a| over the quadrature points of each local face.
std::vector<double> face_sup_weights(const CellContext& ctx, const ScalarFunction& a);

/// Mesh, degree and the operators of every cell. The mesh must outlive it.
class Discretization {
public:
  Discretization(const Mesh& mesh, int degree, int quad_degree = -1);

  const Mesh& mesh() const { return *m_mesh; }
  int degree() const { return m_degree; }
  int quad_degree() const { return m_quad_degree; }
  const LocalOperators& ops(std::size_t cell) const { return m_ops[cell]; }
  const CellContext& context(std::size_t cell) const { return m_contexts[cell]; }

  HybridVector zero() const { return HybridVector(*m_mesh, m_degree); }
  /// Number of unknowns left after static condensation: (k+1) * #interior faces.
  std::size_t condensed_dofs() const { return face_dimension(m_degree) * m_mesh->n_interior_faces(); }

private:
  const Mesh* m_mesh;
  int m_degree;
  int m_quad_degree;
  std::vector<CellContext> m_contexts;
  std::vector<LocalOperators> m_ops;
};

/// I_h^k v = ((pi_T^k v)_T, (pi_F^k v)_F)
HybridVector interpolate(const Discretization& disc, const ScalarFunction& v);

/// R_T^{k+1} v evaluated at the points of a cell tabulation (degree k+1 basis).
Eigen::VectorXd reconstruction_at(const LocalOperators& ops, const Tabulation& table,
                                  const Eigen::Ref<const Eigen::VectorXd>& local);

struct DiscreteNorms {
  double energy;  ///< ||v||_{a,h}
  double h1;      ///< ||v||_{1,h}
};

/// ||v||_{a,h} with a_TF = max |a| on face quadrature points, and ||v||_{1,h}.
DiscreteNorms norms(const Discretization& disc, const HybridVector& v, const ScalarFunction& a);

/// Global ||G_h v||.
double gradient_norm(const Discretization& disc, const HybridVector& v);

/// ||v_h||_{L2} of the cell unknowns.
double cell_l2_norm(const Discretization& disc, const HybridVector& v);

}  // namespace hho

#endif
