// HHO scheme for -div(a grad u) + b . grad u + a0 u = p with u = 0 on the boundary.
//
// Local form on a cell T, rows = test functions, columns = unknowns:
//   (a G u, G v)_T + s_T(u, v) + (b . grad R u, v_T)_T + (a0 u_T, v_T)_T
// with a_TF = max |a| over the quadrature points of F.
//
// Cell unknowns are always eliminated by static condensation; the global
// system lives on interior-face unknowns only.

#ifndef HHO_LINEAR_HPP
#define HHO_LINEAR_HPP

#include <optional>
#include <vector>

#include <Eigen/Sparse>

#include <hho/local_operators.hpp>

namespace hho {

struct LinearProblemData {
  ScalarFunction a;
  VectorFunction b;    ///< empty means zero
  ScalarFunction a0;   ///< empty means zero
  ScalarFunction p;
};

struct LocalSystem {
  Eigen::MatrixXd matrix;
  Eigen::VectorXd rhs;
};

/// Checks a > 0 and a0 >= 0 on the cell quadrature points; throws InvalidProblem otherwise.
void validate(const Discretization& disc, const LinearProblemData& problem);

LocalSystem local_bilinear_form(const CellContext& ctx, const LocalOperators& ops, const LinearProblemData& problem);

/// Load vector (f, v_T)_T in the cell block, zero elsewhere.
Eigen::VectorXd local_load(const CellContext& ctx, const ScalarFunction& f);

struct CellRecovery {
  Eigen::PartialPivLU<Eigen::MatrixXd> cell_block;
  Eigen::MatrixXd cell_to_faces;  ///< A_TF
  Eigen::VectorXd cell_rhs;
};

struct CondensedSystem {
  Eigen::SparseMatrix<double> matrix;
  Eigen::VectorXd rhs;
  std::vector<Eigen::Index> face_row;  ///< first row of each face block, -1 on boundary faces
  std::vector<CellRecovery> recovery;
  HybridVector boundary_values;         ///< face blocks imposed on boundary faces
};

/// Statically condenses the local systems onto interior faces. Boundary-face
/// unknowns are fixed to `boundary` (zero when absent). Throws Numerical with
/// the cell id when a cell block is singular.
CondensedSystem assemble_and_condense(const Discretization& disc, const std::vector<LocalSystem>& locals,
                                      const HybridVector* boundary = nullptr);

/// Sparse LU on the face system (relative residual <= 1e-12), then cell recovery.
HybridVector solve_linear(const Discretization& disc, const CondensedSystem& system);

/// Reference path without condensation; used to cross-check the condensed solve.
HybridVector solve_uncondensed(const Discretization& disc, const std::vector<LocalSystem>& locals,
                               const HybridVector* boundary = nullptr);

std::vector<LocalSystem> assemble_local_systems(const Discretization& disc, const LinearProblemData& problem);

HybridVector solve_linear_problem(const Discretization& disc, const LinearProblemData& problem,
                                  const HybridVector* boundary = nullptr);

/// (sum_T ||grad u - G_T u_T||_T^2)^{1/2}
double energy_error(const Discretization& disc, const VectorFunction& grad_u, const HybridVector& uh);

/// ||grad u|| on the same quadrature.
double gradient_l2_norm(const Discretization& disc, const VectorFunction& grad_u);

}  // namespace hho

#endif
