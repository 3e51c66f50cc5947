// HHO scheme for -div(a(x, u) grad u) = f with u = 0 on the boundary, and the
// linearized iteration used to solve it.
//
//   N_h(w; u, v)     = sum_T (a(R w) G u, G v)_T + s_h(u, v)
//   Nlin_h(w; psi, v) = sum_T (a(R w) G psi, G v)_T
//                     + sum_T (a_u(R w) R psi G w, G v)_T + s_h(psi, v)
//
// Iteration: Nlin_h(u^n; u^{n+1}, v) = Nlin_h(u^n; u^n, v) - N_h(u^n; u^n, v) + l(v),
// started from the Poisson solution of -Lap u = f.

#ifndef HHO_QUASILINEAR_HPP
#define HHO_QUASILINEAR_HPP

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include <hho/linear.hpp>

namespace hho {

using CoefficientFunction = std::function<double(const Point&, double)>;

struct QuasilinearProblemData {
  CoefficientFunction a;
  CoefficientFunction a_u;  ///< partial derivative of a in its second argument
  ScalarFunction f;
  double alpha = 0.;        ///< lower bound of a
  double upper = std::numeric_limits<double>::infinity();  ///< upper bound M of a
  ScalarFunction u_exact;         ///< optional
  VectorFunction grad_u_exact;    ///< optional
};

/// Stabilization weights a_TF, one vector per cell aligned with Cell::faces.
using FaceWeights = std::vector<std::vector<double>>;

enum class WeightPolicy {
  CurrentIterate,  ///< a_TF = max over face quadrature points of a(x, R_T w(x)), refreshed every step
  UpperBound,      ///< a_TF = upper bound M of the coefficient, fixed
};

/// a_TF from the reconstruction of w.
FaceWeights iterate_face_weights(const Discretization& disc, const QuasilinearProblemData& problem, const HybridVector& w);
FaceWeights constant_face_weights(const Discretization& disc, double value);

struct NonlinearLocalMatrices {
  Eigen::MatrixXd diffusion;   ///< (a(R w) G e_j, G e_i) + stabilization
  Eigen::MatrixXd derivative;  ///< (a_u(R w) R e_j G w, G e_i)
};

/// Entry (i, j) tests with local basis vector i and acts on local basis vector j.
NonlinearLocalMatrices nonlinear_local_matrices(const CellContext& ctx, const LocalOperators& ops,
                                                const QuasilinearProblemData& problem, std::span<const double> weights,
                                                const Eigen::Ref<const Eigen::VectorXd>& w_local);

double nonlinear_form(const Discretization& disc, const QuasilinearProblemData& problem, const FaceWeights& weights,
                      const HybridVector& w, const HybridVector& u, const HybridVector& v);

double linearized_form(const Discretization& disc, const QuasilinearProblemData& problem, const FaceWeights& weights,
                       const HybridVector& w, const HybridVector& psi, const HybridVector& v);

/// Linearization around a supplied continuous u (needs u and grad u); analysis
/// device, not used by the solver.
double exact_linearized_form(const Discretization& disc, const QuasilinearProblemData& problem, const FaceWeights& weights,
                             const ScalarFunction& u, const VectorFunction& grad_u, const HybridVector& psi,
                             const HybridVector& v);

/// l(v) = sum_T (f, v_T)_T
double load_form(const Discretization& disc, const ScalarFunction& f, const HybridVector& v);

struct IterationOptions {
  double tol = 1e-10;
  int max_iter = 25;
  double divergence_threshold = 1e3;
  WeightPolicy weights = WeightPolicy::CurrentIterate;
};

struct IterationReport {
  int iterations = 0;
  std::vector<double> increments;  ///< ||G(u^{n+1} - u^n)|| / ||G u^{n+1}||
  bool converged = false;
  bool diverged = false;
  std::optional<double> absolute_error;  ///< ||grad u - G u_h|| when grad_u_exact is given
  std::optional<double> relative_error;
};

struct QuasilinearSolution {
  HybridVector u;
  HybridVector initial_guess;
  IterationReport report;
};

QuasilinearSolution fixed_point_solve(const Discretization& disc, const QuasilinearProblemData& problem,
                                      const IterationOptions& options = {});

struct GradientError {
  double absolute;
  double relative;
};

/// ||grad u - G_h u_h|| and its ratio to ||grad u||; throws when ||grad u|| = 0.
GradientError reconstructed_gradient_error(const Discretization& disc, const VectorFunction& grad_u, const HybridVector& uh);

}  // namespace hho

#endif
