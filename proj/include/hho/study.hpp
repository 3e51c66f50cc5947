// Manufactured problems and the convergence-study driver.
//
// Registry:
//   quasilinear     a(u) = 1 + u, u = x(1-x)y(1-y)
//   nonselfadjoint  u = sin(pi x) sin(pi y), a = 1 + x, b = (1, 1), a0 = 1
//   poisson         a = 1, u = (1 + x + 2y)^(k+1), boundary values from I_h u
//
// rate(l) = log(e_l / e_{l-1}) / log(h_l / h_{l-1}), h = max h_T, e the relative
// reconstructed-gradient error ||grad u - G_h u_h|| / ||grad u||.

#ifndef HHO_STUDY_HPP
#define HHO_STUDY_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <hho/quasilinear.hpp>

namespace hho {

enum class ProblemKind { Poisson, Nonselfadjoint, Quasilinear };

ProblemKind parse_problem(std::string_view name);
std::string_view problem_name(ProblemKind kind);

struct ManufacturedSolution {
  ScalarFunction u;
  VectorFunction grad;
  ScalarFunction laplacian;
};

/// "bubble", "sine", "zero", or "poly<d>" for (1 + x + 2y)^d, d in 0..8.
ManufacturedSolution manufactured_solution(std::string_view name);

struct LinearCoefficients {
  ScalarFunction a;
  VectorFunction grad_a;
  VectorFunction b;    ///< empty means zero
  ScalarFunction a0;   ///< empty means zero
};

using CoefficientGradient = std::function<Point(const Point&, double)>;

struct QuasilinearCoefficients {
  CoefficientFunction a;
  CoefficientFunction a_u;
  CoefficientGradient grad_x;  ///< gradient of a in x at fixed u; empty means zero
  double alpha = 0.;
  double upper = 0.;
};

/// p = -div(a grad u) + b . grad u + a0 u
ScalarFunction manufactured_rhs(const ManufacturedSolution& solution, const LinearCoefficients& coefficients);
/// f = -div(a(x, u) grad u)
ScalarFunction manufactured_rhs(const ManufacturedSolution& solution, const QuasilinearCoefficients& coefficients);

struct ManufacturedProblem {
  ProblemKind kind;
  ManufacturedSolution solution;
  LinearCoefficients linear;        ///< poisson, nonselfadjoint
  QuasilinearCoefficients quasi;    ///< quasilinear
  bool lift_boundary = false;       ///< impose I_h u on boundary faces

  LinearProblemData linear_data() const;
  QuasilinearProblemData quasilinear_data() const;
};

/// Registry entry; the poisson probe depends on the degree k.
ManufacturedProblem manufactured_problem(ProblemKind kind, int k);

struct StudyConfig {
  ProblemKind problem = ProblemKind::Quasilinear;
  MeshFamily family = MeshFamily::Cartesian;
  std::vector<int> degrees{0};
  int level_min = 0;
  int level_max = 0;
  double tol = 1e-10;
  int max_iter = 25;
  WeightPolicy weights = WeightPolicy::CurrentIterate;
  int quad_degree = -1;        ///< -1: 2(k+2)
  std::string mesh_path;       ///< non-empty: solve on this mesh only, level column 0
  std::uint64_t seed = 0;      ///< for randomized property suites

  void validate() const;
};

struct RateRow {
  std::string family;
  int k = 0;
  int level = 0;
  double h = 0.;
  std::size_t ndof = 0;
  double error = 0.;
  std::optional<double> rate;
  // Not part of the CSV.
  int iterations = 0;
  bool converged = true;
  std::vector<double> increments;
};

struct RateTable {
  std::vector<RateRow> rows;
};

/// Fills the rate column between consecutive levels of each (family, k) group.
void compute_rates(RateTable& table);

/// Solves one row; the mesh is generated or read by the caller.
RateRow solve_row(const StudyConfig& config, const Mesh& mesh, int k, int level, std::string_view family_label);

RateTable run_study(const StudyConfig& config);

std::string format_csv(const RateTable& table);
RateTable parse_csv(std::string_view text);
void write_csv(const RateTable& table, const std::string& path);

/// One block per (family, k): "# family=<f> k=<k>" then "log10_h log10_error"
/// pairs; blocks separated by two blank lines.
std::string format_plotdata(const RateTable& table);
void write_plotdata(const RateTable& table, const std::string& path);

/// Shortest round-trip decimal form.
std::string format_double(double value);

}  // namespace hho

#endif
