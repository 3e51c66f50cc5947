// Property suites and the acceptance criteria.
//
// Each suite returns one CheckResult per named check; the optional callback
// sees results as they are produced.

#ifndef HHO_CHECKS_HPP
#define HHO_CHECKS_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <hho/study.hpp>

namespace hho {

struct CheckResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

using CheckCallback = std::function<void(const CheckResult&)>;

/// Polynomial with random coefficients in [-1, 1] on the global monomials x^a y^b, a + b <= degree.
class RandomPolynomial {
public:
  RandomPolynomial(int degree, std::uint64_t seed);
  double operator()(const Point& p) const;
  Point gradient(const Point& p) const;
  int degree() const { return m_degree; }

private:
  int m_degree;
  std::vector<std::array<int, 2>> m_exponents;
  std::vector<double> m_coefficients;
};

/// Hybrid vector with entries uniform in [-1, 1]; boundary blocks zeroed when `homogeneous`.
HybridVector random_hybrid_vector(const Discretization& disc, std::uint64_t seed, bool homogeneous = true);

struct ExactnessErrors {
  double reconstruction = 0.;  ///< max |R I q - q| at cell quadrature points, q in P^{k+1}
  double stabilization = 0.;   ///< max |S_F I q| coefficients
  double gradient = 0.;        ///< max |G I v - pi(grad v)| at cell quadrature points, v in P^{k+3}
};

/// Worst case over `n_cells` cells drawn at random (all cells when fewer).
ExactnessErrors polynomial_exactness(const Discretization& disc, std::size_t n_cells, std::uint64_t seed);

/// Poisson probe with u in P^{k+1}: max |u_h - I_h u| over all coefficients.
double poisson_exactness_error(const Discretization& disc);

struct GateauxSample {
  double derivative;  ///< Ntilde_lin(w; psi, v)
  double error_coarse;  ///< relative central-difference error at eps = 1e-4
  double error_fine;    ///< at eps = 1e-5
};

/// Central differences of w -> N_h(w; w, v) with the stabilization weights
/// frozen at those of w. Triples are drawn from U_{h,0}^k, the direction scaled by 10.
std::vector<GateauxSample> gateaux_samples(const Discretization& disc, const QuasilinearProblemData& problem,
                                           int n_triples, std::uint64_t seed);

/// Error ratio between the two steps consistent with second order (>= 25 for a 10x step).
bool gateaux_second_order(const GateauxSample& s);

/// Smooth coefficient used by the Gateaux check: a(x, t) = 3/2 + sin(t + x)/2.
QuasilinearProblemData gateaux_problem();

/// ||x_condensed - x_full|| / ||x_full|| on the nonselfadjoint problem.
double condensation_gap(const Discretization& disc);

struct ApproximationErrors {
  double h = 0.;
  double reconstruction = 0.;  ///< ||v - R I v||
  double gradient = 0.;        ///< ||grad v - G I v||
  double projection = 0.;      ///< ||v - pi_T^k v||
};

ApproximationErrors approximation_errors(const Discretization& disc, const ManufacturedSolution& v);

/// Least-squares slope of log(e) against log(h).
double fitted_slope(const std::vector<double>& h, const std::vector<double>& e);

/// Properties run by `hho check`.
std::vector<CheckResult> run_property_checks(std::uint64_t seed, const CheckCallback& callback = {});

/// The eight acceptance criteria, in order.
std::vector<CheckResult> run_acceptance(std::uint64_t seed, const CheckCallback& callback = {});

}  // namespace hho

#endif
