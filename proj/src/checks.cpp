#include <hho/checks.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

#include <hho/error.hpp>

namespace hho {

namespace {

constexpr std::array<MeshFamily, 4> all_families{MeshFamily::Triangular, MeshFamily::Cartesian, MeshFamily::Kershaw,
                                                  MeshFamily::Hexagonal};

std::string fmt(double x) {
  std::ostringstream s;
  s.precision(3);
  s << x;
  return s.str();
}

struct Reporter {
  const CheckCallback& callback;
  std::vector<CheckResult> results;

  void add(std::string name, bool passed, std::string detail) {
    results.push_back({std::move(name), passed, std::move(detail)});
    if (callback) callback(results.back());
  }

  // Exceptions count as failures of the check that raised them.
  template <typename Fn>
  void run(const std::string& name, Fn&& fn) {
    try {
      std::string detail;
      const bool ok = fn(detail);
      add(name, ok, std::move(detail));
    } catch (const std::exception& e) {
      add(name, false, std::string("error: ") + e.what());
    }
  }
};

std::string mesh_violation(const Mesh& mesh) {
  double area = 0.;
  for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
    const Cell& cell = mesh.cell(c);
    area += cell.area;
    Point closure = Point::Zero();
    for (std::size_t j = 0; j < cell.faces.size(); ++j) {
      const Face& f = mesh.face(cell.faces[j]);
      if (std::abs(cell.normals[j].norm() - 1.) > 1e-12) return "non-unit normal in cell " + std::to_string(c);
      if (f.diameter > cell.diameter + 1e-12) return "h_F > h_T in cell " + std::to_string(c);
      closure += f.diameter * cell.normals[j];
      if (cell.normals[j].dot(f.midpoint - cell.centroid) <= 0.) return "inward normal in cell " + std::to_string(c);
    }
    if (closure.norm() > 1e-12) return "open polygon at cell " + std::to_string(c);
  }
  if (std::abs(area - 1.) > 1e-12) return "cell areas sum to " + fmt(area);
  for (std::size_t i = 0; i < mesh.n_faces(); ++i) {
    const Face& f = mesh.face(i);
    if (f.cells.size() != (f.boundary ? 1u : 2u)) return "face " + std::to_string(i) + " has wrong incidence";
    if (!f.boundary) {
      Point sum = Point::Zero();
      for (std::size_t c : f.cells) {
        const Cell& cell = mesh.cell(c);
        const auto j = static_cast<std::size_t>(std::find(cell.faces.begin(), cell.faces.end(), i) - cell.faces.begin());
        sum += cell.normals[j];
      }
      if (sum.norm() > 1e-12) return "normals of face " + std::to_string(i) + " are not opposite";
    }
  }
  return {};
}

bool strictly_decreasing(const std::vector<double>& v) {
  for (std::size_t i = 1; i < v.size(); ++i)
    if (!(v[i] < v[i - 1])) return false;
  return true;
}

}  // namespace

//------------------------------------------------------------------------------
// Building blocks
//------------------------------------------------------------------------------

RandomPolynomial::RandomPolynomial(int degree, std::uint64_t seed) : m_degree(degree), m_exponents(monomial_exponents(degree)) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1., 1.);
  for (std::size_t i = 0; i < m_exponents.size(); ++i) m_coefficients.push_back(dist(rng));
}

double RandomPolynomial::operator()(const Point& p) const {
  double s = 0.;
  for (std::size_t i = 0; i < m_exponents.size(); ++i)
    s += m_coefficients[i] * std::pow(p.x(), m_exponents[i][0]) * std::pow(p.y(), m_exponents[i][1]);
  return s;
}

Point RandomPolynomial::gradient(const Point& p) const {
  Point g = Point::Zero();
  for (std::size_t i = 0; i < m_exponents.size(); ++i) {
    const auto [a, b] = m_exponents[i];
    if (a > 0) g.x() += m_coefficients[i] * a * std::pow(p.x(), a - 1) * std::pow(p.y(), b);
    if (b > 0) g.y() += m_coefficients[i] * b * std::pow(p.x(), a) * std::pow(p.y(), b - 1);
  }
  return g;
}

HybridVector random_hybrid_vector(const Discretization& disc, std::uint64_t seed, bool homogeneous) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> dist(-1., 1.);
  HybridVector v = disc.zero();
  for (Eigen::Index i = 0; i < v.data().size(); ++i) v.data()(i) = dist(rng);
  if (homogeneous)
    for (std::size_t f = 0; f < disc.mesh().n_faces(); ++f)
      if (disc.mesh().face(f).boundary) v.face(f).setZero();
  return v;
}

ExactnessErrors polynomial_exactness(const Discretization& disc, std::size_t n_cells, std::uint64_t seed) {
  const int k = disc.degree();
  const Mesh& mesh = disc.mesh();
  std::vector<std::size_t> ids(mesh.n_cells());
  std::iota(ids.begin(), ids.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(ids.begin(), ids.end(), rng);
  ids.resize(std::min(n_cells, ids.size()));

  ExactnessErrors out;
  for (std::size_t c : ids) {
    const RandomPolynomial q(k + 1, rng());
    const RandomPolynomial v(k + 3, rng());
    const CellContext& ctx = disc.context(c);
    const LocalOperators& ops = disc.ops(c);
    const auto dc = static_cast<Eigen::Index>(ctx.cell_dofs());
    const auto df = static_cast<Eigen::Index>(ctx.face_dofs());

    auto local_interpolant = [&](const ScalarFunction& fn) {
      Eigen::VectorXd local(static_cast<Eigen::Index>(ctx.n_local()));
      local.head(dc) = project_cell(ctx.cell_basis(), fn, ctx.cell_dofs());
      for (std::size_t j = 0; j < ctx.n_faces(); ++j) local.segment(ctx.face_offset(j), df) = project_face(ctx.face_basis(j), fn);
      return local;
    };

    const Tabulation& t = ctx.cell_basis().table();
    const auto& pts = ctx.cell_basis().rule().points;

    const Eigen::VectorXd iq = local_interpolant(q);
    const Eigen::VectorXd rq = t.values * (ops.reconstruction * iq);
    for (std::size_t i = 0; i < pts.size(); ++i)
      out.reconstruction = std::max(out.reconstruction, std::abs(rq(static_cast<Eigen::Index>(i)) - q(pts[i])));
    for (const auto& s : ops.face_residuals) out.stabilization = std::max(out.stabilization, (s * iq).cwiseAbs().maxCoeff());

    const Eigen::VectorXd iv = local_interpolant(v);
    const Eigen::VectorXd g = ops.gradient * iv;
    const Eigen::VectorXd px = project_cell(ctx.cell_basis(), [&](const Point& p) { return v.gradient(p).x(); }, ctx.cell_dofs());
    const Eigen::VectorXd py = project_cell(ctx.cell_basis(), [&](const Point& p) { return v.gradient(p).y(); }, ctx.cell_dofs());
    const Eigen::MatrixXd phi = t.values.leftCols(dc);
    out.gradient = std::max({out.gradient, (phi * (g.head(dc) - px)).cwiseAbs().maxCoeff(),
                             (phi * (g.tail(dc) - py)).cwiseAbs().maxCoeff()});
  }
  return out;
}

double poisson_exactness_error(const Discretization& disc) {
  const ManufacturedProblem mp = manufactured_problem(ProblemKind::Poisson, disc.degree());
  const HybridVector exact = interpolate(disc, mp.solution.u);
  const HybridVector uh = solve_linear_problem(disc, mp.linear_data(), &exact);
  return (uh.data() - exact.data()).cwiseAbs().maxCoeff();
}

QuasilinearProblemData gateaux_problem() {
  QuasilinearProblemData p;
  p.a = [](const Point& x, double t) { return 1.5 + 0.5 * std::sin(t + x.x()); };
  p.a_u = [](const Point& x, double t) { return 0.5 * std::cos(t + x.x()); };
  p.f = [](const Point&) { return 1.; };
  p.alpha = 1.;
  p.upper = 2.;
  return p;
}

std::vector<GateauxSample> gateaux_samples(const Discretization& disc, const QuasilinearProblemData& problem,
                                           int n_triples, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<GateauxSample> out;
  for (int i = 0; i < n_triples; ++i) {
    const HybridVector w = random_hybrid_vector(disc, rng());
    // A long direction keeps the O(eps^2) term well above rounding at eps = 1e-5.
    HybridVector psi = random_hybrid_vector(disc, rng());
    psi.data() *= 10.;
    const HybridVector v = random_hybrid_vector(disc, rng());
    const FaceWeights weights = iterate_face_weights(disc, problem, w);
    auto functional = [&](double eps) {
      HybridVector z = w;
      z.data() += eps * psi.data();
      return nonlinear_form(disc, problem, weights, z, z, v);
    };
    GateauxSample s;
    s.derivative = linearized_form(disc, problem, weights, w, psi, v);
    const double scale = std::max(std::abs(s.derivative), 1e-12);
    auto error = [&](double eps) { return std::abs((functional(eps) - functional(-eps)) / (2 * eps) - s.derivative) / scale; };
    s.error_coarse = error(1e-4);
    s.error_fine = error(1e-5);
    out.push_back(s);
  }
  return out;
}

bool gateaux_second_order(const GateauxSample& s) {
  // Dividing eps by 10 must divide a second-order error by about 100. The loose bound on the
  // coarse error rejects a wrong derivative, whose relative error stays O(1) for every eps.
  return s.error_coarse <= 1e-3 && s.error_fine * 25. <= s.error_coarse;
}

double condensation_gap(const Discretization& disc) {
  const ManufacturedProblem mp = manufactured_problem(ProblemKind::Nonselfadjoint, disc.degree());
  const auto locals = assemble_local_systems(disc, mp.linear_data());
  const HybridVector condensed = solve_linear(disc, assemble_and_condense(disc, locals));
  const HybridVector full = solve_uncondensed(disc, locals);
  return (condensed.data() - full.data()).norm() / full.data().norm();
}

ApproximationErrors approximation_errors(const Discretization& disc, const ManufacturedSolution& v) {
  const HybridVector iv = interpolate(disc, v.u);
  ApproximationErrors e;
  e.h = disc.mesh().max_diameter();
  for (std::size_t c = 0; c < disc.mesh().n_cells(); ++c) {
    const CellContext& ctx = disc.context(c);
    const LocalOperators& ops = disc.ops(c);
    const auto dc = static_cast<Eigen::Index>(ctx.cell_dofs());
    const Tabulation& t = ctx.cell_basis().table();
    const auto& pts = ctx.cell_basis().rule().points;
    const Eigen::VectorXd local = iv.restrict_to(ctx.cell(), c);
    const Eigen::VectorXd r = t.values * (ops.reconstruction * local);
    const Eigen::VectorXd g = ops.gradient * local;
    const Eigen::VectorXd gx = t.values.leftCols(dc) * g.head(dc);
    const Eigen::VectorXd gy = t.values.leftCols(dc) * g.tail(dc);
    const Eigen::VectorXd p = t.values.leftCols(dc) * iv.cell(c);
    for (Eigen::Index q = 0; q < t.weights.size(); ++q) {
      const Point& x = pts[static_cast<std::size_t>(q)];
      const double u = v.u(x);
      e.reconstruction += t.weights(q) * std::pow(u - r(q), 2);
      e.gradient += t.weights(q) * (v.grad(x) - Point(gx(q), gy(q))).squaredNorm();
      e.projection += t.weights(q) * std::pow(u - p(q), 2);
    }
  }
  e.reconstruction = std::sqrt(e.reconstruction);
  e.gradient = std::sqrt(e.gradient);
  e.projection = std::sqrt(e.projection);
  return e;
}

double fitted_slope(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2) throw Error(ErrorKind::InvalidArgument, "slope fit needs at least two points");
  const auto n = static_cast<double>(h.size());
  double sx = 0., sy = 0., sxx = 0., sxy = 0.;
  for (std::size_t i = 0; i < h.size(); ++i) {
    const double x = std::log(h[i]), y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

//------------------------------------------------------------------------------
// Property suite
//------------------------------------------------------------------------------

std::vector<CheckResult> run_property_checks(std::uint64_t seed, const CheckCallback& callback) {
  Reporter r{callback, {}};
  std::mt19937_64 rng(seed);

  for (MeshFamily fam : all_families) {
    const std::string name(family_name(fam));
    r.run("mesh invariants (" + name + ", levels 0..2)", [&](std::string& detail) {
      double prev = 0.;
      for (int level = 0; level <= 2; ++level) {
        const Mesh mesh = generate_mesh(fam, level);
        const std::string v = mesh_violation(mesh);
        if (!v.empty()) {
          detail = "level " + std::to_string(level) + ": " + v;
          return false;
        }
        if (level > 0) {
          const double ratio = mesh.max_diameter() / prev;
          if (ratio < 0.4 || ratio > 0.6) {
            detail = "h ratio " + fmt(ratio) + " at level " + std::to_string(level);
            return false;
          }
        }
        prev = mesh.max_diameter();
      }
      return true;
    });
  }

  for (MeshFamily fam : all_families) {
    const Mesh mesh = generate_mesh(fam, 1);
    for (int k = 0; k <= 2; ++k) {
      const Discretization disc(mesh, k);
      const std::string tag = " (" + std::string(family_name(fam)) + ", k=" + std::to_string(k) + ")";
      r.run("polynomial exactness" + tag, [&](std::string& detail) {
        const ExactnessErrors e = polynomial_exactness(disc, 20, rng());
        detail = "R " + fmt(e.reconstruction) + ", S " + fmt(e.stabilization) + ", G " + fmt(e.gradient);
        return e.reconstruction <= 1e-10 && e.stabilization <= 1e-10 && e.gradient <= 1e-10;
      });
      r.run("poisson exactness" + tag, [&](std::string& detail) {
        const double e = poisson_exactness_error(disc);
        detail = "max |u_h - I_h u| = " + fmt(e);
        return e <= 1e-9;
      });
      r.run("stabilization positive semidefinite" + tag, [&](std::string& detail) {
        double worst = 0.;
        for (std::size_t c = 0; c < mesh.n_cells(); ++c) {
          const Eigen::MatrixXd s = disc.ops(c).stabilization(std::vector<double>(mesh.cell(c).faces.size(), 1.));
          const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
          worst = std::min(worst, es.eigenvalues().minCoeff() / std::max(s.norm(), 1e-300));
        }
        detail = "min relative eigenvalue " + fmt(worst);
        return worst >= -1e-10;
      });
      r.run("gateaux derivative" + tag, [&](std::string& detail) {
        const auto samples = gateaux_samples(disc, gateaux_problem(), 5, rng());
        double worst = 0.;
        bool ok = true;
        for (const auto& s : samples) {
          ok = ok && gateaux_second_order(s);
          worst = std::max(worst, s.error_coarse);
        }
        detail = "worst error at eps=1e-4: " + fmt(worst);
        return ok;
      });
      if (k <= 1) {
        r.run("condensation equivalence" + tag, [&](std::string& detail) {
          const double gap = condensation_gap(disc);
          detail = "relative gap " + fmt(gap);
          return gap <= 1e-9;
        });
      }
    }
  }

  r.run("norm equivalence (cartesian level 2)", [&](std::string& detail) {
    const Mesh mesh = generate_mesh(MeshFamily::Cartesian, 2);
    double lo = 1e300, hi = 0.;
    for (int k = 0; k <= 2; ++k) {
      const Discretization disc(mesh, k);
      for (int i = 0; i < 50; ++i) {
        const DiscreteNorms n = norms(disc, random_hybrid_vector(disc, rng()), [](const Point&) { return 1.; });
        lo = std::min(lo, n.energy / n.h1);
        hi = std::max(hi, n.energy / n.h1);
      }
    }
    detail = "ratio range [" + fmt(lo) + ", " + fmt(hi) + "]";
    return lo >= 0.25 && hi <= 4.;
  });

  r.run("linear coefficient reduction", [&](std::string& detail) {
    const Mesh mesh = generate_mesh(MeshFamily::Hexagonal, 1);
    double worst = 0.;
    for (int k = 0; k <= 2; ++k) {
      const Discretization disc(mesh, k);
      QuasilinearProblemData q;
      q.a = [](const Point& x, double) { return 1. + x.x() * x.y(); };
      q.a_u = [](const Point&, double) { return 0.; };
      q.f = [](const Point& x) { return std::exp(x.x() - x.y()); };
      q.alpha = 1.;
      q.upper = 2.;
      const QuasilinearSolution sol = fixed_point_solve(disc, q);
      LinearProblemData l;
      l.a = [](const Point& x) { return 1. + x.x() * x.y(); };
      l.p = q.f;
      const HybridVector lin = solve_linear_problem(disc, l);
      worst = std::max(worst, (sol.u.data() - lin.data()).norm() / lin.data().norm());
    }
    detail = "relative difference " + fmt(worst);
    return worst <= 1e-10;
  });

  r.run("weight policy sensitivity (cartesian, levels 1..3)", [&](std::string& detail) {
    bool ok = true;
    for (int k = 0; k <= 2; ++k) {
      StudyConfig cfg;
      cfg.family = MeshFamily::Cartesian;
      cfg.degrees = {k};
      cfg.level_min = 1;
      cfg.level_max = 3;
      cfg.weights = WeightPolicy::UpperBound;
      const RateTable t = run_study(cfg);
      const double rate = t.rows.back().rate.value_or(0.);
      detail += (k ? ", " : "") + std::string("k=") + std::to_string(k) + " rate " + fmt(rate);
      ok = ok && std::abs(rate - (k + 1)) <= 0.25 && t.rows.back().converged;
    }
    return ok;
  });

  return r.results;
}

//------------------------------------------------------------------------------
// Acceptance
//------------------------------------------------------------------------------

std::vector<CheckResult> run_acceptance(std::uint64_t seed, const CheckCallback& callback) {
  Reporter r{callback, {}};
  std::mt19937_64 rng(seed);

  // Quasilinear studies on levels 0..4, shared by criteria 1-3.
  struct Study {
    MeshFamily family;
    int k;
    RateTable table;
    std::string error;
  };
  std::vector<Study> studies;
  for (MeshFamily fam : all_families) {
    for (int k = 0; k <= 2; ++k) {
      StudyConfig cfg;
      cfg.problem = ProblemKind::Quasilinear;
      cfg.family = fam;
      cfg.degrees = {k};
      cfg.level_min = 0;
      cfg.level_max = 4;
      Study s{fam, k, {}, {}};
      try {
        s.table = run_study(cfg);
      } catch (const std::exception& e) {
        s.error = e.what();
      }
      studies.push_back(std::move(s));
    }
  }

  auto rate_criterion = [&](const std::string& name, std::initializer_list<MeshFamily> fams, double tol) {
    r.run(name, [&](std::string& detail) {
      bool ok = true;
      for (const Study& s : studies) {
        if (std::find(fams.begin(), fams.end(), s.family) == fams.end()) continue;
        std::string label = std::string(family_name(s.family)) + " k=" + std::to_string(s.k);
        if (!s.error.empty()) {
          detail += label + " error: " + s.error + "; ";
          ok = false;
          continue;
        }
        const RateRow& last = s.table.rows.back();
        const double rate = last.rate.value_or(std::nan(""));
        const bool pass = std::abs(rate - (s.k + 1)) <= tol && last.converged;
        ok = ok && pass;
        detail += label + " rate " + fmt(rate) + (pass ? "" : " FAIL") + "; ";
      }
      return ok;
    });
  };

  rate_criterion("1 quasilinear rates, triangular and cartesian (+-0.25)", {MeshFamily::Triangular, MeshFamily::Cartesian}, 0.25);
  rate_criterion("2 quasilinear rates, kershaw and hexagonal (+-0.35)", {MeshFamily::Kershaw, MeshFamily::Hexagonal}, 0.35);

  r.run("3 iteration count <= 6 and decreasing increments", [&](std::string& detail) {
    bool ok = true;
    int worst = 0;
    for (const Study& s : studies) {
      if (!s.error.empty()) {
        detail += std::string(family_name(s.family)) + " error; ";
        ok = false;
        continue;
      }
      for (const RateRow& row : s.table.rows) {
        if (row.level > 3) continue;
        worst = std::max(worst, row.iterations);
        if (!row.converged || row.iterations > 6 || !strictly_decreasing(row.increments)) {
          ok = false;
          detail += row.family + " k=" + std::to_string(row.k) + " level " + std::to_string(row.level) + " FAIL; ";
        }
      }
    }
    detail += "max iterations " + std::to_string(worst);
    return ok;
  });

  r.run("4 nonselfadjoint rates, cartesian (+-0.25)", [&](std::string& detail) {
    bool ok = true;
    for (int k = 0; k <= 2; ++k) {
      StudyConfig cfg;
      cfg.problem = ProblemKind::Nonselfadjoint;
      cfg.family = MeshFamily::Cartesian;
      cfg.degrees = {k};
      cfg.level_min = 1;
      cfg.level_max = 4;
      const RateTable t = run_study(cfg);
      const double rate = t.rows.back().rate.value_or(std::nan(""));
      const bool pass = std::abs(rate - (k + 1)) <= 0.25;
      ok = ok && pass;
      detail += "k=" + std::to_string(k) + " rate " + fmt(rate) + (pass ? "" : " FAIL") + "; ";
    }
    return ok;
  });

  r.run("5 polynomial exactness", [&](std::string& detail) {
    ExactnessErrors worst;
    double poisson = 0.;
    for (MeshFamily fam : all_families) {
      const Mesh fine = generate_mesh(fam, 2);
      const Mesh coarse = generate_mesh(fam, 1);
      for (int k = 0; k <= 2; ++k) {
        const ExactnessErrors e = polynomial_exactness(Discretization(fine, k), 20, rng());
        worst.reconstruction = std::max(worst.reconstruction, e.reconstruction);
        worst.stabilization = std::max(worst.stabilization, e.stabilization);
        worst.gradient = std::max(worst.gradient, e.gradient);
        poisson = std::max(poisson, poisson_exactness_error(Discretization(coarse, k)));
      }
    }
    detail = "R " + fmt(worst.reconstruction) + ", S " + fmt(worst.stabilization) + ", G " + fmt(worst.gradient) +
             ", poisson " + fmt(poisson);
    return worst.reconstruction <= 1e-10 && worst.stabilization <= 1e-10 && worst.gradient <= 1e-10 && poisson <= 1e-9;
  });

  r.run("6 linearization finite differences", [&](std::string& detail) {
    bool ok = true;
    double worst = 0.;
    int count = 0;
    for (MeshFamily fam : all_families) {
      const Mesh mesh = generate_mesh(fam, 1);
      for (int k = 0; k <= 2; ++k) {
        for (const auto& s : gateaux_samples(Discretization(mesh, k), gateaux_problem(), 20, rng())) {
          ok = ok && gateaux_second_order(s);
          worst = std::max(worst, s.error_coarse);
          ++count;
        }
      }
    }
    detail = std::to_string(count) + " triples, worst relative error at eps=1e-4: " + fmt(worst);
    return ok;
  });

  r.run("7 condensation equivalence", [&](std::string& detail) {
    double worst = 0.;
    for (MeshFamily fam : all_families) {
      const Mesh mesh = generate_mesh(fam, 1);
      for (int k = 0; k <= 1; ++k) worst = std::max(worst, condensation_gap(Discretization(mesh, k)));
    }
    detail = "worst relative gap " + fmt(worst);
    return worst <= 1e-9;
  });

  r.run("8 approximation orders (reconstruction s+1, projection s+1, gradient s; s = k)", [&](std::string& detail) {
    bool ok = true;
    const ManufacturedSolution v = manufactured_solution("sine");
    for (int k = 0; k <= 2; ++k) {
      std::vector<double> h, er, eg, ep;
      for (int level = 1; level <= 4; ++level) {
        const Mesh mesh = generate_mesh(MeshFamily::Cartesian, level);
        const ApproximationErrors e = approximation_errors(Discretization(mesh, k), v);
        h.push_back(e.h);
        er.push_back(e.reconstruction);
        eg.push_back(e.gradient);
        ep.push_back(e.projection);
      }
      const double sr = fitted_slope(h, er), sg = fitted_slope(h, eg), sp = fitted_slope(h, ep);
      const bool pass = std::abs(sr - (k + 1)) <= 0.25 && std::abs(sp - (k + 1)) <= 0.25 && std::abs(sg - k) <= 0.25;
      ok = ok && pass;
      detail += "k=" + std::to_string(k) + ": R " + fmt(sr) + ", pi " + fmt(sp) + ", G " + fmt(sg) + (pass ? "" : " FAIL") + "; ";
    }
    return ok;
  });

  return r.results;
}

}  // namespace hho
