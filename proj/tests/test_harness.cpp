#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <hho/error.hpp>
#include <hho/study.hpp>

using hho::MeshFamily;
using hho::Point;
using hho::ProblemKind;

namespace {

const Point samples[] = {{0.5, 0.5}, {0.1, 0.9}, {0.33, 0.21}, {0.77, 0.64}, {0.02, 0.5}};

// -div(F) by central differences of the flux F.
double minus_divergence(const std::function<Point(const Point&)>& flux, const Point& x) {
  const double h = 1e-5;
  const double dx = (flux(x + Point(h, 0)).x() - flux(x - Point(h, 0)).x()) / (2 * h);
  const double dy = (flux(x + Point(0, h)).y() - flux(x - Point(0, h)).y()) / (2 * h);
  return -(dx + dy);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

hho::RateRow row(const char* family, int k, int level, double h, double error) {
  hho::RateRow r;
  r.family = family;
  r.k = k;
  r.level = level;
  r.h = h;
  r.error = error;
  return r;
}

}  // namespace

TEST_CASE("quasilinear load at the centre") {
  const hho::QuasilinearProblemData pb = hho::manufactured_problem(ProblemKind::Quasilinear, 0).quasilinear_data();
  CHECK(pb.f(Point(0.5, 0.5)) == doctest::Approx(17. / 16.).epsilon(1e-15));
  CHECK(pb.alpha == 0.5);
  CHECK(pb.upper == 1.5);
}

TEST_CASE("manufactured right-hand sides match finite differences of the flux") {
  const hho::ManufacturedProblem q = hho::manufactured_problem(ProblemKind::Quasilinear, 1);
  const hho::QuasilinearProblemData qd = q.quasilinear_data();
  for (const Point& x : samples) {
    const auto flux = [&](const Point& p) { return Point(q.quasi.a(p, q.solution.u(p)) * q.solution.grad(p)); };
    CHECK(qd.f(x) == doctest::Approx(minus_divergence(flux, x)).epsilon(1e-7));
  }

  for (ProblemKind kind : {ProblemKind::Nonselfadjoint, ProblemKind::Poisson}) {
    for (int k = 0; k <= 3; ++k) {
      const hho::ManufacturedProblem mp = hho::manufactured_problem(kind, k);
      const hho::LinearProblemData d = mp.linear_data();
      for (const Point& x : samples) {
        const auto flux = [&](const Point& p) { return Point(mp.linear.a(p) * mp.solution.grad(p)); };
        double expected = minus_divergence(flux, x);
        if (d.b) expected += d.b(x).dot(mp.solution.grad(x));
        if (d.a0) expected += d.a0(x) * mp.solution.u(x);
        CHECK(d.p(x) == doctest::Approx(expected).epsilon(1e-7));
      }
    }
  }

  // x-dependent quasilinear coefficient exercises grad_x.
  hho::QuasilinearCoefficients c;
  c.a = [](const Point& p, double t) { return 2. + std::sin(p.x() * p.y()) + t * t; };
  c.a_u = [](const Point&, double t) { return 2. * t; };
  c.grad_x = [](const Point& p, double) -> Point { return Point(p.y(), p.x()) * std::cos(p.x() * p.y()); };
  const hho::ManufacturedSolution s = hho::manufactured_solution("sine");
  const hho::ScalarFunction f = hho::manufactured_rhs(s, c);
  for (const Point& x : samples) {
    const auto flux = [&](const Point& p) { return Point(c.a(p, s.u(p)) * s.grad(p)); };
    CHECK(f(x) == doctest::Approx(minus_divergence(flux, x)).epsilon(1e-7));
  }
}

TEST_CASE("manufactured solutions: gradients and laplacians") {
  for (const char* name : {"bubble", "sine", "poly0", "poly1", "poly4", "poly8"}) {
    CAPTURE(name);
    const hho::ManufacturedSolution s = hho::manufactured_solution(name);
    for (const Point& x : samples) {
      const double h = 1e-5;
      const Point g((s.u(x + Point(h, 0)) - s.u(x - Point(h, 0))) / (2 * h), (s.u(x + Point(0, h)) - s.u(x - Point(0, h))) / (2 * h));
      const double scale = 1. + s.grad(x).norm();
      CHECK((g - s.grad(x)).norm() < 1e-7 * scale);
      const auto flux = [&](const Point& p) { return s.grad(p); };
      CHECK(-minus_divergence(flux, x) == doctest::Approx(s.laplacian(x)).epsilon(1e-7).scale(1.));
    }
  }
}

TEST_CASE("trivial data reduces the right-hand sides") {
  const hho::ManufacturedSolution zero = hho::manufactured_solution("zero");
  hho::QuasilinearCoefficients c;
  c.a = [](const Point&, double t) { return 1. + t; };
  c.a_u = [](const Point&, double) { return 1.; };
  const hho::LinearCoefficients lc{[](const Point&) { return 3.; }, [](const Point&) { return Point(0., 0.); },
                                   [](const Point&) { return Point(1., 2.); }, [](const Point&) { return 4.; }};
  for (const Point& x : samples) {
    CHECK(hho::manufactured_rhs(zero, c)(x) == 0.);
    CHECK(hho::manufactured_rhs(zero, lc)(x) == 0.);
  }
  // a = 1 gives -Lap u
  hho::QuasilinearCoefficients one;
  one.a = [](const Point&, double) { return 1.; };
  one.a_u = [](const Point&, double) { return 0.; };
  const hho::ManufacturedSolution s = hho::manufactured_solution("sine");
  for (const Point& x : samples) CHECK(hho::manufactured_rhs(s, one)(x) == doctest::Approx(-s.laplacian(x)));
}

TEST_CASE("registry lookups") {
  CHECK_THROWS_AS(hho::manufactured_solution("cosine"), hho::Error);
  CHECK_THROWS_AS(hho::manufactured_solution("poly9"), hho::Error);
  CHECK_THROWS_AS(hho::manufactured_solution("poly"), hho::Error);
  CHECK_THROWS_AS(hho::manufactured_solution("poly2x"), hho::Error);
  CHECK_THROWS_AS(hho::parse_problem("stokes"), hho::Error);
  for (ProblemKind k : {ProblemKind::Poisson, ProblemKind::Nonselfadjoint, ProblemKind::Quasilinear})
    CHECK(hho::parse_problem(hho::problem_name(k)) == k);
  CHECK(hho::manufactured_problem(ProblemKind::Poisson, 2).lift_boundary);
  CHECK_FALSE(hho::manufactured_problem(ProblemKind::Nonselfadjoint, 2).lift_boundary);
  CHECK_THROWS_AS(hho::manufactured_problem(ProblemKind::Poisson, 8), hho::Error);
  hho::QuasilinearCoefficients missing;
  CHECK_THROWS_AS(hho::manufactured_rhs(hho::manufactured_solution("sine"), missing), hho::Error);
}

TEST_CASE("csv output") {
  hho::RateTable t;
  CHECK(hho::format_csv(t) == "family,k,level,h,ndof,error,rate\n");

  t.rows.push_back(row("cartesian", 1, 0, 0.25, 0.5));
  t.rows[0].ndof = 48;
  hho::compute_rates(t);
  CHECK(hho::format_csv(t) == "family,k,level,h,ndof,error,rate\ncartesian,1,0,0.25,48,0.5,\n");

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.1, 1.);
  hho::RateTable big;
  for (int level = 0; level < 6; ++level) big.rows.push_back(row("kershaw", 2, level, u(rng) / (1 << level), u(rng) * 1e-3 / (1 << (3 * level))));
  hho::compute_rates(big);
  const std::string text = hho::format_csv(big);
  const hho::RateTable back = hho::parse_csv(text);
  REQUIRE(back.rows.size() == big.rows.size());
  for (std::size_t i = 0; i < big.rows.size(); ++i) {
    CHECK(back.rows[i].h == big.rows[i].h);
    CHECK(back.rows[i].error == big.rows[i].error);
    REQUIRE(back.rows[i].rate.has_value() == big.rows[i].rate.has_value());
    if (big.rows[i].rate) CHECK(std::abs(*back.rows[i].rate - *big.rows[i].rate) < 1e-12);
  }
  CHECK(hho::format_csv(back) == text);
  CHECK(hho::parse_csv("family,k,level,h,ndof,error,rate\r\n").rows.empty());

  CHECK_THROWS_AS(hho::parse_csv(""), hho::Error);
  CHECK_THROWS_AS(hho::parse_csv("family,k\n"), hho::Error);
  CHECK_THROWS_AS(hho::parse_csv("family,k,level,h,ndof,error,rate\nx,1,2,3\n"), hho::Error);
  CHECK_THROWS_AS(hho::parse_csv("family,k,level,h,ndof,error,rate\nx,1,2,0.5,4,abc,\n"), hho::Error);
}

TEST_CASE("shortest round-trip number formatting") {
  CHECK(hho::format_double(0.1) == "0.1");
  CHECK(hho::format_double(2.) == "2");
  CHECK(hho::format_double(1e-20) == "1e-20");
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(-20., 20.);
  for (int i = 0; i < 1000; ++i) {
    const double x = std::pow(10., u(rng));
    CHECK(std::stod(hho::format_double(x)) == x);
  }
}

TEST_CASE("rates on a synthetic table") {
  hho::RateTable t;
  for (int level = 0; level < 4; ++level) t.rows.push_back(row("triangular", 0, level, std::pow(0.5, level), 3. * std::pow(0.5, 2 * level)));
  for (int level = 1; level < 3; ++level) t.rows.push_back(row("triangular", 1, level, std::pow(0.5, level), std::pow(0.5, 3 * level)));
  t.rows.push_back(row("triangular", 1, 4, 1. / 16, 1e-6));  // level gap
  t.rows.push_back(row("triangular", 1, 5, 1. / 32, 0.));    // log of zero
  hho::compute_rates(t);
  CHECK_FALSE(t.rows[0].rate.has_value());
  for (int i = 1; i < 4; ++i) CHECK(*t.rows[static_cast<std::size_t>(i)].rate == doctest::Approx(2.).epsilon(1e-14));
  CHECK_FALSE(t.rows[4].rate.has_value());
  CHECK(*t.rows[5].rate == doctest::Approx(3.).epsilon(1e-14));
  CHECK_FALSE(t.rows[6].rate.has_value());
  CHECK_FALSE(t.rows[7].rate.has_value());
}

TEST_CASE("plot data blocks") {
  hho::RateTable t;
  t.rows.push_back(row("cartesian", 0, 0, 0.1, 0.01));
  t.rows.push_back(row("cartesian", 0, 1, 0.01, 0.001));
  t.rows.push_back(row("cartesian", 1, 0, 1., 1e-3));
  CHECK(hho::format_plotdata(t) ==
        "# family=cartesian k=0\nlog10_h log10_error\n-1 -2\n-2 -3\n"
        "\n\n# family=cartesian k=1\nlog10_h log10_error\n0 -3\n");
  CHECK(hho::format_plotdata(hho::RateTable{}).empty());
}

TEST_CASE("study configuration validation") {
  hho::StudyConfig c;
  CHECK_NOTHROW(c.validate());
  c.degrees = {};
  CHECK_THROWS_AS(c.validate(), hho::Error);
  c.degrees = {4};
  CHECK_THROWS_AS(c.validate(), hho::Error);
  c = {};
  c.level_min = 3;
  c.level_max = 1;
  CHECK_THROWS_AS(c.validate(), hho::Error);
  c = {};
  c.level_min = -1;
  CHECK_THROWS_AS(c.validate(), hho::Error);
  c = {};
  c.tol = 0.;
  CHECK_THROWS_AS(c.validate(), hho::Error);
  c = {};
  c.max_iter = 0;
  CHECK_THROWS_AS(c.validate(), hho::Error);
  c = {};
  c.mesh_path = "whatever.mesh";
  c.level_min = 3;
  c.level_max = 1;
  CHECK_NOTHROW(c.validate());
}

TEST_CASE("rows report the condensed size and the relative error") {
  hho::StudyConfig c;
  c.problem = ProblemKind::Nonselfadjoint;
  for (MeshFamily fam : {MeshFamily::Triangular, MeshFamily::Hexagonal}) {
    const hho::Mesh m = hho::generate_mesh(fam, 1);
    for (int k = 0; k <= 2; ++k) {
      const hho::RateRow r = hho::solve_row(c, m, k, 1, "x");
      CHECK(r.ndof == static_cast<std::size_t>(k + 1) * m.n_interior_faces());
      CHECK(r.h == m.max_diameter());
      CHECK(r.error > 0.);
      CHECK(r.error < 1.);
      CHECK(r.family == "x");
    }
  }
}

TEST_CASE("quasilinear studies on triangles") {
  for (int k : {0, 2}) {
    hho::StudyConfig c;
    c.problem = ProblemKind::Quasilinear;
    c.family = MeshFamily::Triangular;
    c.degrees = {k};
    c.level_min = 1;
    c.level_max = 3;
    const hho::RateTable t = hho::run_study(c);
    REQUIRE(t.rows.size() == 3);
    for (const auto& r : t.rows) {
      CHECK(r.converged);
      CHECK(r.family == "triangular");
      CHECK(r.iterations >= 2);
      CHECK(r.increments.size() == static_cast<std::size_t>(r.iterations));
    }
    CHECK_FALSE(t.rows[0].rate.has_value());
    CAPTURE(k);
    CHECK(*t.rows[2].rate == doctest::Approx(k + 1).epsilon(0.25 / (k + 1)));
    CHECK(hho::format_csv(hho::run_study(c)) == hho::format_csv(t));
  }
}

TEST_CASE("poisson probe is solved to rounding") {
  hho::StudyConfig c;
  c.problem = ProblemKind::Poisson;
  c.degrees = {0, 1, 2, 3};
  c.level_min = 0;
  c.level_max = 2;
  for (MeshFamily fam : {MeshFamily::Cartesian, MeshFamily::Kershaw}) {
    c.family = fam;
    for (const auto& r : hho::run_study(c).rows) CHECK(r.error <= 1e-9);
  }
}

TEST_CASE("studies on a mesh file") {
  const std::string path = "test_harness_mesh.txt";
  hho::write_mesh(hho::generate_mesh(MeshFamily::Hexagonal, 1), path);
  hho::StudyConfig c;
  c.problem = ProblemKind::Nonselfadjoint;
  c.mesh_path = path;
  c.degrees = {0, 1};
  const hho::RateTable t = hho::run_study(c);
  REQUIRE(t.rows.size() == 2);
  for (const auto& r : t.rows) {
    CHECK(r.family == "file");
    CHECK(r.level == 0);
    CHECK_FALSE(r.rate.has_value());
  }

  // A crescent is not star-shaped with respect to its centroid.
  std::vector<Point> v;
  for (int i = 0; i <= 16; ++i) v.emplace_back(0.5 + 0.5 * std::cos(3.14159265358979 * i / 16), 0.5 * std::sin(3.14159265358979 * i / 16));
  for (int i = 15; i >= 1; --i) v.emplace_back(0.5 + 0.45 * std::cos(3.14159265358979 * i / 16), 0.45 * std::sin(3.14159265358979 * i / 16));
  std::vector<std::size_t> poly(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) poly[i] = i;
  hho::write_mesh(hho::Mesh::from_polygons(v, {poly}), path);
  try {
    hho::run_study(c);
    FAIL("expected an error");
  } catch (const hho::Error& e) {
    CHECK(e.kind() == hho::ErrorKind::Mesh);
    CHECK(std::string(e.what()).rfind("family file, k = 0, level 0: ", 0) == 0);
  }
  std::remove(path.c_str());

  c.mesh_path = "does_not_exist.mesh";
  try {
    hho::run_study(c);
    FAIL("expected an error");
  } catch (const hho::Error& e) {
    CHECK(e.kind() == hho::ErrorKind::Io);
  }
}

TEST_CASE("output files") {
  hho::RateTable t;
  t.rows.push_back(row("hexagonal", 0, 2, 0.1, 0.2));
  hho::write_csv(t, "test_harness_out.csv");
  hho::write_plotdata(t, "test_harness_out.dat");
  CHECK(slurp("test_harness_out.csv") == hho::format_csv(t));
  CHECK(slurp("test_harness_out.dat") == hho::format_plotdata(t));
  std::remove("test_harness_out.csv");
  std::remove("test_harness_out.dat");
  CHECK_THROWS_AS(hho::write_csv(t, "no_such_dir/out.csv"), hho::Error);
}
