#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <fstream>
#include <numbers>

#include <hho/error.hpp>
#include <hho/mesh.hpp>
#include <hho/quadrature.hpp>

#include "oracles.hpp"

using hho::MeshFamily;
using hho::Point;

namespace {

const MeshFamily families[] = {MeshFamily::Triangular, MeshFamily::Cartesian, MeshFamily::Kershaw, MeshFamily::Hexagonal};

std::size_t local_index(const hho::Cell& cell, std::size_t face) {
  return static_cast<std::size_t>(std::find(cell.faces.begin(), cell.faces.end(), face) - cell.faces.begin());
}

const char* unit_square_file =
    "# one cell\n"
    "4 4 1\n"
    "0 0\n1 0\n1 1\n0 1\n"
    "0 1 1\n1 2 1\n2 3 1\n3 0 1\n"
    "4 0 1 2 3\n";

}  // namespace

TEST_CASE("cartesian level 0 is a 4x4 grid") {
  const hho::Mesh m = hho::generate_mesh(MeshFamily::Cartesian, 0);
  CHECK(m.n_cells() == 16);
  CHECK(m.n_faces() == 40);
  CHECK(m.n_boundary_faces() == 16);
  for (const auto& c : m.cells()) CHECK(c.diameter == doctest::Approx(std::sqrt(2.) / 4).epsilon(1e-14));
}

TEST_CASE("triangular level 0 splits each square once") {
  const hho::Mesh m = hho::generate_mesh(MeshFamily::Triangular, 0);
  CHECK(m.n_cells() == 32);
  for (const auto& c : m.cells()) CHECK(c.faces.size() == 3);
}

TEST_CASE("hexagonal interior cells have six faces and the area sums to one") {
  for (int level = 0; level <= 3; ++level) {
    const hho::Mesh m = hho::generate_mesh(MeshFamily::Hexagonal, level);
    double area = 0.;
    std::size_t interior = 0;
    for (std::size_t c = 0; c < m.n_cells(); ++c) {
      area += oracle::shoelace(oracle::cell_polygon(m, c));
      bool touches_boundary = false;
      for (std::size_t f : m.cell(c).faces) touches_boundary = touches_boundary || m.face(f).boundary;
      if (!touches_boundary) {
        ++interior;
        CHECK(m.cell(c).faces.size() == 6);
      } else {
        CHECK(m.cell(c).faces.size() >= 3);
        CHECK(m.cell(c).faces.size() <= 6);
      }
    }
    CHECK(interior > 0);
    CHECK(area == doctest::Approx(1.).epsilon(1e-12));
  }
}

TEST_CASE("generated meshes satisfy the incidence and geometry invariants") {
  for (MeshFamily fam : families) {
    double previous_h = 0.;
    double first_ratio = 0.;
    for (int level = 0; level <= 3; ++level) {
      CAPTURE(hho::family_name(fam));
      CAPTURE(level);
      const hho::Mesh m = hho::generate_mesh(fam, level);

      double area = 0.;
      for (std::size_t c = 0; c < m.n_cells(); ++c) {
        const hho::Cell& cell = m.cell(c);
        area += cell.area;
        CHECK(cell.area == doctest::Approx(oracle::shoelace(oracle::cell_polygon(m, c))).epsilon(1e-13));
        Point closure = Point::Zero();
        for (std::size_t j = 0; j < cell.faces.size(); ++j) {
          const hho::Face& f = m.face(cell.faces[j]);
          CHECK(std::abs(cell.normals[j].norm() - 1.) < 1e-12);
          CHECK(cell.normals[j].dot(f.midpoint - cell.centroid) > 0.);
          CHECK(f.diameter <= cell.diameter + 1e-12);
          closure += f.diameter * cell.normals[j];
          // Global normal is outward for the lower-id cell.
          CHECK((cell.normals[j] - cell.orientations[j] * f.normal).norm() < 1e-14);
          CHECK((cell.orientations[j] == 1) == (f.cells[0] == c));
        }
        CHECK(closure.norm() < 1e-12);
        CHECK(std::is_sorted(cell.faces.begin(), cell.faces.end()));
      }
      CHECK(area == doctest::Approx(1.).epsilon(1e-12));

      for (std::size_t i = 0; i < m.n_faces(); ++i) {
        const hho::Face& f = m.face(i);
        REQUIRE(f.cells.size() == (f.boundary ? 1u : 2u));
        if (!f.boundary) {
          const hho::Cell& a = m.cell(f.cells[0]);
          const hho::Cell& b = m.cell(f.cells[1]);
          CHECK(f.cells[0] < f.cells[1]);
          CHECK((a.normals[local_index(a, i)] + b.normals[local_index(b, i)]).norm() < 1e-12);
        } else {
          const Point& p = f.midpoint;
          const double dist = std::min({p.x(), p.y(), 1. - p.x(), 1. - p.y()});
          CHECK(dist < 1e-12);
        }
      }

      const double ratio = m.max_diameter() / m.min_diameter();
      if (level == 0) first_ratio = ratio;
      CHECK(ratio <= 1.5 * first_ratio);  // quasi-uniform with a level-independent constant
      if (level > 0) {
        const double halving = m.max_diameter() / previous_h;
        CHECK(halving >= 0.4);
        CHECK(halving <= 0.6);
      }
      previous_h = m.max_diameter();
    }
  }
}

TEST_CASE("kershaw cells are distorted but convex") {
  const hho::Mesh m = hho::generate_mesh(MeshFamily::Kershaw, 1);
  double min_angle_cos = 1.;
  for (std::size_t c = 0; c < m.n_cells(); ++c) {
    const auto poly = oracle::cell_polygon(m, c);
    REQUIRE(poly.size() == 4);
    for (std::size_t i = 0; i < 4; ++i) {
      const Point e1 = poly[(i + 1) % 4] - poly[i];
      const Point e2 = poly[(i + 2) % 4] - poly[(i + 1) % 4];
      CHECK(e1.x() * e2.y() - e1.y() * e2.x() > 0.);
      min_angle_cos = std::min(min_angle_cos, std::abs(e1.normalized().dot(e2.normalized())));
    }
  }
  CHECK(min_angle_cos < 0.99);
  const hho::Mesh cart = hho::generate_mesh(MeshFamily::Cartesian, 1);
  CHECK(m.max_diameter() > 1.1 * cart.max_diameter());
}

TEST_CASE("unsupported family and bad level") {
  CHECK_THROWS_AS(hho::generate_mesh("pentagonal", 0), hho::Error);
  CHECK_THROWS_AS(hho::generate_mesh(MeshFamily::Cartesian, -1), hho::Error);
  CHECK_THROWS_AS(hho::parse_family("voronoi"), hho::Error);
}

TEST_CASE("unit square file") {
  const hho::Mesh m = hho::parse_mesh(unit_square_file);
  REQUIRE(m.n_cells() == 1);
  CHECK(m.cell(0).area == doctest::Approx(1.));
  CHECK(m.cell(0).diameter == doctest::Approx(std::sqrt(2.)));
  CHECK(m.n_boundary_faces() == 4);
}

TEST_CASE("write then read reproduces the canonical bytes") {
  for (MeshFamily fam : families) {
    const hho::Mesh m = hho::generate_mesh(fam, 1);
    const std::string text = hho::format_mesh(m);
    const hho::Mesh back = hho::parse_mesh(text);
    CHECK(hho::format_mesh(back) == text);
    REQUIRE(back.n_vertices() == m.n_vertices());
    for (std::size_t i = 0; i < m.n_vertices(); ++i) CHECK(back.vertex(i) == m.vertex(i));
    REQUIRE(back.n_cells() == m.n_cells());
    for (std::size_t c = 0; c < m.n_cells(); ++c) {
      CHECK(back.cell(c).faces == m.cell(c).faces);
      CHECK(back.cell(c).area == m.cell(c).area);
    }
  }
}

TEST_CASE("file round trip through the filesystem") {
  const hho::Mesh m = hho::generate_mesh(MeshFamily::Hexagonal, 0);
  const std::string path = "test_mesh_roundtrip.mesh";
  hho::write_mesh(m, path);
  const hho::Mesh back = hho::read_mesh(path);
  CHECK(hho::format_mesh(back) == hho::format_mesh(m));
  std::remove(path.c_str());
  CHECK_THROWS_AS(hho::read_mesh("no_such_file.mesh"), hho::Error);
}

TEST_CASE("malformed mesh files are rejected") {
  auto message = [](const char* text) {
    try {
      hho::parse_mesh(text);
    } catch (const hho::Error& e) {
      CHECK(e.kind() == hho::ErrorKind::Mesh);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  // Face 0 listed by three cells.
  const char* non_manifold =
      "5 7 3\n"
      "0 0\n1 0\n0 1\n0.5 -1\n1 1\n"
      "0 1 0\n1 2 1\n2 0 1\n0 3 1\n3 1 1\n1 4 1\n4 0 1\n"
      "3 0 1 2\n3 3 4 0\n3 0 5 6\n";
  CHECK(message(non_manifold).find("non-manifold") != std::string::npos);

  const char* dangling = "3 3 1\n0 0\n1 0\n0 1\n0 1 1\n1 7 1\n2 0 1\n3 0 1 2\n";
  CHECK(message(dangling).find("dangling vertex") != std::string::npos);

  const char* counts = "4 4 1\n0 0\n1 0\n1 1\n";
  CHECK(message(counts).find("malformed counts") != std::string::npos);

  const char* clockwise = "4 4 1\n0 0\n1 0\n1 1\n0 1\n0 1 1\n1 2 1\n2 3 1\n3 0 1\n4 3 2 1 0\n";
  CHECK(message(clockwise).find("counterclockwise") != std::string::npos);

  const char* wrong_flag = "4 4 1\n0 0\n1 0\n1 1\n0 1\n0 1 0\n1 2 1\n2 3 1\n3 0 1\n4 0 1 2 3\n";
  CHECK(message(wrong_flag).find("boundary flag") != std::string::npos);

  CHECK(message("").find("malformed counts") != std::string::npos);
  CHECK(message("1 2\n").find("malformed counts") != std::string::npos);
  CHECK(message("3 3 1\n0 0\n1 0\n0 x\n0 1 1\n1 2 1\n2 0 1\n3 0 1 2\n").find("malformed") != std::string::npos);
}

//------------------------------------------------------------------------------
// Quadrature
//------------------------------------------------------------------------------

namespace {

double integrate(const hho::QuadratureRule& r, const std::function<double(const Point&)>& f) {
  double s = 0.;
  for (std::size_t q = 0; q < r.size(); ++q) s += r.weights[q] * f(r.points[q]);
  return s;
}

}  // namespace

TEST_CASE("gauss-legendre nodes on [0,1] are symmetric with weights summing to 1") {
  for (int n = 1; n <= 12; ++n) {
    std::vector<double> x, w;
    hho::gauss_legendre(n, x, w);
    REQUIRE(x.size() == static_cast<std::size_t>(n));
    double sum = 0.;
    for (int i = 0; i < n; ++i) {
      sum += w[i];
      CHECK(w[i] > 0.);
      CHECK(x[i] > 0.);
      CHECK(x[i] < 1.);
      CHECK(x[i] + x[n - 1 - i] == doctest::Approx(1.).epsilon(1e-14));
    }
    CHECK(sum == doctest::Approx(1.).epsilon(1e-14));
    // exact for t^(2n-1)
    double m = 0.;
    for (int i = 0; i < n; ++i) m += w[i] * std::pow(x[i], 2 * n - 1);
    CHECK(m == doctest::Approx(1. / (2 * n)).epsilon(1e-13));
  }
  std::vector<double> x, w;
  CHECK_THROWS_AS(hho::gauss_legendre(0, x, w), hho::Error);
}

TEST_CASE("cell quadrature: closed forms") {
  const hho::Mesh square = hho::parse_mesh(unit_square_file);
  const hho::QuadratureRule r = hho::cell_quadrature(square, 0, 2);
  CHECK(integrate(r, [](const Point& p) { return p.x() * p.x() + p.y() * p.y(); }) == doctest::Approx(2. / 3.).epsilon(1e-14));
  for (double w : r.weights) CHECK(w > 0.);

  // Regular hexagon of unit circumradius centred at the origin.
  std::vector<Point> v;
  for (int i = 0; i < 6; ++i) v.emplace_back(std::cos(i * std::numbers::pi / 3), std::sin(i * std::numbers::pi / 3));
  const hho::Mesh hex = hho::Mesh::from_polygons(v, {{0, 1, 2, 3, 4, 5}});
  const hho::QuadratureRule rh = hho::cell_quadrature(hex, 0, 0);
  CHECK(integrate(rh, [](const Point&) { return 1.; }) == doctest::Approx(1.5 * std::sqrt(3.)).epsilon(1e-14));
}

TEST_CASE("cell quadrature matches barycentric closed forms up to its degree") {
  for (MeshFamily fam : families) {
    const hho::Mesh m = hho::generate_mesh(fam, 1);
    for (std::size_t c = 0; c < m.n_cells(); c += 7) {
      const auto poly = oracle::cell_polygon(m, c);
      for (int deg : {0, 1, 2, 3, 4, 5, 6, 8, 10}) {
        const hho::QuadratureRule r = hho::cell_quadrature(m, c, deg);
        CHECK(r.degree >= deg);
        for (int a = 0; a <= deg; ++a)
          for (int b = 0; a + b <= deg; ++b) {
            const double exact = oracle::polygon_monomial(poly, a, b);
            const double q = integrate(r, [&](const Point& p) { return std::pow(p.x(), a) * std::pow(p.y(), b); });
            CHECK(std::abs(q - exact) <= 1e-12 * std::max(std::abs(exact), m.cell(c).area));
          }
      }
    }
  }
}

TEST_CASE("kershaw quadrilateral: x^3 y^2") {
  const hho::Mesh m = hho::generate_mesh(MeshFamily::Kershaw, 0);
  for (std::size_t c = 0; c < m.n_cells(); ++c) {
    const double exact = oracle::polygon_monomial(oracle::cell_polygon(m, c), 3, 2);
    const double q = integrate(hho::cell_quadrature(m, c, 5), [](const Point& p) { return std::pow(p.x(), 3) * p.y() * p.y(); });
    CHECK(std::abs(q - exact) <= 1e-12 * std::abs(exact));
  }
}

TEST_CASE("face quadrature") {
  const hho::Mesh square = hho::parse_mesh(unit_square_file);
  // face 0 joins (0,0) and (1,0)
  const hho::QuadratureRule r1 = hho::face_quadrature(square, 0, 1);
  CHECK(integrate(r1, [](const Point& p) { return p.x(); }) == doctest::Approx(0.5).epsilon(1e-15));
  const hho::QuadratureRule r4 = hho::face_quadrature(square, 0, 4);
  CHECK(integrate(r4, [](const Point& p) { return std::pow(p.x(), 4); }) == doctest::Approx(0.2).epsilon(1e-14));

  for (MeshFamily fam : families) {
    const hho::Mesh m = hho::generate_mesh(fam, 1);
    for (std::size_t f = 0; f < m.n_faces(); ++f) {
      const hho::QuadratureRule r = hho::face_quadrature(m, f, 6);
      double s = 0.;
      for (double w : r.weights) s += w;
      CHECK(s == doctest::Approx(m.face(f).diameter).epsilon(1e-14));
    }
  }
}

TEST_CASE("quadrature argument errors") {
  const hho::Mesh m = hho::generate_mesh(MeshFamily::Cartesian, 0);
  CHECK_THROWS_AS(hho::cell_quadrature(m, 0, -1), hho::Error);
  CHECK_THROWS_AS(hho::cell_quadrature(m, 99, 2), hho::Error);
  CHECK_THROWS_AS(hho::face_quadrature(m, 999, 2), hho::Error);
}

TEST_CASE("non-star-shaped cell is rejected by the centroid fan") {
  // Thin crescent: the centroid lies outside the polygon.
  std::vector<Point> v;
  const int n = 16;
  for (int i = 0; i <= n; ++i) {
    const double t = std::numbers::pi * i / n;
    v.emplace_back(std::cos(t), std::sin(t));
  }
  for (int i = n - 1; i >= 1; --i) {
    const double t = std::numbers::pi * i / n;
    v.emplace_back(0.9 * std::cos(t), 0.9 * std::sin(t));
  }
  std::vector<std::size_t> poly(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) poly[i] = i;
  const hho::Mesh m = hho::Mesh::from_polygons(v, {poly});
  try {
    hho::cell_quadrature(m, 0, 2);
    FAIL("expected an error");
  } catch (const hho::Error& e) {
    CHECK(e.kind() == hho::ErrorKind::Mesh);
    CHECK(std::string(e.what()).find("star-shaped") != std::string::npos);
  }
}
