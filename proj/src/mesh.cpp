#include <hho/mesh.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>

#include <hho/error.hpp>

namespace hho {

namespace {

[[noreturn]] void mesh_error(const std::string& what) { throw Error(ErrorKind::Mesh, what); }

double signed_area(const std::vector<Point>& pts) {
  double a = 0.;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point& p = pts[i];
    const Point& q = pts[(i + 1) % pts.size()];
    a += p.x() * q.y() - q.x() * p.y();
  }
  return 0.5 * a;
}

}  // namespace

MeshFamily parse_family(std::string_view name) {
  if (name == "triangular") return MeshFamily::Triangular;
  if (name == "cartesian") return MeshFamily::Cartesian;
  if (name == "kershaw") return MeshFamily::Kershaw;
  if (name == "hexagonal") return MeshFamily::Hexagonal;
  throw Error(ErrorKind::InvalidArgument, "unsupported mesh family '" + std::string(name) + "'");
}

std::string_view family_name(MeshFamily family) {
  switch (family) {
    case MeshFamily::Triangular: return "triangular";
    case MeshFamily::Cartesian: return "cartesian";
    case MeshFamily::Kershaw: return "kershaw";
    case MeshFamily::Hexagonal: return "hexagonal";
  }
  return "unknown";
}

//------------------------------------------------------------------------------
// Construction
//------------------------------------------------------------------------------

Mesh Mesh::from_polygons(std::vector<Point> vertices,
                         const std::vector<std::vector<std::size_t>>& polygons) {
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> edge_ids;
  std::vector<std::array<std::size_t, 2>> face_vertices;
  std::vector<std::size_t> use_count;
  std::vector<std::vector<std::size_t>> cell_faces;
  cell_faces.reserve(polygons.size());

  for (const auto& poly : polygons) {
    std::vector<std::size_t> faces;
    faces.reserve(poly.size());
    for (std::size_t i = 0; i < poly.size(); ++i) {
      const std::size_t a = poly[i];
      const std::size_t b = poly[(i + 1) % poly.size()];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_ids.try_emplace({key.first, key.second}, face_vertices.size());
      if (inserted) {
        face_vertices.push_back({a, b});
        use_count.push_back(0);
      }
      ++use_count[it->second];
      faces.push_back(it->second);
    }
    cell_faces.push_back(std::move(faces));
  }

  std::vector<bool> boundary(face_vertices.size());
  for (std::size_t f = 0; f < face_vertices.size(); ++f) boundary[f] = use_count[f] == 1;
  return from_faces(std::move(vertices), face_vertices, boundary, cell_faces);
}

Mesh Mesh::from_faces(std::vector<Point> vertices,
                      const std::vector<std::array<std::size_t, 2>>& face_vertices,
                      const std::vector<bool>& boundary_flags,
                      const std::vector<std::vector<std::size_t>>& cell_faces) {
  if (boundary_flags.size() != face_vertices.size()) mesh_error("malformed counts: boundary flags do not match faces");

  Mesh mesh;
  mesh.m_vertices = std::move(vertices);
  const std::size_t nv = mesh.m_vertices.size();

  mesh.m_faces.resize(face_vertices.size());
  for (std::size_t f = 0; f < face_vertices.size(); ++f) {
    const auto& fv = face_vertices[f];
    if (fv[0] >= nv || fv[1] >= nv) mesh_error("dangling vertex index in face " + std::to_string(f));
    if (fv[0] == fv[1]) mesh_error("degenerate face " + std::to_string(f));
    mesh.m_faces[f].vertices = fv;
    mesh.m_faces[f].boundary = boundary_flags[f];
  }

  mesh.m_cells.resize(cell_faces.size());
  for (std::size_t c = 0; c < cell_faces.size(); ++c) {
    const auto& faces = cell_faces[c];
    const std::string tag = "cell " + std::to_string(c);
    if (faces.size() < 3) mesh_error("malformed counts: " + tag + " has fewer than 3 faces");
    for (std::size_t f : faces) {
      if (f >= mesh.m_faces.size()) mesh_error("dangling face index in " + tag);
      auto& inc = mesh.m_faces[f].cells;
      if (std::find(inc.begin(), inc.end(), c) != inc.end()) mesh_error(tag + " lists face " + std::to_string(f) + " twice");
      inc.push_back(c);
      if (inc.size() > 2) mesh_error("non-manifold face " + std::to_string(f) + " shared by more than 2 cells");
    }

    // Walk the face loop to recover the vertex loop.
    const auto& f0 = mesh.m_faces[faces[0]].vertices;
    const auto& f1 = mesh.m_faces[faces[1]].vertices;
    std::size_t current;
    if (f0[1] == f1[0] || f0[1] == f1[1]) {
      current = f0[0];
    } else if (f0[0] == f1[0] || f0[0] == f1[1]) {
      current = f0[1];
    } else {
      mesh_error(tag + ": consecutive faces do not share a vertex");
    }
    const std::size_t start = current;
    Cell& cell = mesh.m_cells[c];
    for (std::size_t f : faces) {
      const auto& fv = mesh.m_faces[f].vertices;
      cell.vertices.push_back(current);
      if (fv[0] == current) {
        current = fv[1];
      } else if (fv[1] == current) {
        current = fv[0];
      } else {
        mesh_error(tag + ": face loop is not connected");
      }
    }
    if (current != start) mesh_error(tag + ": face loop is not closed");
    cell.ccw_faces = faces;
  }

  for (std::size_t f = 0; f < mesh.m_faces.size(); ++f) {
    const Face& face = mesh.m_faces[f];
    if (face.cells.empty()) mesh_error("face " + std::to_string(f) + " belongs to no cell");
    if (face.boundary != (face.cells.size() == 1)) {
      mesh_error("face " + std::to_string(f) + ": boundary flag inconsistent with " +
                 std::to_string(face.cells.size()) + " incident cell(s)");
    }
  }

  mesh.finalize();
  return mesh;
}

void Mesh::finalize() {
  for (Face& face : m_faces) {
    std::sort(face.cells.begin(), face.cells.end());
    const Point& a = m_vertices[face.vertices[0]];
    const Point& b = m_vertices[face.vertices[1]];
    face.diameter = (b - a).norm();
    face.midpoint = 0.5 * (a + b);
    face.tangent = (b - a) / face.diameter;
  }

  for (std::size_t c = 0; c < m_cells.size(); ++c) {
    Cell& cell = m_cells[c];
    std::vector<Point> pts;
    for (std::size_t v : cell.vertices) pts.push_back(m_vertices[v]);
    cell.area = signed_area(pts);
    if (!(cell.area > 0.)) mesh_error("cell " + std::to_string(c) + " is not counterclockwise or has zero area");

    Point centroid = Point::Zero();
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point& p = pts[i];
      const Point& q = pts[(i + 1) % pts.size()];
      centroid += (p + q) * (p.x() * q.y() - q.x() * p.y());
    }
    cell.centroid = centroid / (6. * cell.area);

    cell.diameter = 0.;
    for (std::size_t i = 0; i < pts.size(); ++i)
      for (std::size_t j = i + 1; j < pts.size(); ++j) cell.diameter = std::max(cell.diameter, (pts[i] - pts[j]).norm());

    std::vector<Point> ccw_normals(pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Point t = (pts[(i + 1) % pts.size()] - pts[i]).normalized();
      ccw_normals[i] = Point(t.y(), -t.x());
    }

    cell.faces = cell.ccw_faces;
    std::sort(cell.faces.begin(), cell.faces.end());
    cell.normals.resize(cell.faces.size());
    cell.orientations.resize(cell.faces.size());
    for (std::size_t j = 0; j < cell.faces.size(); ++j) {
      const auto pos = std::find(cell.ccw_faces.begin(), cell.ccw_faces.end(), cell.faces[j]) - cell.ccw_faces.begin();
      cell.normals[j] = ccw_normals[pos];
      Face& face = m_faces[cell.faces[j]];
      cell.orientations[j] = face.cells.front() == c ? 1 : -1;
      if (face.cells.front() == c) face.normal = cell.normals[j];
    }
  }
}

std::size_t Mesh::n_boundary_faces() const {
  return static_cast<std::size_t>(std::count_if(m_faces.begin(), m_faces.end(), [](const Face& f) { return f.boundary; }));
}

double Mesh::max_diameter() const {
  double h = 0.;
  for (const Cell& c : m_cells) h = std::max(h, c.diameter);
  return h;
}

double Mesh::min_diameter() const {
  double h = std::numeric_limits<double>::infinity();
  for (const Cell& c : m_cells) h = std::min(h, c.diameter);
  return h;
}

//------------------------------------------------------------------------------
// Generators
//------------------------------------------------------------------------------

namespace {

std::size_t cells_per_side(int level) {
  if (level < 0) throw Error(ErrorKind::InvalidArgument, "refinement level must be nonnegative");
  if (level > 10) throw Error(ErrorKind::InvalidArgument, "refinement level too large");
  return std::size_t{4} << level;
}

std::vector<Point> grid_vertices(std::size_t n, bool kershaw) {
  std::vector<Point> v;
  v.reserve((n + 1) * (n + 1));
  for (std::size_t j = 0; j <= n; ++j) {
    for (std::size_t i = 0; i <= n; ++i) {
      const double xi = static_cast<double>(i) / static_cast<double>(n);
      const double eta = static_cast<double>(j) / static_cast<double>(n);
      double x = xi;
      if (kershaw && i != 0 && i != n) {
        // Horizontal displacement of the vertical grid lines, S-shaped twice in y.
        x += kershaw_distortion / std::numbers::pi * std::sin(std::numbers::pi * xi) *
             std::sin(2. * std::numbers::pi * eta);
      }
      v.emplace_back(x, eta);
    }
  }
  return v;
}

Mesh quad_grid(std::size_t n, bool kershaw) {
  auto id = [n](std::size_t i, std::size_t j) { return j * (n + 1) + i; };
  std::vector<std::vector<std::size_t>> polys;
  polys.reserve(n * n);
  for (std::size_t j = 0; j < n; ++j)
    for (std::size_t i = 0; i < n; ++i) polys.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1), id(i, j + 1)});
  return Mesh::from_polygons(grid_vertices(n, kershaw), polys);
}

Mesh triangle_grid(std::size_t n) {
  auto id = [n](std::size_t i, std::size_t j) { return j * (n + 1) + i; };
  std::vector<std::vector<std::size_t>> polys;
  polys.reserve(2 * n * n);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      polys.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
      polys.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
    }
  }
  return Mesh::from_polygons(grid_vertices(n, false), polys);
}

// Sutherland-Hodgman against one axis-aligned half-plane: sign * (p[axis] - value) >= 0.
std::vector<Point> clip(const std::vector<Point>& poly, int axis, double value, double sign) {
  std::vector<Point> out;
  auto inside = [&](const Point& p) { return sign * (p[axis] - value) >= 0.; };
  for (std::size_t i = 0; i < poly.size(); ++i) {
    const Point& p = poly[i];
    const Point& q = poly[(i + 1) % poly.size()];
    const bool pin = inside(p), qin = inside(q);
    if (pin) out.push_back(p);
    if (pin != qin) {
      const double t = (value - p[axis]) / (q[axis] - p[axis]);
      Point x = p + t * (q - p);
      x[axis] = value;
      out.push_back(x);
    }
  }
  std::vector<Point> cleaned;
  for (const Point& p : out)
    if (cleaned.empty() || (p - cleaned.back()).norm() > 1e-13) cleaned.push_back(p);
  while (cleaned.size() > 1 && (cleaned.front() - cleaned.back()).norm() <= 1e-13) cleaned.pop_back();
  return cleaned;
}

// Hexagon tiling with `n` columns; rows are spaced so that both y = 0 and y = 1
// pass through hexagon centres (hexagons are regular up to a few percent).
Mesh hexagon_tiling(std::size_t n) {
  const std::size_t rows = n / 4 * 5;
  const double w = 1. / static_cast<double>(n);
  const double third = 1. / (3. * static_cast<double>(rows));

  std::vector<Point> vertices;
  std::map<std::pair<long long, long long>, std::size_t> index;
  auto vertex_id = [&](const Point& p) {
    const std::pair<long long, long long> key{std::llround(p.x() * 1e10), std::llround(p.y() * 1e10)};
    auto [it, inserted] = index.try_emplace(key, vertices.size());
    if (inserted) vertices.push_back(p);
    return it->second;
  };

  std::vector<std::vector<std::size_t>> polys;
  for (std::size_t j = 0; j <= rows; ++j) {
    const bool odd = j % 2 == 1;
    const std::size_t ncols = odd ? n : n + 1;
    const long long yc = 3 * static_cast<long long>(j);
    for (std::size_t m = 0; m < ncols; ++m) {
      const long long xc2 = 2 * static_cast<long long>(m) + (odd ? 1 : 0);  // centre in units of w/2
      auto X = [&](long long dx) { return static_cast<double>(xc2 + dx) * 0.5 * w; };
      auto Y = [&](long long dy) { return static_cast<double>(yc + dy) * third; };
      std::vector<Point> hex = {{X(1), Y(-1)}, {X(1), Y(1)},   {X(0), Y(2)},
                                {X(-1), Y(1)}, {X(-1), Y(-1)}, {X(0), Y(-2)}};
      hex = clip(hex, 0, 0., 1.);
      if (hex.size() >= 3) hex = clip(hex, 0, 1., -1.);
      if (hex.size() >= 3) hex = clip(hex, 1, 0., 1.);
      if (hex.size() >= 3) hex = clip(hex, 1, 1., -1.);
      if (hex.size() < 3 || signed_area(hex) < 1e-14) continue;
      std::vector<std::size_t> ids;
      for (const Point& p : hex) ids.push_back(vertex_id(p));
      polys.push_back(std::move(ids));
    }
  }
  return Mesh::from_polygons(std::move(vertices), polys);
}

}  // namespace

Mesh generate_mesh(MeshFamily family, int level) {
  const std::size_t n = cells_per_side(level);
  switch (family) {
    case MeshFamily::Triangular: return triangle_grid(n);
    case MeshFamily::Cartesian: return quad_grid(n, false);
    case MeshFamily::Kershaw: return quad_grid(n, true);
    case MeshFamily::Hexagonal: return hexagon_tiling(n);
  }
  throw Error(ErrorKind::InvalidArgument, "unsupported mesh family");
}

Mesh generate_mesh(std::string_view family, int level) { return generate_mesh(parse_family(family), level); }

//------------------------------------------------------------------------------
// Text I/O
//------------------------------------------------------------------------------

namespace {

// Non-empty, comment-stripped lines.
std::vector<std::string> content_lines(std::string_view text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    lines.push_back(line);
  }
  return lines;
}

template <typename T>
std::vector<T> parse_tokens(const std::string& line, std::size_t line_no) {
  std::istringstream in(line);
  std::vector<T> out;
  std::string tok;
  while (in >> tok) {
    T value{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
      mesh_error("malformed token '" + tok + "' on content line " + std::to_string(line_no + 1));
    }
    out.push_back(value);
  }
  return out;
}

void append_double(std::string& out, double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), x);
  out.append(buf, res.ptr);
}

}  // namespace

Mesh parse_mesh(std::string_view text) {
  const auto lines = content_lines(text);
  if (lines.empty()) mesh_error("malformed counts: empty mesh file");
  const auto counts = parse_tokens<std::size_t>(lines[0], 0);
  if (counts.size() != 3) mesh_error("malformed counts: header must be 'NV NF NC'");
  const std::size_t nv = counts[0], nf = counts[1], nc = counts[2];
  if (lines.size() != 1 + nv + nf + nc) {
    mesh_error("malformed counts: expected " + std::to_string(1 + nv + nf + nc) + " content lines, found " +
               std::to_string(lines.size()));
  }

  std::vector<Point> vertices;
  vertices.reserve(nv);
  std::size_t l = 1;
  for (std::size_t i = 0; i < nv; ++i, ++l) {
    const auto xy = parse_tokens<double>(lines[l], l);
    if (xy.size() != 2) mesh_error("malformed vertex line " + std::to_string(l + 1));
    vertices.emplace_back(xy[0], xy[1]);
  }

  std::vector<std::array<std::size_t, 2>> faces;
  std::vector<bool> boundary;
  for (std::size_t i = 0; i < nf; ++i, ++l) {
    const auto f = parse_tokens<std::size_t>(lines[l], l);
    if (f.size() != 3 || f[2] > 1) mesh_error("malformed face line " + std::to_string(l + 1));
    faces.push_back({f[0], f[1]});
    boundary.push_back(f[2] == 1);
  }

  std::vector<std::vector<std::size_t>> cells;
  for (std::size_t i = 0; i < nc; ++i, ++l) {
    const auto c = parse_tokens<std::size_t>(lines[l], l);
    if (c.empty() || c.size() != c[0] + 1) mesh_error("malformed counts on cell line " + std::to_string(l + 1));
    cells.emplace_back(c.begin() + 1, c.end());
  }

  return Mesh::from_faces(std::move(vertices), faces, boundary, cells);
}

Mesh read_mesh(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Io, "cannot open mesh file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_mesh(ss.str());
}

std::string format_mesh(const Mesh& mesh) {
  std::string out;
  out += std::to_string(mesh.n_vertices()) + ' ' + std::to_string(mesh.n_faces()) + ' ' +
         std::to_string(mesh.n_cells()) + '\n';
  for (const Point& p : mesh.vertices()) {
    append_double(out, p.x());
    out += ' ';
    append_double(out, p.y());
    out += '\n';
  }
  for (const Face& f : mesh.faces()) {
    out += std::to_string(f.vertices[0]) + ' ' + std::to_string(f.vertices[1]) + ' ' + (f.boundary ? '1' : '0') + '\n';
  }
  for (const Cell& c : mesh.cells()) {
    out += std::to_string(c.ccw_faces.size());
    for (std::size_t f : c.ccw_faces) out += ' ' + std::to_string(f);
    out += '\n';
  }
  return out;
}

void write_mesh(const Mesh& mesh, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot write mesh file '" + path + "'");
  out << format_mesh(mesh);
  if (!out) throw Error(ErrorKind::Io, "failed writing mesh file '" + path + "'");
}

}  // namespace hho
