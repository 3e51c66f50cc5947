// Polytopal meshes of the unit square.
//
// Cells are arbitrary polygons, faces are segments. Each face carries a global
// normal pointing out of its lowest-numbered incident cell; cells store a sign
// per face so that sign * face.normal is the outward normal n_TF.

#ifndef HHO_MESH_HPP
#define HHO_MESH_HPP

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace hho {

using Point = Eigen::Vector2d;

enum class MeshFamily { Triangular, Cartesian, Kershaw, Hexagonal };

MeshFamily parse_family(std::string_view name);
std::string_view family_name(MeshFamily family);

struct Face {
  std::array<std::size_t, 2> vertices{};
  bool boundary = false;
  std::vector<std::size_t> cells;  ///< incident cells, ascending (1 or 2 entries)
  double diameter = 0.;            ///< h_F, the segment length
  Point midpoint = Point::Zero();
  Point tangent = Point::Zero();   ///< unit vector from vertices[0] to vertices[1]
  Point normal = Point::Zero();    ///< unit, outward for cells[0]
};

struct Cell {
  std::vector<std::size_t> vertices;   ///< counterclockwise polygon
  std::vector<std::size_t> ccw_faces;  ///< face i joins vertices[i] and vertices[i+1]
  std::vector<std::size_t> faces;      ///< ascending global ids; local DOF order
  std::vector<int> orientations;       ///< +1 if faces[j].normal is outward for this cell
  std::vector<Point> normals;          ///< outward unit normals, aligned with faces
  double area = 0.;
  double diameter = 0.;  ///< h_T
  Point centroid = Point::Zero();
};

class Mesh {
public:
  /// Builds a mesh from counterclockwise polygons; faces are numbered by first appearance.
  static Mesh from_polygons(std::vector<Point> vertices,
                            const std::vector<std::vector<std::size_t>>& polygons);

  /// Builds a mesh from explicit faces and counterclockwise face lists per cell.
  static Mesh from_faces(std::vector<Point> vertices,
                         const std::vector<std::array<std::size_t, 2>>& face_vertices,
                         const std::vector<bool>& boundary_flags,
                         const std::vector<std::vector<std::size_t>>& cell_faces);

  std::size_t n_vertices() const { return m_vertices.size(); }
  std::size_t n_faces() const { return m_faces.size(); }
  std::size_t n_cells() const { return m_cells.size(); }

  const std::vector<Point>& vertices() const { return m_vertices; }
  const std::vector<Face>& faces() const { return m_faces; }
  const std::vector<Cell>& cells() const { return m_cells; }
  const Point& vertex(std::size_t i) const { return m_vertices.at(i); }
  const Face& face(std::size_t i) const { return m_faces.at(i); }
  const Cell& cell(std::size_t i) const { return m_cells.at(i); }

  std::size_t n_boundary_faces() const;
  std::size_t n_interior_faces() const { return n_faces() - n_boundary_faces(); }

  /// h = max_T h_T
  double max_diameter() const;
  double min_diameter() const;

private:
  void finalize();

  std::vector<Point> m_vertices;
  std::vector<Face> m_faces;
  std::vector<Cell> m_cells;
};

/// Generates one member of a mesh family on (0,1)^2. Level 0 has 4 cells per side
/// (4 hexagon columns), each level halves h.
Mesh generate_mesh(MeshFamily family, int level);
Mesh generate_mesh(std::string_view family, int level);

/// Distortion amplitude of the Kershaw-type family.
inline constexpr double kershaw_distortion = 0.3;

/// Line-oriented text format:
///   NV NF NC
///   x y                      (NV lines)
///   v0 v1 boundary_flag      (NF lines)
///   n f0 ... f{n-1}          (NC lines, counterclockwise)
/// '#' starts a comment.
Mesh read_mesh(const std::string& path);
Mesh parse_mesh(std::string_view text);
void write_mesh(const Mesh& mesh, const std::string& path);
std::string format_mesh(const Mesh& mesh);

}  // namespace hho

#endif
