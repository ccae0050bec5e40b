#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

namespace wgb {

using Point = Eigen::Vector2d;
using Index = std::size_t;

/// Straight-sided polygonal cell. The vertex loop is stored as given; a
/// well-formed mesh keeps it counter-clockwise.
struct Element {
  std::vector<Index> vertex_ids;
  /// edge_ids[l] joins vertex_ids[l] and vertex_ids[(l + 1) % N].
  std::vector<Index> edge_ids;
  double diameter = 0.0;
  /// Signed shoelace area; negative for a clockwise loop.
  double signed_area = 0.0;
  Point centroid = Point::Zero();
  bool is_convex = true;

  [[nodiscard]] std::size_t num_edges() const { return vertex_ids.size(); }
  [[nodiscard]] double area() const { return signed_area < 0 ? -signed_area : signed_area; }
};

struct EdgeNeighbor {
  Index element;
  /// Outward unit normal as seen from `element`'s own loop traversal.
  Point normal;
};

/// Edge with canonical orientation vertex_ids[0] < vertex_ids[1]. Polynomial
/// edge data is parameterized by t in [0,1] along that orientation.
struct Edge {
  std::array<Index, 2> vertex_ids{};
  std::vector<EdgeNeighbor> neighbors;
  Point tangent = Point::Zero();
  double length = 0.0;
  bool on_boundary = false;

  /// Outward normal with respect to `element`; throws if not adjacent.
  [[nodiscard]] const Point& normal(Index element) const;
};

/// Immutable polygonal partition with derived edge connectivity.
class Mesh {
 public:
  Mesh() = default;

  /// Builds edges, normals and element geometry from vertex loops. Does not
  /// reject malformed input; run validate() to inspect invariants.
  static Mesh from_polygons(std::vector<Point> vertices, std::vector<std::vector<Index>> loops);

  [[nodiscard]] const std::vector<Point>& vertices() const { return vertices_; }
  [[nodiscard]] const std::vector<Element>& elements() const { return elements_; }
  [[nodiscard]] const std::vector<Edge>& edges() const { return edges_; }
  [[nodiscard]] const Point& vertex(Index i) const { return vertices_[i]; }
  [[nodiscard]] const Element& element(Index i) const { return elements_[i]; }
  [[nodiscard]] const Edge& edge(Index i) const { return edges_[i]; }
  [[nodiscard]] std::size_t num_elements() const { return elements_.size(); }
  [[nodiscard]] std::size_t num_edges() const { return edges_.size(); }
  /// Largest element diameter.
  [[nodiscard]] double mesh_size() const { return h_; }

  /// Point at canonical arc parameter t in [0,1] along edge e.
  [[nodiscard]] Point edge_point(Index e, double t) const {
    const auto& ed = edges_[e];
    return vertices_[ed.vertex_ids[0]] + t * (vertices_[ed.vertex_ids[1]] - vertices_[ed.vertex_ids[0]]);
  }

  [[nodiscard]] std::vector<Point> element_polygon(Index e) const;

 private:
  [[nodiscard]] std::vector<Point> element_polygon_from(const std::vector<Index>& ids) const;

  std::vector<Point> vertices_;
  std::vector<Element> elements_;
  std::vector<Edge> edges_;
  double h_ = 0.0;
};

enum class MeshFamily { quad, triangle, nonconvex_L };

MeshFamily parse_family(std::string_view name);
std::string_view to_string(MeshFamily family);

/// Uniform partitions of the unit square. nonconvex_L requires even nx, ny
/// and pairs every 2x2 cell block into one square and one L-shaped hexagon;
/// the square's corner is mirrored between neighbouring blocks so the mesh
/// stays conforming.
Mesh generate_mesh(MeshFamily family, int nx, int ny);
Mesh generate_mesh(std::string_view family, int nx, int ny);

using Triangle = std::array<Point, 3>;

/// Splits a simple polygon into N-2 triangles: a fan from vertex 0 when the
/// element is convex, ear clipping otherwise. Throws on degenerate input.
std::vector<Triangle> triangulate(const Element& element, const Mesh& mesh);
std::vector<Triangle> triangulate_polygon(const std::vector<Point>& polygon);

double shoelace_area(const std::vector<Point>& polygon);

enum class ViolationKind {
  clockwise_loop,
  self_intersection,
  degenerate_element,
  edge_sharing,
  open_boundary,
  area_mismatch,
  normal_mismatch,
};

struct Violation {
  ViolationKind kind;
  /// Element or edge id; unused (0) for mesh-wide violations.
  Index id = 0;
  std::string message;
};

struct ValidationReport {
  std::vector<Violation> violations;

  [[nodiscard]] bool ok() const { return violations.empty(); }
  [[nodiscard]] std::size_t count(ViolationKind kind) const;
};

std::string_view to_string(ViolationKind kind);

/// Checks orientation, simplicity, edge sharing, boundary closure and area
/// coverage. The covered domain is the region enclosed by the boundary edges.
/// Shape-regularity constants are not checked.
ValidationReport validate(const Mesh& mesh);

}  // namespace wgb
