#include "wgb/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace wgb {

namespace {

double cross(const Point& a, const Point& b) { return a.x() * b.y() - a.y() * b.x(); }

// Outward normal of a directed boundary segment of a counter-clockwise loop.
Point right_normal(const Point& direction) {
  return Point(direction.y(), -direction.x()).normalized();
}

bool on_segment(const Point& p, const Point& a, const Point& b, double tol) {
  if (std::abs(cross(b - a, p - a)) > tol * (b - a).norm()) return false;
  const double s = (p - a).dot(b - a);
  return s >= -tol && s <= (b - a).squaredNorm() + tol;
}

bool segments_intersect(const Point& a, const Point& b, const Point& c, const Point& d, double tol) {
  const double d1 = cross(b - a, c - a);
  const double d2 = cross(b - a, d - a);
  const double d3 = cross(d - c, a - c);
  const double d4 = cross(d - c, b - c);
  if (((d1 > tol && d2 < -tol) || (d1 < -tol && d2 > tol)) &&
      ((d3 > tol && d4 < -tol) || (d3 < -tol && d4 > tol))) {
    return true;
  }
  return on_segment(c, a, b, tol) || on_segment(d, a, b, tol) || on_segment(a, c, d, tol) ||
         on_segment(b, c, d, tol);
}

bool inside_or_on_triangle(const Point& p, const Point& a, const Point& b, const Point& c, double tol) {
  const double c1 = cross(b - a, p - a);
  const double c2 = cross(c - b, p - b);
  const double c3 = cross(a - c, p - c);
  return c1 >= -tol && c2 >= -tol && c3 >= -tol;
}

}  // namespace

const Point& Edge::normal(Index element) const {
  for (const auto& nb : neighbors) {
    if (nb.element == element) return nb.normal;
  }
  throw std::out_of_range("edge is not adjacent to element " + std::to_string(element));
}

double shoelace_area(const std::vector<Point>& polygon) {
  double twice = 0.0;
  const std::size_t n = polygon.size();
  for (std::size_t i = 0; i < n; ++i) twice += cross(polygon[i], polygon[(i + 1) % n]);
  return 0.5 * twice;
}

std::vector<Point> Mesh::element_polygon(Index e) const {
  std::vector<Point> poly;
  poly.reserve(elements_[e].vertex_ids.size());
  for (Index v : elements_[e].vertex_ids) poly.push_back(vertices_[v]);
  return poly;
}

Mesh Mesh::from_polygons(std::vector<Point> vertices, std::vector<std::vector<Index>> loops) {
  Mesh mesh;
  mesh.vertices_ = std::move(vertices);
  std::map<std::pair<Index, Index>, Index> edge_lookup;

  mesh.elements_.reserve(loops.size());
  for (Index el = 0; el < loops.size(); ++el) {
    auto& loop = loops[el];
    const std::size_t n = loop.size();
    if (n < 3) throw std::invalid_argument("element " + std::to_string(el) + " has fewer than 3 vertices");
    for (Index v : loop) {
      if (v >= mesh.vertices_.size()) {
        throw std::out_of_range("element " + std::to_string(el) + " references missing vertex " + std::to_string(v));
      }
    }

    Element element;
    element.vertex_ids = std::move(loop);
    const auto poly = mesh.element_polygon_from(element.vertex_ids);

    element.signed_area = shoelace_area(poly);
    Point centroid = Point::Zero();
    for (std::size_t i = 0; i < n; ++i) {
      const Point& a = poly[i];
      const Point& b = poly[(i + 1) % n];
      centroid += cross(a, b) * (a + b);
    }
    if (std::abs(element.signed_area) > 0) {
      element.centroid = centroid / (6.0 * element.signed_area);
    } else {
      for (const auto& p : poly) element.centroid += p / static_cast<double>(n);
    }

    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        element.diameter = std::max(element.diameter, (poly[i] - poly[j]).norm());
      }
    }

    const double convex_tol = -1e-14 * element.diameter * element.diameter;
    for (std::size_t i = 0; i < n; ++i) {
      const Point e1 = poly[(i + 1) % n] - poly[i];
      const Point e2 = poly[(i + 2) % n] - poly[(i + 1) % n];
      if (cross(e1, e2) < convex_tol) element.is_convex = false;
    }

    element.edge_ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
      const Index a = element.vertex_ids[i];
      const Index b = element.vertex_ids[(i + 1) % n];
      const auto key = std::minmax(a, b);
      auto [it, inserted] = edge_lookup.try_emplace({key.first, key.second}, mesh.edges_.size());
      if (inserted) {
        Edge edge;
        edge.vertex_ids = {key.first, key.second};
        const Point d = mesh.vertices_[key.second] - mesh.vertices_[key.first];
        edge.length = d.norm();
        edge.tangent = edge.length > 0 ? Point(d / edge.length) : Point::Zero();
        mesh.edges_.push_back(std::move(edge));
      }
      Edge& edge = mesh.edges_[it->second];
      const Point traversal = mesh.vertices_[b] - mesh.vertices_[a];
      edge.neighbors.push_back({el, traversal.norm() > 0 ? right_normal(traversal) : Point::Zero()});
      element.edge_ids.push_back(it->second);
    }

    mesh.h_ = std::max(mesh.h_, element.diameter);
    mesh.elements_.push_back(std::move(element));
  }

  for (auto& edge : mesh.edges_) edge.on_boundary = edge.neighbors.size() == 1;
  return mesh;
}

std::vector<Point> Mesh::element_polygon_from(const std::vector<Index>& ids) const {
  std::vector<Point> poly;
  poly.reserve(ids.size());
  for (Index v : ids) poly.push_back(vertices_[v]);
  return poly;
}

MeshFamily parse_family(std::string_view name) {
  if (name == "quad") return MeshFamily::quad;
  if (name == "triangle") return MeshFamily::triangle;
  if (name == "nonconvex_L") return MeshFamily::nonconvex_L;
  throw std::invalid_argument("unknown mesh family '" + std::string(name) + "'");
}

std::string_view to_string(MeshFamily family) {
  switch (family) {
    case MeshFamily::quad: return "quad";
    case MeshFamily::triangle: return "triangle";
    case MeshFamily::nonconvex_L: return "nonconvex_L";
  }
  return "unknown";
}

Mesh generate_mesh(std::string_view family, int nx, int ny) {
  return generate_mesh(parse_family(family), nx, ny);
}

Mesh generate_mesh(MeshFamily family, int nx, int ny) {
  if (nx < 1 || ny < 1) throw std::invalid_argument("generate_mesh: nx and ny must be >= 1");
  if (family == MeshFamily::nonconvex_L && (nx % 2 != 0 || ny % 2 != 0)) {
    throw std::invalid_argument("generate_mesh: nonconvex_L requires even nx and ny");
  }

  const auto vid = [nx](int i, int j) { return static_cast<Index>(j * (nx + 1) + i); };
  std::vector<Point> vertices;
  vertices.reserve(static_cast<std::size_t>((nx + 1) * (ny + 1)));
  for (int j = 0; j <= ny; ++j) {
    for (int i = 0; i <= nx; ++i) {
      vertices.emplace_back(static_cast<double>(i) / nx, static_cast<double>(j) / ny);
    }
  }

  std::vector<std::vector<Index>> loops;
  switch (family) {
    case MeshFamily::quad:
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          loops.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
      }
      break;
    case MeshFamily::triangle:
      for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
          loops.push_back({vid(i, j), vid(i + 1, j), vid(i + 1, j + 1)});
          loops.push_back({vid(i, j), vid(i + 1, j + 1), vid(i, j + 1)});
        }
      }
      break;
    case MeshFamily::nonconvex_L:
      for (int by = 0; by < ny / 2; ++by) {
        for (int bx = 0; bx < nx / 2; ++bx) {
          const int i0 = 2 * bx;
          const int j0 = 2 * by;
          // Square cell offset inside the block; mirrored on odd block
          // rows/columns so split block sides always meet split sides.
          const int cx = bx % 2 == 0 ? 1 : 0;
          const int cy = by % 2 == 0 ? 1 : 0;
          const int si = i0 + cx;
          const int sj = j0 + cy;
          loops.push_back({vid(si, sj), vid(si + 1, sj), vid(si + 1, sj + 1), vid(si, sj + 1)});

          const std::array<std::array<int, 2>, 4> corners{{{0, 0}, {2, 0}, {2, 2}, {0, 2}}};
          const std::array<int, 2> notch{2 * cx, 2 * cy};
          std::vector<Index> hexagon;
          for (std::size_t c = 0; c < corners.size(); ++c) {
            if (corners[c] != notch) {
              hexagon.push_back(vid(i0 + corners[c][0], j0 + corners[c][1]));
              continue;
            }
            const auto& prev = corners[(c + 3) % 4];
            const auto& next = corners[(c + 1) % 4];
            hexagon.push_back(vid(i0 + (prev[0] + notch[0]) / 2, j0 + (prev[1] + notch[1]) / 2));
            hexagon.push_back(vid(i0 + 1, j0 + 1));
            hexagon.push_back(vid(i0 + (next[0] + notch[0]) / 2, j0 + (next[1] + notch[1]) / 2));
          }
          loops.push_back(std::move(hexagon));
        }
      }
      break;
  }

  return Mesh::from_polygons(std::move(vertices), std::move(loops));
}

std::vector<Triangle> triangulate(const Element& element, const Mesh& mesh) {
  std::vector<Point> poly;
  poly.reserve(element.vertex_ids.size());
  for (Index v : element.vertex_ids) poly.push_back(mesh.vertex(v));
  if (element.is_convex && element.signed_area > 0) {
    std::vector<Triangle> fan;
    fan.reserve(poly.size() - 2);
    for (std::size_t i = 1; i + 1 < poly.size(); ++i) fan.push_back({poly[0], poly[i], poly[i + 1]});
    return fan;
  }
  return triangulate_polygon(poly);
}

std::vector<Triangle> triangulate_polygon(const std::vector<Point>& polygon) {
  const std::size_t n = polygon.size();
  if (n < 3) throw std::invalid_argument("triangulate: polygon needs at least 3 vertices");

  double diameter = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) diameter = std::max(diameter, (polygon[i] - polygon[j]).norm());
  }
  const double area = shoelace_area(polygon);
  if (std::abs(area) <= 1e-14 * diameter * diameter) {
    throw std::invalid_argument("triangulate: degenerate polygon (zero area)");
  }

  std::vector<std::size_t> remaining(n);
  for (std::size_t i = 0; i < n; ++i) remaining[i] = i;
  if (area < 0) std::reverse(remaining.begin(), remaining.end());

  const double tol = 1e-13 * diameter * diameter;
  std::vector<Triangle> triangles;
  triangles.reserve(n - 2);

  while (remaining.size() > 3) {
    const std::size_t m = remaining.size();
    bool clipped = false;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t ip = remaining[(i + m - 1) % m];
      const std::size_t ic = remaining[i];
      const std::size_t in = remaining[(i + 1) % m];
      const Point& a = polygon[ip];
      const Point& b = polygon[ic];
      const Point& c = polygon[in];
      if (cross(b - a, c - b) <= tol) continue;

      bool blocked = false;
      for (std::size_t j = 0; j < m && !blocked; ++j) {
        const std::size_t other = remaining[j];
        if (other == ip || other == ic || other == in) continue;
        const Point& p = polygon[other];
        if ((p - a).norm() <= 1e-14 * diameter || (p - b).norm() <= 1e-14 * diameter ||
            (p - c).norm() <= 1e-14 * diameter) {
          continue;
        }
        blocked = inside_or_on_triangle(p, a, b, c, tol);
      }
      if (blocked) continue;

      triangles.push_back({a, b, c});
      remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(i));
      clipped = true;
      break;
    }
    if (!clipped) throw std::invalid_argument("triangulate: no ear found (polygon not simple)");
  }
  triangles.push_back({polygon[remaining[0]], polygon[remaining[1]], polygon[remaining[2]]});
  return triangles;
}

std::size_t ValidationReport::count(ViolationKind kind) const {
  return static_cast<std::size_t>(
      std::count_if(violations.begin(), violations.end(), [kind](const Violation& v) { return v.kind == kind; }));
}

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::clockwise_loop: return "clockwise_loop";
    case ViolationKind::self_intersection: return "self_intersection";
    case ViolationKind::degenerate_element: return "degenerate_element";
    case ViolationKind::edge_sharing: return "edge_sharing";
    case ViolationKind::open_boundary: return "open_boundary";
    case ViolationKind::area_mismatch: return "area_mismatch";
    case ViolationKind::normal_mismatch: return "normal_mismatch";
  }
  return "unknown";
}

ValidationReport validate(const Mesh& mesh) {
  ValidationReport report;
  auto add = [&report](ViolationKind kind, Index id, std::string message) {
    report.violations.push_back({kind, id, std::move(message)});
  };

  double element_area_sum = 0.0;
  for (Index el = 0; el < mesh.num_elements(); ++el) {
    const auto& element = mesh.element(el);
    const double h2 = element.diameter * element.diameter;
    element_area_sum += element.area();
    if (std::abs(element.signed_area) <= 1e-14 * h2) {
      add(ViolationKind::degenerate_element, el, "element " + std::to_string(el) + " has zero area");
      continue;
    }
    if (element.signed_area < 0) {
      add(ViolationKind::clockwise_loop, el, "element " + std::to_string(el) + " vertex loop is clockwise");
    }

    const auto poly = mesh.element_polygon(el);
    const std::size_t n = poly.size();
    const double tol = 1e-13 * element.diameter;
    bool simple = true;
    for (std::size_t i = 0; i < n && simple; ++i) {
      for (std::size_t j = i + 1; j < n && simple; ++j) {
        // consecutive segments share a vertex by construction
        if (j == i + 1 || (i == 0 && j == n - 1)) continue;
        if (segments_intersect(poly[i], poly[(i + 1) % n], poly[j], poly[(j + 1) % n], tol)) simple = false;
      }
    }
    for (std::size_t i = 0; i < n && simple; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) {
        if (element.vertex_ids[i] == element.vertex_ids[j]) simple = false;
      }
    }
    if (!simple) {
      add(ViolationKind::self_intersection, el, "element " + std::to_string(el) + " vertex loop is not simple");
    }
  }

  std::vector<std::vector<Index>> boundary_incidence(mesh.vertices().size());
  double domain_area = 0.0;
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const auto& edge = mesh.edge(e);
    if (edge.neighbors.size() > 2) {
      add(ViolationKind::edge_sharing, e,
          "edge " + std::to_string(e) + " is shared by " + std::to_string(edge.neighbors.size()) + " elements");
      continue;
    }
    if (edge.neighbors.size() == 2) {
      const Point sum = edge.neighbors[0].normal + edge.neighbors[1].normal;
      if (sum.norm() > 1e-12) {
        add(ViolationKind::normal_mismatch, e, "edge " + std::to_string(e) + " normals are not opposite");
      }
      continue;
    }
    boundary_incidence[edge.vertex_ids[0]].push_back(e);
    boundary_incidence[edge.vertex_ids[1]].push_back(e);
    Point a = mesh.vertex(edge.vertex_ids[0]);
    Point b = mesh.vertex(edge.vertex_ids[1]);
    const Point& n = edge.neighbors[0].normal;
    if (n.dot(Point(edge.tangent.y(), -edge.tangent.x())) < 0) std::swap(a, b);
    domain_area += 0.5 * cross(a, b);
  }

  // Every boundary vertex must have degree two and the boundary a single cycle.
  bool closed = true;
  std::size_t boundary_edges = 0;
  Index start = mesh.vertices().size();
  for (Index v = 0; v < boundary_incidence.size(); ++v) {
    const auto deg = boundary_incidence[v].size();
    boundary_edges += deg;
    if (deg != 0 && deg != 2) {
      closed = false;
      add(ViolationKind::open_boundary, v,
          "vertex " + std::to_string(v) + " touches " + std::to_string(deg) + " boundary edges");
    }
    if (deg == 2 && start == mesh.vertices().size()) start = v;
  }
  boundary_edges /= 2;
  if (closed && start < mesh.vertices().size()) {
    std::size_t walked = 0;
    Index v = start;
    Index came_from = boundary_incidence[start][0];
    do {
      const auto& inc = boundary_incidence[v];
      const Index next_edge = inc[0] == came_from ? inc[1] : inc[0];
      const auto& ed = mesh.edge(next_edge);
      v = ed.vertex_ids[0] == v ? ed.vertex_ids[1] : ed.vertex_ids[0];
      came_from = next_edge;
      ++walked;
    } while (v != start && walked <= boundary_edges);
    if (walked != boundary_edges) {
      add(ViolationKind::open_boundary, 0, "boundary edges do not form a single closed loop");
    }
  } else if (start == mesh.vertices().size() && mesh.num_elements() > 0) {
    add(ViolationKind::open_boundary, 0, "mesh has no boundary edges");
  }

  if (std::abs(element_area_sum - domain_area) > 1e-12 * std::max(std::abs(domain_area), 1e-300)) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "total element area " << element_area_sum << " differs from domain area " << domain_area;
    add(ViolationKind::area_mismatch, 0, msg.str());
  }
  return report;
}

}  // namespace wgb
