#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "wgb/mesh.hpp"

namespace wgbtest {

inline double rel_err(double got, double want) {
  return std::abs(got - want) / std::max(1.0, std::abs(want));
}

inline wgb::Mesh single_square(double x0 = 0.0, double y0 = 0.0, double s = 1.0) {
  return wgb::Mesh::from_polygons({{x0, y0}, {x0 + s, y0}, {x0 + s, y0 + s}, {x0, y0 + s}}, {{0, 1, 2, 3}});
}

// L-shaped hexagon: unit square minus its upper-right quarter
inline wgb::Mesh single_l_hexagon() {
  return wgb::Mesh::from_polygons({{0, 0}, {1, 0}, {1, 0.5}, {0.5, 0.5}, {0.5, 1}, {0, 1}}, {{0, 1, 2, 3, 4, 5}});
}

inline std::mt19937_64& rng() {
  static std::mt19937_64 gen(20240611);
  return gen;
}

inline double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(rng()); }

// Random point strictly inside a mesh element: a convex combination biased
// toward one triangle of its triangulation.
inline wgb::Point interior_point(const wgb::Element& el, const wgb::Mesh& mesh) {
  const auto tris = wgb::triangulate(el, mesh);
  const auto& t = tris[static_cast<std::size_t>(uniform(0, static_cast<double>(tris.size()) - 1e-9))];
  double a = uniform(0.05, 0.9), b = uniform(0.05, 0.9);
  if (a + b > 0.95) {
    a = 0.95 - a * 0.5;
    b = 0.95 - a - 0.01;
  }
  return t[0] + a * (t[1] - t[0]) + b * (t[2] - t[0]);
}

}  // namespace wgbtest
