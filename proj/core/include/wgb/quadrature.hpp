#pragma once

#include <functional>
#include <vector>

#include "wgb/mesh.hpp"

namespace wgb {

/// Highest polynomial degree any rule is built for.
inline constexpr int kMaxQuadratureDegree = 40;

/// Points on the reference domain: the unit triangle (0,0),(1,0),(0,1) for
/// area rules, [-1,1] (x component only) for edge rules.
struct QuadratureRule {
  std::vector<Point> points;
  std::vector<double> weights;
  int exact_degree = 0;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
};

/// Gauss-Legendre nodes and weights on [-1,1], exact to degree 2n-1.
void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights);

/// Collapsed tensor-product Gauss rule on the unit triangle.
/// Cached; the returned reference lives for the whole program.
const QuadratureRule& triangle_rule(int degree);

/// Gauss-Legendre rule on [-1,1] with exact_degree = 2n-1 >= degree. Cached.
const QuadratureRule& edge_rule(int degree);

using ScalarField = std::function<double(const Point&)>;

/// Physical points and weights covering one element (mapped through its
/// triangulation).
struct ElementQuadrature {
  std::vector<Point> points;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
};

/// Physical points and weights along one edge; `t` holds the canonical arc
/// parameter of each point.
struct EdgeQuadrature {
  std::vector<Point> points;
  std::vector<double> t;
  std::vector<double> weights;

  [[nodiscard]] std::size_t size() const { return weights.size(); }
};

ElementQuadrature map_to_triangle(const Triangle& tri, int degree);
ElementQuadrature element_quadrature(const Element& element, const Mesh& mesh, int degree);
EdgeQuadrature edge_quadrature(Index edge, const Mesh& mesh, int degree);

double integrate_element(const Element& element, const Mesh& mesh, const ScalarField& f, int degree);
double integrate_edge(Index edge, const Mesh& mesh, const ScalarField& f, int degree);

}  // namespace wgb
