#include "wgb/quadrature.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace wgb {

namespace {

void check_degree(int degree) {
  if (degree < 0 || degree > kMaxQuadratureDegree) {
    throw std::out_of_range("quadrature degree " + std::to_string(degree) + " outside [0, " +
                            std::to_string(kMaxQuadratureDegree) + "]");
  }
}

int points_for(int degree) { return degree / 2 + 1; }

QuadratureRule build_edge_rule(int degree) {
  QuadratureRule rule;
  std::vector<double> nodes;
  gauss_legendre(points_for(degree), nodes, rule.weights);
  for (double x : nodes) rule.points.emplace_back(x, 0.0);
  rule.exact_degree = 2 * points_for(degree) - 1;
  return rule;
}

// x = s, y = t (1 - s) maps [0,1]^2 onto the triangle with Jacobian (1 - s).
// A degree-d integrand becomes degree d+1 in s and d in t.
QuadratureRule build_triangle_rule(int degree) {
  const int n = points_for(degree + 1);
  std::vector<double> nodes;
  std::vector<double> weights;
  gauss_legendre(n, nodes, weights);

  QuadratureRule rule;
  rule.points.reserve(static_cast<std::size_t>(n * n));
  rule.weights.reserve(static_cast<std::size_t>(n * n));
  for (int i = 0; i < n; ++i) {
    const double s = 0.5 * (nodes[i] + 1.0);
    const double ws = 0.5 * weights[i];
    for (int j = 0; j < n; ++j) {
      const double t = 0.5 * (nodes[j] + 1.0);
      const double wt = 0.5 * weights[j];
      rule.points.emplace_back(s, t * (1.0 - s));
      rule.weights.push_back(ws * wt * (1.0 - s));
    }
  }
  rule.exact_degree = 2 * n - 2;
  return rule;
}

template <typename Builder>
std::array<QuadratureRule, kMaxQuadratureDegree + 1> build_all(Builder build) {
  std::array<QuadratureRule, kMaxQuadratureDegree + 1> rules;
  for (int d = 0; d <= kMaxQuadratureDegree; ++d) rules[static_cast<std::size_t>(d)] = build(d);
  return rules;
}

}  // namespace

void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  if (n < 1) throw std::invalid_argument("gauss_legendre: need at least one point");
  nodes.assign(static_cast<std::size_t>(n), 0.0);
  weights.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (int m = 2; m <= n; ++m) {
        const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
        p0 = p1;
        p1 = p2;
      }
      if (n == 1) p0 = 1.0;
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0;
    double p1 = x;
    for (int m = 2; m <= n; ++m) {
      const double p2 = ((2.0 * m - 1.0) * x * p1 - (m - 1.0) * p0) / m;
      p0 = p1;
      p1 = p2;
    }
    if (n == 1) p0 = 1.0;
    dp = n * (x * p1 - p0) / (x * x - 1.0);
    const auto lo = static_cast<std::size_t>(i);
    const auto hi = static_cast<std::size_t>(n - 1 - i);
    nodes[lo] = -x;
    nodes[hi] = x;
    weights[lo] = weights[hi] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  if (n % 2 == 1) nodes[static_cast<std::size_t>(n / 2)] = 0.0;
}

const QuadratureRule& triangle_rule(int degree) {
  check_degree(degree);
  static const auto rules = build_all(build_triangle_rule);
  return rules[static_cast<std::size_t>(degree)];
}

const QuadratureRule& edge_rule(int degree) {
  check_degree(degree);
  static const auto rules = build_all(build_edge_rule);
  return rules[static_cast<std::size_t>(degree)];
}

ElementQuadrature map_to_triangle(const Triangle& tri, int degree) {
  const auto& rule = triangle_rule(degree);
  const Point e1 = tri[1] - tri[0];
  const Point e2 = tri[2] - tri[0];
  const double jac = std::abs(e1.x() * e2.y() - e1.y() * e2.x());
  ElementQuadrature q;
  q.points.reserve(rule.size());
  q.weights.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    q.points.push_back(tri[0] + rule.points[i].x() * e1 + rule.points[i].y() * e2);
    q.weights.push_back(rule.weights[i] * jac);
  }
  return q;
}

ElementQuadrature element_quadrature(const Element& element, const Mesh& mesh, int degree) {
  ElementQuadrature q;
  for (const auto& tri : triangulate(element, mesh)) {
    auto piece = map_to_triangle(tri, degree);
    q.points.insert(q.points.end(), piece.points.begin(), piece.points.end());
    q.weights.insert(q.weights.end(), piece.weights.begin(), piece.weights.end());
  }
  return q;
}

EdgeQuadrature edge_quadrature(Index edge, const Mesh& mesh, int degree) {
  const auto& rule = edge_rule(degree);
  const double length = mesh.edge(edge).length;
  EdgeQuadrature q;
  q.points.reserve(rule.size());
  q.t.reserve(rule.size());
  q.weights.reserve(rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) {
    const double t = 0.5 * (rule.points[i].x() + 1.0);
    q.t.push_back(t);
    q.points.push_back(mesh.edge_point(edge, t));
    q.weights.push_back(0.5 * rule.weights[i] * length);
  }
  return q;
}

double integrate_element(const Element& element, const Mesh& mesh, const ScalarField& f, int degree) {
  const auto q = element_quadrature(element, mesh, degree);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) sum += q.weights[i] * f(q.points[i]);
  return sum;
}

double integrate_edge(Index edge, const Mesh& mesh, const ScalarField& f, int degree) {
  const auto q = edge_quadrature(edge, mesh, degree);
  double sum = 0.0;
  for (std::size_t i = 0; i < q.size(); ++i) sum += q.weights[i] * f(q.points[i]);
  return sum;
}

}  // namespace wgb
