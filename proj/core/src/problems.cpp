#include "wgb/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wgb {

namespace {

using std::numbers::pi;

ManufacturedProblem zero_problem() {
  return {"zero",
          "u = 0",
          [](const Point&) { return 0.0; },
          [](const Point&) { return Eigen::Vector2d::Zero().eval(); },
          [](const Point&) { return Eigen::Matrix2d::Zero().eval(); },
          [](const Point&) { return 0.0; },
          0};
}

ManufacturedProblem poly2() {
  return {"poly2",
          "u = x^2 + xy + y^2",
          [](const Point& p) { return p.x() * p.x() + p.x() * p.y() + p.y() * p.y(); },
          [](const Point& p) { return Eigen::Vector2d(2 * p.x() + p.y(), p.x() + 2 * p.y()); },
          [](const Point&) { return (Eigen::Matrix2d() << 2, 1, 1, 2).finished(); },
          [](const Point&) { return 0.0; },
          2};
}

ManufacturedProblem poly4() {
  return {"poly4",
          "u = x^4 + y^4",
          [](const Point& p) { return std::pow(p.x(), 4) + std::pow(p.y(), 4); },
          [](const Point& p) { return Eigen::Vector2d(4 * std::pow(p.x(), 3), 4 * std::pow(p.y(), 3)); },
          [](const Point& p) { return (Eigen::Matrix2d() << 12 * p.x() * p.x(), 0, 0, 12 * p.y() * p.y()).finished(); },
          [](const Point&) { return 48.0; },
          4};
}

ManufacturedProblem sinsin() {
  return {"sinsin",
          "u = sin(pi x) sin(pi y)",
          [](const Point& p) { return std::sin(pi * p.x()) * std::sin(pi * p.y()); },
          [](const Point& p) {
            return Eigen::Vector2d(pi * std::cos(pi * p.x()) * std::sin(pi * p.y()),
                                   pi * std::sin(pi * p.x()) * std::cos(pi * p.y()));
          },
          [](const Point& p) {
            const double sx = std::sin(pi * p.x());
            const double sy = std::sin(pi * p.y());
            const double cx = std::cos(pi * p.x());
            const double cy = std::cos(pi * p.y());
            return (Eigen::Matrix2d() << -pi * pi * sx * sy, pi * pi * cx * cy, pi * pi * cx * cy, -pi * pi * sx * sy)
                .finished();
          },
          [](const Point& p) { return 4 * std::pow(pi, 4) * std::sin(pi * p.x()) * std::sin(pi * p.y()); },
          std::nullopt};
}

// g(s) = s^2 (1 - s)^2 and its derivatives
double g0(double s) { return s * s * (1 - s) * (1 - s); }
double g1(double s) { return 2 * s * (1 - s) * (1 - 2 * s); }
double g2(double s) { return 2 - 12 * s + 12 * s * s; }
constexpr double g4 = 24.0;

ManufacturedProblem clamped() {
  return {"clamped",
          "u = x^2 (1-x)^2 y^2 (1-y)^2",
          [](const Point& p) { return g0(p.x()) * g0(p.y()); },
          [](const Point& p) { return Eigen::Vector2d(g1(p.x()) * g0(p.y()), g0(p.x()) * g1(p.y())); },
          [](const Point& p) {
            const double xy = g1(p.x()) * g1(p.y());
            return (Eigen::Matrix2d() << g2(p.x()) * g0(p.y()), xy, xy, g0(p.x()) * g2(p.y())).finished();
          },
          [](const Point& p) { return g4 * g0(p.y()) + 2 * g2(p.x()) * g2(p.y()) + g0(p.x()) * g4; },
          8};
}

}  // namespace

BoundaryData ManufacturedProblem::boundary() const {
  return {u, [g = grad](const Point& x, const Point& n) { return g(x).dot(n); },
          [g = grad](const Point& x, const Point& tau) { return g(x).dot(tau); }};
}

bool ManufacturedProblem::reproduced_by(const SpaceDegrees& degrees) const {
  if (!polynomial_degree) return false;
  const int d = *polynomial_degree;
  return d <= degrees.k && d <= degrees.p && d - 1 <= degrees.q;
}

const std::vector<ManufacturedProblem>& registry() {
  static const std::vector<ManufacturedProblem> problems{zero_problem(), poly2(), poly4(), sinsin(), clamped()};
  return problems;
}

const ManufacturedProblem& find_problem(std::string_view name) {
  for (const auto& p : registry()) {
    if (p.name == name) return p;
  }
  throw std::invalid_argument("unknown problem '" + std::string(name) + "'");
}

}  // namespace wgb
