#include <cmath>
#include <numbers>

#include "doctest.h"
#include "support.hpp"
#include <Eigen/Cholesky>

#include "wgb/basis.hpp"
#include "wgb/weak_hessian.hpp"

using namespace wgb;
using std::numbers::pi;
using wgbtest::rel_err;

namespace {

struct Poly {
  ScalarField u;
  GradientField grad;
  std::function<Eigen::Matrix2d(const Point&)> hess;
};

// c0 + c1 x + ... with every monomial up to degree 3
Poly random_cubic(int degree) {
  std::array<double, 10> c{};
  for (int i = 0; i < 10; ++i) c[static_cast<std::size_t>(i)] = wgbtest::uniform(-1, 1);
  if (degree < 3) c[6] = c[7] = c[8] = c[9] = 0;
  if (degree < 2) c[3] = c[4] = c[5] = 0;
  return {[c](const Point& p) {
            const double x = p.x(), y = p.y();
            return c[0] + c[1] * x + c[2] * y + c[3] * x * x + c[4] * x * y + c[5] * y * y + c[6] * x * x * x +
                   c[7] * x * x * y + c[8] * x * y * y + c[9] * y * y * y;
          },
          [c](const Point& p) {
            const double x = p.x(), y = p.y();
            return Eigen::Vector2d(c[1] + 2 * c[3] * x + c[4] * y + 3 * c[6] * x * x + 2 * c[7] * x * y + c[8] * y * y,
                                   c[2] + c[4] * x + 2 * c[5] * y + c[7] * x * x + 2 * c[8] * x * y + 3 * c[9] * y * y);
          },
          [c](const Point& p) {
            const double x = p.x(), y = p.y();
            const double xx = 2 * c[3] + 6 * c[6] * x + 2 * c[7] * y;
            const double xy = c[4] + 2 * c[7] * x + 2 * c[8] * y;
            const double yy = 2 * c[5] + 2 * c[8] * x + 6 * c[9] * y;
            return (Eigen::Matrix2d() << xx, xy, xy, yy).finished();
          }};
}

std::vector<Mesh> sample_meshes() {
  return {generate_mesh(MeshFamily::quad, 2, 2), generate_mesh(MeshFamily::nonconvex_L, 2, 2),
          generate_mesh(MeshFamily::triangle, 2, 2), wgbtest::single_l_hexagon()};
}

}  // namespace

TEST_CASE("default_r examples") {
  const auto quad = generate_mesh(MeshFamily::quad, 1, 1);
  CHECK(default_r(quad.element(0), 2) == 4);
  const auto hex = wgbtest::single_l_hexagon();
  CHECK(default_r(hex.element(0), 2) == 12);
  const auto tri = generate_mesh(MeshFamily::triangle, 1, 1);
  CHECK(default_r(tri.element(0), 3) == 4);
  CHECK_THROWS(default_r(tri.element(0), 0));
}

TEST_CASE("build_local_hessian argument checks") {
  const auto sq = wgbtest::single_square();
  CHECK_THROWS(build_local_hessian(0, sq, {3, 3, 2}, 0));
  CHECK_THROWS(build_local_hessian(0, sq, {2, 2, 1}, 20));
  CHECK_THROWS(build_local_hessian(0, sq, {2, 3, 1}, 4));
  CHECK_THROWS(build_local_hessian(0, sq, {2, 2, 0}, 4));
  const auto op = build_local_hessian(0, sq, {2, 2, 1}, 4);
  for (const auto& d : op.d) {
    CHECK(d.rows() == static_cast<Eigen::Index>(polynomial_dimension(4)));
    CHECK(d.cols() == 6 + 4 * 7);
  }
}

TEST_CASE("weak Hessian of embedded polynomials") {
  const SpaceDegrees deg{2, 2, 1};
  for (const auto& mesh : sample_meshes()) {
    const DofMap map(mesh, deg);
    const auto x2 = project_weak([](const Point& p) { return p.x() * p.x(); },
                                 [](const Point& p) { return Eigen::Vector2d(2 * p.x(), 0); }, mesh, map);
    const auto lin = project_weak([](const Point& p) { return 3 - p.x() + 2 * p.y(); },
                                  [](const Point&) { return Eigen::Vector2d(-1, 2); }, mesh, map);
    for (Index el = 0; el < mesh.num_elements(); ++el) {
      const auto op = build_local_hessian(el, mesh, deg, default_r(mesh.element(el), deg.k));
      const Eigen::VectorXd v = x2.local(el);
      for (int t = 0; t < 3; ++t) {
        const Point p = wgbtest::interior_point(mesh.element(el), mesh);
        CHECK(rel_err(op.basis.evaluate(op(0, 0) * v, p), 2.0) <= 1e-10);
        CHECK(std::abs(op.basis.evaluate(op(0, 1) * v, p)) <= 1e-10);
        CHECK(std::abs(op.basis.evaluate(op(1, 0) * v, p)) <= 1e-10);
        CHECK(std::abs(op.basis.evaluate(op(1, 1) * v, p)) <= 1e-10);
      }
      const Eigen::VectorXd w = lin.local(el);
      for (const auto& d : op.d) CHECK((d * w).norm() <= 1e-10 * w.norm());

      // v^T K v = |2|^2 area
      const auto k = local_stiffness(op);
      CHECK(rel_err(v.dot(k * v), 4 * mesh.element(el).area()) <= 1e-10);
    }
  }
}

TEST_CASE("single edge trace on the unit square") {
  const auto sq = wgbtest::single_square();
  const SpaceDegrees deg{2, 2, 1};
  const DofMap map(sq, deg);
  const auto op = build_local_hessian(0, sq, deg, 4);
  const Index e = sq.element(0).edge_ids[0];
  WeakFunction v(map);
  v.trace(e)[0] = 1.0;
  const Eigen::VectorXd local = v.local(0);

  // b_phi = -<n_i, d_j phi>_e by Gauss-Legendre on the edge
  std::vector<double> nodes, weights;
  gauss_legendre(8, nodes, weights);
  const Point a = sq.vertex(sq.edge(e).vertex_ids[0]);
  const Point b = sq.vertex(sq.edge(e).vertex_ids[1]);
  const Point n = sq.edge(e).normal(0);
  const double len = (b - a).norm();
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(op.basis.size()));
      for (std::size_t q = 0; q < nodes.size(); ++q) {
        const Point x = a + 0.5 * (nodes[q] + 1) * (b - a);
        rhs -= 0.5 * len * weights[q] * n[i] * op.basis.gradient(x, j);
      }
      const Eigen::VectorXd want = op.mass.ldlt().solve(rhs);
      CHECK((op(i, j) * local - want).norm() <= 1e-12 * std::max(1.0, want.norm()));
    }
  }
}

TEST_CASE("defining relation holds against every basis function") {
  for (const SpaceDegrees deg : {SpaceDegrees{2, 2, 1}, SpaceDegrees{3, 2, 2}, SpaceDegrees{3, 3, 1}}) {
    for (const auto& mesh : sample_meshes()) {
      for (Index el = 0; el < std::min<std::size_t>(mesh.num_elements(), 2); ++el) {
        const auto& element = mesh.element(el);
        const auto op = build_local_hessian(el, mesh, deg, default_r(element, deg.k));
        Eigen::VectorXd v(op.local_size());
        for (Eigen::Index i = 0; i < v.size(); ++i) v[i] = wgbtest::uniform(-1, 1);

        const ElementBasis interior(element, mesh, deg.k);
        const Eigen::VectorXd v0 = v.head(static_cast<Eigen::Index>(deg.interior_size()));
        const auto vol = element_quadrature(element, mesh, kMaxQuadratureDegree);
        for (int i = 0; i < 2; ++i) {
          for (int j = 0; j < 2; ++j) {
            // pointwise evaluation of (v0, d2 phi) - <v_b n_i, d_j phi> + <v_gi, phi n_j>
            Eigen::VectorXd rhs = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(op.basis.size()));
            for (std::size_t q = 0; q < vol.size(); ++q) {
              rhs += vol.weights[q] * interior.evaluate(v0, vol.points[q]) * op.basis.hessian(vol.points[q], j, i);
            }
            for (std::size_t l = 0; l < element.num_edges(); ++l) {
              const Index e = element.edge_ids[l];
              const Point n = mesh.edge(e).normal(el);
              const Eigen::VectorXd vb =
                  v.segment(static_cast<Eigen::Index>(deg.local_trace_offset(l)), static_cast<Eigen::Index>(deg.trace_size()));
              const Eigen::VectorXd vg = v.segment(static_cast<Eigen::Index>(deg.local_gradient_offset(l, i)),
                                                   static_cast<Eigen::Index>(deg.gradient_size()));
              const auto eq = edge_quadrature(e, mesh, kMaxQuadratureDegree);
              for (std::size_t q = 0; q < eq.size(); ++q) {
                const Point& x = eq.points[q];
                rhs -= eq.weights[q] * evaluate_edge(vb, eq.t[q]) * n[i] * op.basis.gradient(x, j);
                rhs += eq.weights[q] * evaluate_edge(vg, eq.t[q]) * n[j] * op.basis.values(x);
              }
            }
            const Eigen::VectorXd lhs = op.mass * (op(i, j) * v);
            CHECK((lhs - rhs).lpNorm<Eigen::Infinity>() <= 1e-11 * std::max(1.0, rhs.lpNorm<Eigen::Infinity>()));
          }
        }
      }
    }
  }
}

TEST_CASE("weak Hessian commutes with projection for polynomials") {
  for (const SpaceDegrees deg : {SpaceDegrees{2, 2, 1}, SpaceDegrees{3, 3, 2}}) {
    for (const auto& mesh : sample_meshes()) {
      const DofMap map(mesh, deg);
      const auto ops = build_local_hessians(mesh, deg, RPolicy{});
      for (int trial = 0; trial < 4; ++trial) {
        const auto poly = random_cubic(deg.k);
        const auto v = project_weak(poly.u, poly.grad, mesh, map);
        for (Index el = 0; el < mesh.num_elements(); ++el) {
          const auto& op = ops[el];
          const auto quad = element_quadrature(mesh.element(el), mesh, std::min(2 * op.r + 2, kMaxQuadratureDegree));
          const Eigen::VectorXd local = v.local(el);
          const auto applied = apply_local_hessian(op, mesh, deg, local);
          for (int i = 0; i < 2; ++i) {
            for (int j = 0; j < 2; ++j) {
              const Eigen::VectorXd want =
                  project_element([&](const Point& p) { return poly.hess(p)(i, j); }, op.basis, quad);
              const Eigen::VectorXd& got = applied[static_cast<std::size_t>(2 * i + j)];
              CHECK((got - want).lpNorm<Eigen::Infinity>() <= 1e-10 * std::max(1.0, want.lpNorm<Eigen::Infinity>()));
              // the dense product cancels large terms; bound by |D| |v|
              const double scale = op(i, j).cwiseAbs().rowwise().sum().maxCoeff() * local.lpNorm<Eigen::Infinity>();
              CHECK((op(i, j) * local - got).lpNorm<Eigen::Infinity>() <= 1e-12 * scale);
            }
          }
        }
      }
    }
  }
}

TEST_CASE("local stiffness kernel and r stabilization") {
  const SpaceDegrees deg{2, 2, 1};
  const auto quad = generate_mesh(MeshFamily::quad, 1, 1);
  const auto kq = local_stiffness(build_local_hessian(0, quad, deg, default_r(quad.element(0), 2)));
  CHECK((kq - kq.transpose()).norm() == 0.0);
  CHECK(local_kernel_dimension(kq) == 3);

  const auto hex = wgbtest::single_l_hexagon();
  CHECK(local_kernel_dimension(local_stiffness(build_local_hessian(0, hex, deg, 12))) == 3);

  // on triangles the default rule leaves extra kernel modes
  const auto tri = generate_mesh(MeshFamily::triangle, 1, 1);
  const int r0 = default_r(tri.element(0), 2);
  CHECK(local_kernel_dimension(local_stiffness(build_local_hessian(0, tri, deg, r0))) > 3);
  const auto stabilized = build_local_hessians(tri, deg, RPolicy{});
  CHECK(stabilized[0].r > r0);
  CHECK(local_kernel_dimension(local_stiffness(stabilized[0])) == 3);
  RPolicy fixed;
  fixed.stabilize = false;
  CHECK(build_local_hessians(tri, deg, fixed)[0].r == r0);
  RPolicy forced;
  forced.override_r = 2;
  CHECK(build_local_hessians(tri, deg, forced)[0].r == 2);
}

TEST_CASE("local load examples") {
  const auto sq = wgbtest::single_square();
  const SpaceDegrees deg{2, 2, 1};
  const auto zero = local_load(0, sq, [](const Point&) { return 0.0; }, deg);
  CHECK(zero.size() == 6 + 4 * 7);
  CHECK(zero.norm() == 0.0);

  const auto hex = wgbtest::single_l_hexagon();
  const auto one = local_load(0, hex, [](const Point&) { return 1.0; }, deg);
  CHECK(rel_err(one[0], 0.75) <= 1e-14);
  CHECK(one.tail(one.size() - 6).norm() == 0.0);

  const auto s = local_load(
      0, sq, [](const Point& p) { return 4 * std::pow(pi, 4) * std::sin(pi * p.x()) * std::sin(pi * p.y()); }, deg);
  CHECK(rel_err(s[0], 16 * pi * pi) <= 1e-12);
}
