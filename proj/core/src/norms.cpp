#include "wgb/norms.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "wgb/basis.hpp"

namespace wgb {

namespace {

int volume_degree(const SpaceDegrees& deg, int requested) {
  return requested >= 0 ? requested : std::min(std::max(2 * deg.k + 2, 24), kMaxQuadratureDegree);
}

DiscreteH2 discrete_h2_impl(const HessianField* hessian, const WeakFunction& v, const Mesh& mesh, int quad_degree) {
  const auto& map = v.dof_map();
  const auto& deg = map.degrees();
  const int vol_degree = volume_degree(deg, quad_degree);
  const int edge_degree = std::min(2 * deg.k + 2, kMaxQuadratureDegree);
  const EdgeBasis trace_basis(deg.p, 1.0);
  const EdgeBasis grad_basis(deg.q, 1.0);

  double written = 0.0;
  double frobenius = 0.0;
  for (Index el = 0; el < mesh.num_elements(); ++el) {
    const auto& element = mesh.element(el);
    const ElementBasis basis(element, mesh, deg.k);
    const Eigen::VectorXd v0 = v.interior(el);

    const auto quad = element_quadrature(element, mesh, vol_degree);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Point& x = quad.points[q];
      Eigen::Matrix2d h;
      h(0, 0) = basis.evaluate(v0, x, 2, 0);
      h(0, 1) = h(1, 0) = basis.evaluate(v0, x, 1, 1);
      h(1, 1) = basis.evaluate(v0, x, 0, 2);
      if (hessian) h = (*hessian)(x) - h;
      written += quad.weights[q] * h.sum() * h.sum();
      frobenius += quad.weights[q] * h.squaredNorm();
    }

    const double ht = element.diameter;
    double trace_term = 0.0;
    double grad_term = 0.0;
    for (Index e : element.edge_ids) {
      const auto eq = edge_quadrature(e, mesh, edge_degree);
      const Eigen::VectorXd vb = v.trace(e);
      const Eigen::VectorXd g0 = v.gradient(e, 0);
      const Eigen::VectorXd g1 = v.gradient(e, 1);
      for (std::size_t q = 0; q < eq.size(); ++q) {
        const Point& x = eq.points[q];
        const Eigen::VectorXd lp = trace_basis.values(eq.t[q]);
        const Eigen::VectorXd lq = grad_basis.values(eq.t[q]);
        const double jump = basis.evaluate(v0, x) - vb.dot(lp);
        const double gx = basis.evaluate(v0, x, 1, 0) - g0.dot(lq);
        const double gy = basis.evaluate(v0, x, 0, 1) - g1.dot(lq);
        trace_term += eq.weights[q] * jump * jump;
        grad_term += eq.weights[q] * (gx * gx + gy * gy);
      }
    }
    const double edges = trace_term / (ht * ht * ht) + grad_term / ht;
    written += edges;
    frobenius += edges;
  }
  return {std::sqrt(written), std::sqrt(frobenius)};
}

}  // namespace

double triple_bar_norm(const WeakFunction& v, const std::vector<LocalHessianOp>& ops) {
  double sum = 0.0;
  for (const auto& op : ops) {
    const Eigen::VectorXd local = v.local(op.element);
    for (const auto& d : op.d) {
      const Eigen::VectorXd w = d * local;
      sum += w.dot(op.mass * w);
    }
  }
  return std::sqrt(std::max(sum, 0.0));
}

DiscreteH2 discrete_h2_norm(const WeakFunction& v, const Mesh& mesh, int quad_degree) {
  return discrete_h2_impl(nullptr, v, mesh, quad_degree);
}

DiscreteH2 discrete_h2_error(const HessianField& hessian, const WeakFunction& u_h, const Mesh& mesh, int quad_degree) {
  return discrete_h2_impl(&hessian, u_h, mesh, quad_degree);
}

double true_triple_bar_error(const HessianField& hessian, const WeakFunction& u_h,
                             const std::vector<LocalHessianOp>& ops, const Mesh& mesh, int quad_degree) {
  double sum = 0.0;
  for (const auto& op : ops) {
    const auto& element = mesh.element(op.element);
    const int degree = quad_degree >= 0 ? quad_degree : std::min(std::max(2 * op.r + 2, op.r + 14), kMaxQuadratureDegree);
    const auto quad = element_quadrature(element, mesh, degree);
    const Eigen::MatrixXd phi = op.basis.tabulate(quad.points);
    std::array<Eigen::VectorXd, 4> rhs;
    for (auto& r : rhs) r = Eigen::VectorXd::Zero(phi.cols());
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const Eigen::Matrix2d h = hessian(quad.points[q]);
      const auto row = phi.row(static_cast<Eigen::Index>(q)).transpose();
      for (int i = 0; i < 2; ++i) {
        for (int j = 0; j < 2; ++j) rhs[static_cast<std::size_t>(2 * i + j)] += quad.weights[q] * h(i, j) * row;
      }
    }

    const Eigen::LLT<Eigen::MatrixXd> llt(op.mass);
    const auto weak = apply_local_hessian(op, mesh, u_h.dof_map().degrees(), u_h.local(op.element));
    for (std::size_t ij = 0; ij < 4; ++ij) {
      const Eigen::VectorXd diff = llt.solve(rhs[ij]) - weak[ij];
      sum += diff.dot(op.mass * diff);
    }
  }
  return std::sqrt(std::max(sum, 0.0));
}

double l2_interior_error(const ScalarField& u, const WeakFunction& u_h, const Mesh& mesh, int quad_degree) {
  const auto& deg = u_h.dof_map().degrees();
  const int degree = volume_degree(deg, quad_degree);
  double sum = 0.0;
  for (Index el = 0; el < mesh.num_elements(); ++el) {
    const auto& element = mesh.element(el);
    const ElementBasis basis(element, mesh, deg.k);
    const Eigen::VectorXd u0 = u_h.interior(el);
    const auto quad = element_quadrature(element, mesh, degree);
    for (std::size_t q = 0; q < quad.size(); ++q) {
      const double diff = u(quad.points[q]) - basis.evaluate(u0, quad.points[q]);
      sum += quad.weights[q] * diff * diff;
    }
  }
  return std::sqrt(sum);
}

}  // namespace wgb
