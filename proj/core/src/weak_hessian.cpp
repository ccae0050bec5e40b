#include "wgb/weak_hessian.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "wgb/errors.hpp"
#include "wgb/parallel.hpp"

namespace wgb {

namespace {

int default_quad_degree(const SpaceDegrees& degrees) {
  return std::min(std::max(2 * degrees.k + 2, 24), kMaxQuadratureDegree);
}

Eigen::Map<const Eigen::VectorXd> as_vector(const std::vector<double>& v) {
  return {v.data(), static_cast<Eigen::Index>(v.size())};
}

std::optional<LocalHessianOp> try_build(Index el, const Mesh& mesh, const SpaceDegrees& deg, int r,
                                        Orthonormalization mode) {
  const auto& element = mesh.element(el);
  LocalHessianOp op{el, r, ElementBasis(element, mesh, r, mode), {}, {}};
  const ElementBasis interior(element, mesh, deg.k);

  const auto n_r = static_cast<Eigen::Index>(op.basis.size());
  const auto n_loc = static_cast<Eigen::Index>(deg.local_size(element.num_edges()));
  const auto n_k = static_cast<Eigen::Index>(deg.interior_size());

  // 2r + 2 >= k + r - 2 because r >= k - 2.
  const auto vol = element_quadrature(element, mesh, std::min(2 * r + 2, kMaxQuadratureDegree));
  const auto w = as_vector(vol.weights);
  const Eigen::MatrixXd phi = op.basis.tabulate(vol.points);
  op.mass = phi.transpose() * w.asDiagonal() * phi;
  op.mass = 0.5 * (op.mass + op.mass.transpose()).eval();

  Eigen::LLT<Eigen::MatrixXd> llt(op.mass);
  if (llt.info() != Eigen::Success) return std::nullopt;

  const Eigen::MatrixXd psi = interior.tabulate(vol.points);
  std::array<Eigen::MatrixXd, 4> rhs;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      auto& b = rhs[static_cast<std::size_t>(2 * i + j)];
      b = Eigen::MatrixXd::Zero(n_r, n_loc);
      // d2_ji phi == d2_ij phi for polynomials
      const Eigen::MatrixXd d2phi = op.basis.tabulate(vol.points, (i == 0) + (j == 0), (i == 1) + (j == 1));
      b.leftCols(n_k) = d2phi.transpose() * w.asDiagonal() * psi;
    }
  }

  const EdgeBasis trace_basis(deg.p, 1.0);
  const EdgeBasis grad_basis(deg.q, 1.0);
  const int edge_degree = std::min(r + deg.p + 1, kMaxQuadratureDegree);
  for (std::size_t l = 0; l < element.num_edges(); ++l) {
    const Index e = element.edge_ids[l];
    const Point n = mesh.edge(e).normal(el);
    const auto eq = edge_quadrature(e, mesh, edge_degree);
    const auto ew = as_vector(eq.weights);

    Eigen::MatrixXd trace_tab(static_cast<Eigen::Index>(eq.size()), static_cast<Eigen::Index>(trace_basis.size()));
    Eigen::MatrixXd grad_tab(static_cast<Eigen::Index>(eq.size()), static_cast<Eigen::Index>(grad_basis.size()));
    for (std::size_t qp = 0; qp < eq.size(); ++qp) {
      trace_tab.row(static_cast<Eigen::Index>(qp)) = trace_basis.values(eq.t[qp]);
      grad_tab.row(static_cast<Eigen::Index>(qp)) = grad_basis.values(eq.t[qp]);
    }
    const Eigen::MatrixXd phi_e = op.basis.tabulate(eq.points);
    const std::array<Eigen::MatrixXd, 2> dphi_e{op.basis.tabulate(eq.points, 1, 0), op.basis.tabulate(eq.points, 0, 1)};

    const auto trace_col = static_cast<Eigen::Index>(deg.local_trace_offset(l));
    const Eigen::MatrixXd phi_grad = phi_e.transpose() * ew.asDiagonal() * grad_tab;
    for (int i = 0; i < 2; ++i) {
      const auto grad_col = static_cast<Eigen::Index>(deg.local_gradient_offset(l, i));
      for (int j = 0; j < 2; ++j) {
        auto& b = rhs[static_cast<std::size_t>(2 * i + j)];
        b.middleCols(trace_col, trace_tab.cols()) -=
            n[i] * (dphi_e[static_cast<std::size_t>(j)].transpose() * ew.asDiagonal() * trace_tab);
        b.middleCols(grad_col, grad_tab.cols()) += n[j] * phi_grad;
      }
    }
  }

  for (std::size_t ij = 0; ij < 4; ++ij) op.d[ij] = llt.solve(rhs[ij]);
  return op;
}

}  // namespace

std::array<Eigen::VectorXd, 4> apply_local_hessian(const LocalHessianOp& op, const Mesh& mesh,
                                                   const SpaceDegrees& deg, const Eigen::VectorXd& local) {
  const auto& element = mesh.element(op.element);
  if (local.size() != static_cast<Eigen::Index>(deg.local_size(element.num_edges()))) {
    throw std::invalid_argument("apply_local_hessian: local vector has the wrong size");
  }
  const int r = op.r;
  const ElementBasis interior(element, mesh, deg.k);
  const Eigen::VectorXd v0 = local.head(static_cast<Eigen::Index>(deg.interior_size()));

  std::array<Eigen::VectorXd, 4> rhs;
  const auto vol = element_quadrature(element, mesh, std::min(2 * r + 2, kMaxQuadratureDegree));
  const auto w = as_vector(vol.weights);
  const Eigen::MatrixXd phi = op.basis.tabulate(vol.points);
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      const Eigen::VectorXd d2v = interior.tabulate(vol.points, (i == 0) + (j == 0), (i == 1) + (j == 1)) * v0;
      rhs[static_cast<std::size_t>(2 * i + j)] = phi.transpose() * w.asDiagonal() * d2v;
    }
  }

  const int edge_degree = std::min(r + std::max(deg.k, deg.p) + 1, kMaxQuadratureDegree);
  for (std::size_t l = 0; l < element.num_edges(); ++l) {
    const Index e = element.edge_ids[l];
    const Point n = mesh.edge(e).normal(op.element);
    const auto eq = edge_quadrature(e, mesh, edge_degree);
    const auto ew = as_vector(eq.weights);
    const auto np = static_cast<Eigen::Index>(eq.size());

    const Eigen::VectorXd trace = local.segment(static_cast<Eigen::Index>(deg.local_trace_offset(l)), deg.p + 1);
    Eigen::VectorXd jump(np);
    std::array<Eigen::VectorXd, 2> grad_jump{Eigen::VectorXd(np), Eigen::VectorXd(np)};
    const std::array<Eigen::MatrixXd, 2> dv_tab{interior.tabulate(eq.points, 1, 0), interior.tabulate(eq.points, 0, 1)};
    const Eigen::VectorXd v0_e = interior.tabulate(eq.points) * v0;
    for (Eigen::Index q = 0; q < np; ++q) {
      const double t = eq.t[static_cast<std::size_t>(q)];
      jump[q] = v0_e[q] - evaluate_edge(trace, t);
      for (int i = 0; i < 2; ++i) {
        const Eigen::VectorXd g =
            local.segment(static_cast<Eigen::Index>(deg.local_gradient_offset(l, i)), deg.q + 1);
        grad_jump[static_cast<std::size_t>(i)][q] = dv_tab[static_cast<std::size_t>(i)].row(q).dot(v0) - evaluate_edge(g, t);
      }
    }
    const Eigen::MatrixXd phi_e = op.basis.tabulate(eq.points);
    const std::array<Eigen::MatrixXd, 2> dphi_e{op.basis.tabulate(eq.points, 1, 0), op.basis.tabulate(eq.points, 0, 1)};
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) {
        auto& b = rhs[static_cast<std::size_t>(2 * i + j)];
        b += n[i] * (dphi_e[static_cast<std::size_t>(j)].transpose() * ew.asDiagonal() * jump);
        b -= n[j] * (phi_e.transpose() * ew.asDiagonal() * grad_jump[static_cast<std::size_t>(i)]);
      }
    }
  }
  const Eigen::LLT<Eigen::MatrixXd> llt(op.mass);
  for (auto& b : rhs) b = llt.solve(b).eval();
  return rhs;
}

int default_r(const Element& element, int k) {
  if (k < 1) throw std::invalid_argument("default_r: k must be >= 1");
  const int n = static_cast<int>(element.num_edges());
  return element.is_convex ? n + k - 2 : 2 * n + k - 2;
}

LocalHessianOp build_local_hessian(Index element, const Mesh& mesh, const SpaceDegrees& degrees, int r) {
  degrees.validate();
  if (r < degrees.k - 2 || r < 0) {
    throw std::invalid_argument("weak Hessian degree r=" + std::to_string(r) + " must be >= k - 2");
  }
  if (2 * r + 2 > kMaxQuadratureDegree) {
    throw std::invalid_argument("weak Hessian degree r=" + std::to_string(r) + " exceeds the quadrature table");
  }
  if (auto op = try_build(element, mesh, degrees, r, Orthonormalization::always)) return std::move(*op);
  throw NumericalError("weak Hessian: P_r Gram matrix of element " + std::to_string(element) +
                       " is not positive definite");
}

int local_kernel_dimension(const Eigen::MatrixXd& stiffness, double tol) {
  const Eigen::VectorXd d = stiffness.diagonal().cwiseAbs().cwiseMax(1e-300).cwiseSqrt().cwiseInverse();
  const Eigen::MatrixXd scaled = d.asDiagonal() * stiffness * d.asDiagonal();
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(scaled, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double cut = tol * ev.cwiseAbs().maxCoeff();
  return static_cast<int>((ev.array().abs() <= cut).count());
}

std::vector<LocalHessianOp> build_local_hessians(const Mesh& mesh, const SpaceDegrees& degrees, const RPolicy& policy,
                                                 unsigned threads) {
  std::vector<std::optional<LocalHessianOp>> slots(mesh.num_elements());
  parallel_for(
      mesh.num_elements(),
      [&](std::size_t el) {
        int r = policy(mesh.element(el), degrees.k);
        auto op = build_local_hessian(el, mesh, degrees, r);
        if (policy.stabilize && !policy.override_r) {
          while (local_kernel_dimension(local_stiffness(op)) > 3) {
            if (2 * (r + 1) + 2 > kMaxQuadratureDegree) {
              throw NumericalError("weak Hessian: element " + std::to_string(el) +
                                   " keeps a spurious kernel up to the largest supported r");
            }
            op = build_local_hessian(el, mesh, degrees, ++r);
          }
        }
        slots[el] = std::move(op);
      },
      threads);
  std::vector<LocalHessianOp> ops;
  ops.reserve(slots.size());
  for (auto& s : slots) ops.push_back(std::move(*s));
  return ops;
}

Eigen::MatrixXd local_stiffness(const LocalHessianOp& op) {
  Eigen::MatrixXd k = Eigen::MatrixXd::Zero(op.local_size(), op.local_size());
  for (const auto& d : op.d) k.noalias() += d.transpose() * op.mass * d;
  return 0.5 * (k + k.transpose());
}

Eigen::VectorXd local_load(Index element, const Mesh& mesh, const ScalarField& f, const SpaceDegrees& degrees,
                           int quad_degree) {
  const auto& el = mesh.element(element);
  const ElementBasis basis(el, mesh, degrees.k);
  const auto quad = element_quadrature(el, mesh, quad_degree >= 0 ? quad_degree : default_quad_degree(degrees));
  Eigen::VectorXd wf(static_cast<Eigen::Index>(quad.size()));
  for (std::size_t q = 0; q < quad.size(); ++q) wf[static_cast<Eigen::Index>(q)] = quad.weights[q] * f(quad.points[q]);

  Eigen::VectorXd load = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(degrees.local_size(el.num_edges())));
  load.head(static_cast<Eigen::Index>(degrees.interior_size())) = basis.tabulate(quad.points).transpose() * wf;
  return load;
}

}  // namespace wgb
