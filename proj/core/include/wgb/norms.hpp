#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"
#include "wgb/weak_function.hpp"
#include "wgb/weak_hessian.hpp"

namespace wgb {

using HessianField = std::function<Eigen::Matrix2d(const Point&)>;

/// Energy norm of the weak-Hessian bilinear form:
/// sqrt(sum_T sum_ij (D_ij v)^T M_r (D_ij v)).
double triple_bar_norm(const WeakFunction& v, const std::vector<LocalHessianOp>& ops);

/// Mesh-dependent H2 semi-norm
///   sum_T ||H(v_0)||_T^2 + hT^-3 ||v_0 - v_b||_dT^2 + hT^-1 ||grad v_0 - v_g||_dT^2.
/// `as_written` takes H = sum_ij d2_ij v_0 (one scalar); `frobenius` takes the
/// per-entry sum sum_ij ||d2_ij v_0||_T^2. Edge terms are identical.
struct DiscreteH2 {
  double as_written = 0.0;
  double frobenius = 0.0;
};

DiscreteH2 discrete_h2_norm(const WeakFunction& v, const Mesh& mesh, int quad_degree = -1);

/// ||u - u_h||_{2,h} for a smooth u with analytic Hessian. In the edge terms u
/// cancels, leaving u_b - u_0 and u_g - grad u_0.
DiscreteH2 discrete_h2_error(const HessianField& hessian, const WeakFunction& u_h, const Mesh& mesh,
                             int quad_degree = -1);

/// |||u - u_h||| computed as sum_T sum_ij ||Q_r(d2_ij u) - D_ij u_h||_T^2,
/// which needs no embedding of u.
double true_triple_bar_error(const HessianField& hessian, const WeakFunction& u_h,
                             const std::vector<LocalHessianOp>& ops, const Mesh& mesh, int quad_degree = -1);

/// sqrt(sum_T ||u - u_0||_T^2).
double l2_interior_error(const ScalarField& u, const WeakFunction& u_h, const Mesh& mesh, int quad_degree = -1);

struct ErrorTriple {
  /// |||u - u_h||| via the projected exact Hessian.
  double triple_bar = 0.0;
  /// |||Q_h u - u_h|||.
  double triple_bar_projected = 0.0;
  /// ||u - u_h||_{2,h}, first term as written (sum inside the norm).
  double discrete_h2 = 0.0;
  /// ||u - u_h||_{2,h}, first term per Hessian entry.
  double discrete_h2_frobenius = 0.0;
  double l2_interior = 0.0;
};

}  // namespace wgb
