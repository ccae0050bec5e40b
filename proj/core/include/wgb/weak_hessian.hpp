#pragma once

#include <array>
#include <optional>
#include <vector>

#include <Eigen/Core>

#include "wgb/basis.hpp"
#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"
#include "wgb/weak_function.hpp"

namespace wgb {

/// Projection degree r of the discrete weak Hessian: N + k - 2 on convex
/// elements, 2N + k - 2 otherwise (N = number of edges).
int default_r(const Element& element, int k);

/// Either a fixed r for every element or the per-element default_r rule.
/// With `stabilize`, a non-overridden r is raised from default_r until the
/// local stiffness kernel is exactly the embedded P_1 (dimension 3). On
/// triangles the default rule alone leaves spurious kernel modes.
struct RPolicy {
  std::optional<int> override_r;
  bool stabilize = true;

  [[nodiscard]] int operator()(const Element& element, int k) const {
    return override_r ? *override_r : default_r(element, k);
  }
};

/// Number of eigenvalues of the Jacobi-scaled K_T below tol * largest.
int local_kernel_dimension(const Eigen::MatrixXd& stiffness, double tol = 1e-9);

/// Discrete weak second derivatives on one element. d(i, j) maps the
/// element-local weak DOF vector (layout of DofMap::local_dofs) to the
/// coefficients of the weak derivative in `basis`, a basis of P_r(T).
struct LocalHessianOp {
  Index element = 0;
  int r = 0;
  ElementBasis basis;
  /// Gram matrix of `basis`.
  Eigen::MatrixXd mass;
  /// Row-major over (i, j): 11, 12, 21, 22.
  std::array<Eigen::MatrixXd, 4> d;

  [[nodiscard]] const Eigen::MatrixXd& operator()(int i, int j) const { return d[static_cast<std::size_t>(2 * i + j)]; }
  [[nodiscard]] Eigen::Index local_size() const { return d[0].cols(); }
};

/// Assembles, for each (i, j), the pairing of local DOFs with every P_r basis
/// function phi:
///   (v_0, d2_ji phi)_T - <v_b n_i, d_j phi>_dT + <v_gi, phi n_j>_dT
/// and solves against the P_r Gram matrix. P_r is always orthonormalized, so
/// the result coefficients are L2 coefficients.
LocalHessianOp build_local_hessian(Index element, const Mesh& mesh, const SpaceDegrees& degrees, int r);

/// build_local_hessian for every element, element-parallel. Throws
/// NumericalError when stabilization runs out of quadrature degree.
std::vector<LocalHessianOp> build_local_hessians(const Mesh& mesh, const SpaceDegrees& degrees, const RPolicy& policy,
                                                 unsigned threads = 0);

/// Weak Hessian of one element-local DOF vector without forming d(i, j):
///   (d2_ij v_0, phi)_T + <(v_0 - v_b) n_i, d_j phi>_dT - <(d_i v_0 - v_gi) n_j, phi>_dT
/// Same as op(i, j) * local in exact arithmetic. The boundary residuals vanish
/// pointwise on smooth data, so this avoids the cancellation that the matrix
/// product suffers at large r. Ordered like LocalHessianOp::d.
std::array<Eigen::VectorXd, 4> apply_local_hessian(const LocalHessianOp& op, const Mesh& mesh,
                                                   const SpaceDegrees& degrees, const Eigen::VectorXd& local);

/// K_T = sum_ij D_ij^T M_r D_ij.
Eigen::MatrixXd local_stiffness(const LocalHessianOp& op);

/// (f, phi)_T for the interior P_k basis functions, zero on edge DOFs.
/// quad_degree = -1 uses max(2k + 2, 24) capped to the rule table.
Eigen::VectorXd local_load(Index element, const Mesh& mesh, const ScalarField& f, const SpaceDegrees& degrees,
                           int quad_degree = -1);

}  // namespace wgb
