#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"
#include "wgb/weak_function.hpp"
#include "wgb/weak_hessian.hpp"

namespace wgb {

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// Field evaluated at a boundary point along a unit direction (the edge's
/// outward normal or tangent).
using DirectionalField = std::function<double(const Point& x, const Point& direction)>;

/// Dirichlet data of the clamped plate: trace xi, normal derivative nu, and
/// tangential derivative grad(xi).tau supplied analytically.
struct BoundaryData {
  ScalarField xi;
  DirectionalField nu;
  DirectionalField tangential;
};

/// Values of the prescribed DOFs (boundary-edge blocks), indexed by
/// DofMap::reduced_index. Per boundary edge: trace = Q_b xi and gradient
/// Cartesian blocks = Q_n(nu) n + Q_n(grad xi . tau) tau.
Eigen::VectorXd boundary_values(const Mesh& mesh, const DofMap& map, const BoundaryData& data, int quad_degree = -1);

/// Linear system over the free DOFs after eliminating prescribed ones.
struct GlobalSystem {
  SparseMatrix a;
  Eigen::VectorXd b;
  Eigen::VectorXd prescribed;
};

/// Scatters sum_T K_T and the interior loads, eliminating prescribed values:
/// b = F_free - A_fp g. Triplets are merged in element order, so repeated
/// runs are bitwise identical.
GlobalSystem assemble(const Mesh& mesh, const DofMap& map, const std::vector<LocalHessianOp>& ops, const ScalarField& f,
                      const Eigen::VectorXd& prescribed, int load_quad_degree = -1, unsigned threads = 0);

/// Full coefficient vector from free-DOF values and prescribed values.
WeakFunction expand_solution(const DofMap& map, const Eigen::VectorXd& free_values, const Eigen::VectorXd& prescribed);

/// Symmetry defect max|A - A^T| / max|A|.
double relative_asymmetry(const SparseMatrix& a);

}  // namespace wgb
