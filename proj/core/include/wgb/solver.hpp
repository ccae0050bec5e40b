#pragma once

#include <optional>
#include <string_view>

#include <Eigen/Core>

#include "wgb/assembly.hpp"

namespace wgb {

enum class SolverMethod { automatic, cholesky, cg };

SolverMethod parse_solver_method(std::string_view name);
std::string_view to_string(SolverMethod method);

struct SolverOptions {
  SolverMethod method = SolverMethod::automatic;
  /// Relative residual target ||Ax - b|| / ||b||.
  double tolerance = 1e-10;
  /// automatic picks Cholesky up to this many unknowns, CG above.
  std::size_t cholesky_limit = 200000;
  /// 0 means 20 * n.
  std::size_t max_iterations = 0;
  /// CG gives up when the best residual has not improved for max(this, n) steps.
  std::size_t stagnation_window = 50;
  /// Record extreme Ritz values of the (Jacobi-preconditioned) CG Lanczos
  /// tridiagonal.
  bool track_ritz = false;
};

struct SolveReport {
  /// CG iterations, or iterative-refinement sweeps after a Cholesky solve.
  std::size_t iterations = 0;
  double relative_residual = 0.0;
  /// |b - A x|_inf / (|A|_inf |x|_inf + |b|_inf); Cholesky only.
  double backward_error = 0.0;
  SolverMethod method = SolverMethod::cholesky;
  std::optional<double> min_ritz;
  std::optional<double> max_ritz;
};

struct SolveResult {
  Eigen::VectorXd x;
  SolveReport report;
};

/// Solves A x = b for symmetric positive-definite A. Throws
/// std::invalid_argument for a non-symmetric A or non-finite b, and
/// NumericalError on a non-positive Cholesky pivot, non-positive CG
/// curvature, stagnation, or an unmet tolerance. A Cholesky solve counts as
/// converged when the relative residual meets the tolerance or the backward
/// error is at roundoff level (the residual floor of an ill-conditioned A).
SolveResult solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b, const SolverOptions& options = {});

}  // namespace wgb
