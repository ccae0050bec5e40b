#include "wgb/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include "wgb/errors.hpp"

namespace wgb {

namespace {

constexpr double kSymmetryTolerance = 1e-12;
constexpr int kMaxRefinementSweeps = 5;
// a few ulps times a modest growth factor
constexpr double kBackwardTolerance = 1e-13;

std::string fmt_g(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

SolveResult solve_cholesky(const SparseMatrix& a, const Eigen::VectorXd& b, const SolverOptions& options) {
  const Eigen::SparseMatrix<double> col_major = a;
  Eigen::SimplicialLLT<Eigen::SparseMatrix<double>, Eigen::Lower, Eigen::AMDOrdering<int>> llt(col_major);
  if (llt.info() != Eigen::Success) {
    throw NumericalError("Cholesky factorization hit a non-positive pivot; matrix is not positive definite");
  }

  SolveResult result;
  result.report.method = SolverMethod::cholesky;
  result.x = llt.solve(b);
  const double b_norm = b.norm();
  double a_norm = 0.0;
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    double row = 0.0;
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) row += std::abs(it.value());
    a_norm = std::max(a_norm, row);
  }
  auto measure = [&](const Eigen::VectorXd& r) {
    result.report.relative_residual = r.norm() / b_norm;
    result.report.backward_error =
        r.lpNorm<Eigen::Infinity>() / (a_norm * result.x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>());
  };
  Eigen::VectorXd r = b - a * result.x;
  measure(r);
  while (result.report.relative_residual > options.tolerance && result.report.backward_error > kBackwardTolerance &&
         result.report.iterations < static_cast<std::size_t>(kMaxRefinementSweeps)) {
    result.x += llt.solve(r);
    r = b - a * result.x;
    measure(r);
    ++result.report.iterations;
  }
  if (!(result.report.relative_residual <= options.tolerance) && !(result.report.backward_error <= kBackwardTolerance)) {
    throw NumericalError("Cholesky solve residual " + fmt_g(result.report.relative_residual) + " (backward error " +
                         fmt_g(result.report.backward_error) + ") above tolerance after iterative refinement");
  }
  return result;
}

// Extreme eigenvalues of the Lanczos tridiagonal implied by PCG coefficients.
void ritz_values(const std::vector<double>& alpha, const std::vector<double>& beta, SolveReport& report) {
  const auto m = static_cast<Eigen::Index>(alpha.size());
  if (m == 0) return;
  Eigen::VectorXd diag(m);
  Eigen::VectorXd off(std::max<Eigen::Index>(m - 1, 0));
  for (Eigen::Index j = 0; j < m; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    diag[j] = 1.0 / alpha[uj] + (j > 0 ? beta[uj - 1] / alpha[uj - 1] : 0.0);
    if (j + 1 < m) off[j] = std::sqrt(beta[uj]) / alpha[uj];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig;
  eig.computeFromTridiagonal(diag, off, Eigen::EigenvaluesOnly);
  report.min_ritz = eig.eigenvalues().minCoeff();
  report.max_ritz = eig.eigenvalues().maxCoeff();
}

SolveResult solve_cg(const SparseMatrix& a, const Eigen::VectorXd& b, const SolverOptions& options) {
  const auto n = a.rows();
  Eigen::VectorXd inv_diag = a.diagonal();
  for (Eigen::Index i = 0; i < n; ++i) {
    if (!(inv_diag[i] > 0)) throw NumericalError("CG: non-positive diagonal entry; matrix is not positive definite");
    inv_diag[i] = 1.0 / inv_diag[i];
  }

  SolveResult result;
  result.report.method = SolverMethod::cg;
  result.x = Eigen::VectorXd::Zero(n);
  const double b_norm = b.norm();
  const std::size_t max_iter = options.max_iterations > 0 ? options.max_iterations : static_cast<std::size_t>(20 * n);

  Eigen::VectorXd r = b;
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  Eigen::VectorXd ap(n);
  double rz = r.dot(z);
  double best = r.norm();
  std::size_t since_best = 0;
  // the residual 2-norm can plateau above |b| for O(n) steps on these systems
  const std::size_t window = std::max(options.stagnation_window, static_cast<std::size_t>(n));
  std::vector<double> alphas;
  std::vector<double> betas;

  std::size_t it = 0;
  double rel = best / b_norm;
  while (rel > options.tolerance) {
    if (it >= max_iter) {
      throw NumericalError("CG: no convergence within " + std::to_string(max_iter) + " iterations (residual " +
                           fmt_g(rel) + ")");
    }
    ap.noalias() = a * p;
    const double curvature = p.dot(ap);
    if (!(curvature > 0)) throw NumericalError("CG: non-positive curvature; matrix is not positive definite");
    const double alpha = rz / curvature;
    result.x += alpha * p;
    r -= alpha * ap;
    z = inv_diag.cwiseProduct(r);
    const double rz_next = r.dot(z);
    const double beta = rz_next / rz;
    p = z + beta * p;
    rz = rz_next;
    ++it;
    if (options.track_ritz) {
      alphas.push_back(alpha);
      betas.push_back(beta);
    }

    const double r_norm = r.norm();
    rel = r_norm / b_norm;
    if (r_norm < best) {
      best = r_norm;
      since_best = 0;
    } else if (++since_best >= window) {
      throw NumericalError("CG stagnated: no residual decrease over " + std::to_string(window) +
                           " iterations (residual " + fmt_g(rel) + ")");
    }
  }

  result.report.iterations = it;
  result.report.relative_residual = (b - a * result.x).norm() / b_norm;
  if (options.track_ritz) ritz_values(alphas, betas, result.report);
  return result;
}

}  // namespace

SolverMethod parse_solver_method(std::string_view name) {
  if (name == "auto" || name == "automatic") return SolverMethod::automatic;
  if (name == "cholesky") return SolverMethod::cholesky;
  if (name == "cg" || name == "cg_jacobi") return SolverMethod::cg;
  throw std::invalid_argument("unknown solver '" + std::string(name) + "'");
}

std::string_view to_string(SolverMethod method) {
  switch (method) {
    case SolverMethod::automatic: return "auto";
    case SolverMethod::cholesky: return "cholesky";
    case SolverMethod::cg: return "cg_jacobi";
  }
  return "unknown";
}

SolveResult solve_spd(const SparseMatrix& a, const Eigen::VectorXd& b, const SolverOptions& options) {
  if (a.rows() != a.cols() || a.rows() != b.size()) throw std::invalid_argument("solve_spd: dimension mismatch");
  if (!b.allFinite()) throw std::invalid_argument("solve_spd: right-hand side is not finite");
  const double asym = relative_asymmetry(a);
  if (asym > kSymmetryTolerance) {
    throw std::invalid_argument("solve_spd: matrix is not symmetric (relative defect " + fmt_g(asym) + ")");
  }

  SolverMethod method = options.method;
  if (method == SolverMethod::automatic) {
    method = static_cast<std::size_t>(a.rows()) <= options.cholesky_limit ? SolverMethod::cholesky : SolverMethod::cg;
  }

  if (b.squaredNorm() == 0.0) {
    SolveResult zero{Eigen::VectorXd::Zero(b.size()), {}};
    zero.report.method = method;
    return zero;
  }
  return method == SolverMethod::cholesky ? solve_cholesky(a, b, options) : solve_cg(a, b, options);
}

}  // namespace wgb
