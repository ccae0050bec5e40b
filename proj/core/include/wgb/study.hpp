#pragma once

#include <iosfwd>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "wgb/mesh.hpp"
#include "wgb/norms.hpp"
#include "wgb/problems.hpp"
#include "wgb/solver.hpp"
#include "wgb/weak_function.hpp"
#include "wgb/weak_hessian.hpp"

namespace wgb {

struct RunConfig {
  SpaceDegrees degrees;
  RPolicy r_policy;
  SolverOptions solver;
  /// Worker threads for element-parallel stages; 0 = hardware concurrency.
  unsigned threads = 0;
};

/// Outcome of one discretize-assemble-solve-measure pass.
struct CaseResult {
  std::shared_ptr<const Mesh> mesh;
  std::shared_ptr<const DofMap> dofs;
  std::vector<LocalHessianOp> ops;
  Eigen::VectorXd coefficients;
  ErrorTriple errors;
  SolveReport solve;
  double seconds = 0.0;

  [[nodiscard]] WeakFunction solution() const { return {*dofs, coefficients}; }
};

CaseResult run_case(const ManufacturedProblem& problem, std::shared_ptr<const Mesh> mesh, const RunConfig& config);
CaseResult run_case(const ManufacturedProblem& problem, const Mesh& mesh, const RunConfig& config);

struct ConvergenceRow {
  int level = 0;
  double h = 0.0;
  std::size_t dofs = 0;
  double e_tb = 0.0;
  double e_h2 = 0.0;
  double e_l2 = 0.0;
  /// log2(e(h) / e(h/2)) against the previous row; empty on the first row or
  /// when the problem is reproduced exactly.
  std::optional<double> rate_tb;
  std::optional<double> rate_h2;
  std::optional<double> rate_l2;
  std::size_t iterations = 0;
  double seconds = 0.0;
};

struct ConvergenceReport {
  std::string problem;
  MeshFamily family = MeshFamily::quad;
  SpaceDegrees degrees;
  std::vector<ConvergenceRow> rows;
};

/// Runs `levels` meshes with nx = ny = base_n * 2^l and fills observed rates.
ConvergenceReport convergence_study(const ManufacturedProblem& problem, MeshFamily family, int levels,
                                    const RunConfig& config, int base_n = 4);

/// Rate thresholds on the finest consecutive pair: energy (triple-bar) order
/// k - 1 and L2 order k + 1, each minus `slack`.
struct RateCheck {
  double expected_tb = 0.0;
  double expected_l2 = 0.0;
  double slack = 0.3;
  std::optional<double> observed_tb;
  std::optional<double> observed_l2;
  bool tb_ok = false;
  bool l2_ok = false;

  [[nodiscard]] bool ok() const { return tb_ok && l2_ok; }
};

RateCheck check_rates(const ConvergenceReport& report, double slack = 0.3);

inline constexpr const char* kCsvHeader = "level,h,dofs,e_tb,e_h2,e_l2,rate_tb,rate_h2,rate_l2,iters,seconds";

void write_csv(const ConvergenceReport& report, std::ostream& out);
/// Whitespace-separated columns with a '#' header, for gnuplot's
/// `plot "file" using 2:4 with linespoints` and log-log axes.
void write_gnuplot(const ConvergenceReport& report, std::ostream& out);

ConvergenceRow make_row(int level, const CaseResult& result);

}  // namespace wgb
