#include "wgb/study.hpp"

#include <chrono>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <stdexcept>

#include "wgb/assembly.hpp"

namespace wgb {

namespace {

std::optional<double> rate(double coarse, double fine, bool exact) {
  if (exact || !(coarse > 0) || !(fine > 0)) return std::nullopt;
  return std::log2(coarse / fine);
}

void write_optional(std::ostream& out, const std::optional<double>& v) {
  if (v) out << *v;
}

}  // namespace

CaseResult run_case(const ManufacturedProblem& problem, const Mesh& mesh, const RunConfig& config) {
  return run_case(problem, std::make_shared<const Mesh>(mesh), config);
}

CaseResult run_case(const ManufacturedProblem& problem, std::shared_ptr<const Mesh> mesh, const RunConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  CaseResult result;
  result.mesh = std::move(mesh);
  result.dofs = std::make_shared<const DofMap>(*result.mesh, config.degrees);
  const auto& m = *result.mesh;
  const auto& map = *result.dofs;

  result.ops = build_local_hessians(m, config.degrees, config.r_policy, config.threads);
  const Eigen::VectorXd prescribed = boundary_values(m, map, problem.boundary());
  const GlobalSystem sys = assemble(m, map, result.ops, problem.f, prescribed, -1, config.threads);

  auto solved = solve_spd(sys.a, sys.b, config.solver);
  result.solve = solved.report;
  const WeakFunction u_h = expand_solution(map, solved.x, prescribed);
  result.coefficients = u_h.coefficients();

  result.errors.triple_bar = true_triple_bar_error(problem.hessian, u_h, result.ops, m);
  const WeakFunction qh = project_weak(problem.u, problem.grad, m, map);
  const WeakFunction diff(map, qh.coefficients() - u_h.coefficients());
  result.errors.triple_bar_projected = triple_bar_norm(diff, result.ops);
  const auto h2 = discrete_h2_error(problem.hessian, u_h, m);
  result.errors.discrete_h2 = h2.as_written;
  result.errors.discrete_h2_frobenius = h2.frobenius;
  result.errors.l2_interior = l2_interior_error(problem.u, u_h, m);

  result.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

ConvergenceRow make_row(int level, const CaseResult& result) {
  ConvergenceRow row;
  row.level = level;
  row.h = result.mesh->mesh_size();
  row.dofs = result.dofs->num_dofs();
  row.e_tb = result.errors.triple_bar;
  row.e_h2 = result.errors.discrete_h2;
  row.e_l2 = result.errors.l2_interior;
  row.iterations = result.solve.iterations;
  row.seconds = result.seconds;
  return row;
}

ConvergenceReport convergence_study(const ManufacturedProblem& problem, MeshFamily family, int levels,
                                    const RunConfig& config, int base_n) {
  if (levels < 1) throw std::invalid_argument("convergence_study: levels must be >= 1");
  if (base_n < 1 || (family == MeshFamily::nonconvex_L && base_n % 2 != 0)) {
    throw std::invalid_argument("convergence_study: invalid base resolution");
  }
  ConvergenceReport report;
  report.problem = problem.name;
  report.family = family;
  report.degrees = config.degrees;
  const bool exact = problem.reproduced_by(config.degrees);

  for (int level = 0; level < levels; ++level) {
    const int n = base_n << level;
    auto result = run_case(problem, std::make_shared<const Mesh>(generate_mesh(family, n, n)), config);
    auto row = make_row(level, result);
    if (!report.rows.empty()) {
      const auto& prev = report.rows.back();
      row.rate_tb = rate(prev.e_tb, row.e_tb, exact);
      row.rate_h2 = rate(prev.e_h2, row.e_h2, exact);
      row.rate_l2 = rate(prev.e_l2, row.e_l2, exact);
    }
    report.rows.push_back(row);
  }
  return report;
}

RateCheck check_rates(const ConvergenceReport& report, double slack) {
  RateCheck check;
  check.slack = slack;
  check.expected_tb = report.degrees.k - 1;
  check.expected_l2 = report.degrees.k + 1;
  if (report.rows.size() < 2) return check;
  const auto& last = report.rows.back();
  check.observed_tb = last.rate_tb;
  check.observed_l2 = last.rate_l2;
  check.tb_ok = last.rate_tb && *last.rate_tb >= check.expected_tb - slack;
  check.l2_ok = last.rate_l2 && *last.rate_l2 >= check.expected_l2 - slack;
  return check;
}

void write_csv(const ConvergenceReport& report, std::ostream& out) {
  out << kCsvHeader << '\n';
  const auto flags = out.flags();
  const auto precision = out.precision();
  out << std::setprecision(17);
  for (const auto& row : report.rows) {
    out << row.level << ',' << row.h << ',' << row.dofs << ',' << row.e_tb << ',' << row.e_h2 << ',' << row.e_l2 << ',';
    write_optional(out, row.rate_tb);
    out << ',';
    write_optional(out, row.rate_h2);
    out << ',';
    write_optional(out, row.rate_l2);
    out << ',' << row.iterations << ',' << row.seconds << '\n';
  }
  out.flags(flags);
  out.precision(precision);
}

void write_gnuplot(const ConvergenceReport& report, std::ostream& out) {
  out << "# problem=" << report.problem << " family=" << to_string(report.family) << " k=" << report.degrees.k
      << " p=" << report.degrees.p << " q=" << report.degrees.q << '\n';
  out << "# level h dofs e_tb e_h2 e_l2 rate_tb rate_h2 rate_l2\n";
  const auto precision = out.precision();
  out << std::setprecision(12);
  auto opt = [](const std::optional<double>& v) { return v ? *v : std::nan(""); };
  for (const auto& row : report.rows) {
    out << row.level << ' ' << row.h << ' ' << row.dofs << ' ' << row.e_tb << ' ' << row.e_h2 << ' ' << row.e_l2 << ' '
        << opt(row.rate_tb) << ' ' << opt(row.rate_h2) << ' ' << opt(row.rate_l2) << '\n';
  }
  out.precision(precision);
}

}  // namespace wgb
