// wgb: command-line driver for the weak Galerkin biharmonic solver.
//
//   wgb solve    --problem sinsin --gen quad:nx=8,ny=8 --k 2 --p 2 --q 1 --out case.csv
//   wgb converge --problem sinsin --family quad --levels 4 --k 2 --p 2 --q 1 --out study.csv
//   wgb validate --mesh m.json
//
// Any subcommand accepts --config FILE with `key = value` lines using the
// long option names (k = 3, family = "nonconvex_L", ...). Command-line
// values win over the file.

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "wgb/mesh_io.hpp"
#include "wgb/problems.hpp"
#include "wgb/study.hpp"

namespace {

// Flat config keys belong to whichever subcommand was selected.
class SubcommandConfig : public CLI::ConfigTOML {
 public:
  explicit SubcommandConfig(const CLI::App* app) : app_(app) {}

  std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
    auto items = CLI::ConfigTOML::from_config(input);
    for (const auto* sub : app_->get_subcommands()) {
      for (auto& item : items) {
        if (item.parents.empty()) item.parents = {sub->get_name()};
      }
    }
    return items;
  }

 private:
  const CLI::App* app_;
};

struct Common {
  std::string problem = "sinsin";
  int k = 2;
  int p = 2;
  int q = 1;
  std::optional<int> r_override;
  bool fixed_r = false;
  std::string solver = "auto";
  double tol = 1e-10;
  unsigned threads = 0;
  std::string out;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--problem", c.problem, "zero | poly2 | poly4 | sinsin | clamped")->capture_default_str();
  cmd->add_option("--k", c.k, "interior degree")->capture_default_str();
  cmd->add_option("--p", c.p, "edge trace degree")->capture_default_str();
  cmd->add_option("--q", c.q, "edge gradient degree")->capture_default_str();
  cmd->add_option("--r-override", c.r_override, "fixed weak Hessian degree on every element");
  cmd->add_flag("--fixed-r", c.fixed_r, "use the per-element default r without kernel stabilization");
  cmd->add_option("--solver", c.solver, "auto | cholesky | cg")->capture_default_str();
  cmd->add_option("--tol", c.tol, "relative residual tolerance")->capture_default_str();
  cmd->add_option("--threads", c.threads, "worker threads, 0 = all cores")->capture_default_str();
  cmd->add_option("--out", c.out, "CSV output path");
}

wgb::RunConfig make_config(const Common& c) {
  wgb::RunConfig cfg;
  cfg.degrees = {c.k, c.p, c.q};
  cfg.degrees.validate();
  cfg.r_policy.override_r = c.r_override;
  cfg.r_policy.stabilize = !c.fixed_r;
  cfg.solver.method = wgb::parse_solver_method(c.solver);
  cfg.solver.tolerance = c.tol;
  cfg.threads = c.threads;
  return cfg;
}

bool print_validation(const wgb::Mesh& mesh) {
  const auto report = wgb::validate(mesh);
  std::cout << "mesh: " << mesh.num_elements() << " elements, " << mesh.num_edges() << " edges, "
            << mesh.vertices().size() << " vertices, h = " << mesh.mesh_size() << '\n';
  for (const auto& v : report.violations) {
    std::cout << "  " << wgb::to_string(v.kind) << " [" << v.id << "]: " << v.message << '\n';
  }
  std::cout << (report.ok() ? "valid" : "INVALID") << '\n';
  return report.ok();
}

wgb::Mesh load_mesh(const std::string& gen, const std::string& path) {
  if (!path.empty()) return wgb::read_mesh_json(path);
  const auto spec = wgb::parse_generator_spec(gen);
  return wgb::generate_mesh(spec.family, spec.nx, spec.ny);
}

// Exactly reproduced problems are checked against the solver floor instead
// of rates.
bool exactness_ok(const wgb::ConvergenceReport& report) {
  for (const auto& row : report.rows) {
    if (!(row.e_l2 <= 1e-8 && row.e_tb <= 1e-7)) return false;
  }
  return true;
}

void print_rows(const wgb::ConvergenceReport& report) {
  std::cout << std::setw(5) << "level" << std::setw(12) << "h" << std::setw(9) << "dofs" << std::setw(13) << "e_tb"
            << std::setw(13) << "e_h2" << std::setw(13) << "e_l2" << std::setw(9) << "r_tb" << std::setw(9) << "r_l2"
            << std::setw(7) << "iters" << std::setw(9) << "sec" << '\n';
  auto rate = [](const std::optional<double>& r) {
    std::ostringstream s;
    if (r) s << std::fixed << std::setprecision(3) << *r;
    else s << '-';
    return s.str();
  };
  for (const auto& row : report.rows) {
    std::cout << std::setw(5) << row.level << std::setw(12) << std::setprecision(4) << row.h << std::setw(9) << row.dofs
              << std::setw(13) << std::scientific << std::setprecision(4) << row.e_tb << std::setw(13) << row.e_h2
              << std::setw(13) << row.e_l2 << std::defaultfloat << std::setw(9) << rate(row.rate_tb) << std::setw(9)
              << rate(row.rate_l2) << std::setw(7) << row.iterations << std::setw(9) << std::setprecision(3)
              << row.seconds << '\n';
  }
}

void write_file(const std::string& path, const wgb::ConvergenceReport& report, bool gnuplot) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  if (gnuplot) {
    wgb::write_gnuplot(report, out);
  } else {
    wgb::write_csv(report, out);
  }
}

int run_solve(const Common& c, const std::string& gen, const std::string& mesh_path) {
  const auto& problem = wgb::find_problem(c.problem);
  const auto config = make_config(c);
  auto mesh = std::make_shared<const wgb::Mesh>(load_mesh(gen, mesh_path));
  if (!print_validation(*mesh)) return 1;

  const auto result = wgb::run_case(problem, mesh, config);
  wgb::ConvergenceReport report;
  report.problem = problem.name;
  report.degrees = config.degrees;
  report.rows.push_back(wgb::make_row(0, result));

  std::cout << "solver: " << wgb::to_string(result.solve.method) << ", " << result.solve.iterations
            << " iterations, relative residual " << result.solve.relative_residual << '\n';
  print_rows(report);
  std::cout << "discrete H2 (Frobenius) = " << result.errors.discrete_h2_frobenius
            << ", triple-bar of Q_h u - u_h = " << result.errors.triple_bar_projected << '\n';
  if (!c.out.empty()) write_file(c.out, report, false);

  if (problem.reproduced_by(config.degrees)) {
    const bool ok = exactness_ok(report);
    std::cout << "exactness check: " << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
  }
  return 0;
}

int run_converge(const Common& c, const std::string& family, int levels, int base_n, std::string gnuplot,
                 double slack) {
  const auto& problem = wgb::find_problem(c.problem);
  const auto config = make_config(c);
  const auto report = wgb::convergence_study(problem, wgb::parse_family(family), levels, config, base_n);
  std::cout << problem.name << " on " << family << ", k=" << c.k << " p=" << c.p << " q=" << c.q << '\n';
  print_rows(report);

  if (!c.out.empty()) {
    write_file(c.out, report, false);
    if (gnuplot.empty()) gnuplot = std::filesystem::path(c.out).replace_extension(".dat").string();
  }
  if (!gnuplot.empty()) write_file(gnuplot, report, true);

  if (problem.reproduced_by(config.degrees)) {
    const bool ok = exactness_ok(report);
    std::cout << "exactness check: " << (ok ? "PASS" : "FAIL") << '\n';
    return ok ? 0 : 1;
  }
  const auto check = wgb::check_rates(report, slack);
  auto show = [](const std::optional<double>& r) { return r ? std::to_string(*r) : std::string("n/a"); };
  std::cout << "triple-bar rate " << show(check.observed_tb) << " (need >= " << check.expected_tb - slack << "): "
            << (check.tb_ok ? "PASS" : "FAIL") << '\n';
  std::cout << "L2 rate " << show(check.observed_l2) << " (need >= " << check.expected_l2 - slack << "): "
            << (check.l2_ok ? "PASS" : "FAIL") << '\n';
  return check.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Weak Galerkin solver for the biharmonic equation on polygonal meshes"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key = value file with long option names");
  app.config_formatter(std::make_shared<SubcommandConfig>(&app));
  app.allow_config_extras(CLI::config_extras_mode::error);

  Common solve_opts;
  std::string gen, mesh_path;
  auto* solve = app.add_subcommand("solve", "solve one manufactured problem on one mesh");
  add_common(solve, solve_opts);
  auto* gen_opt = solve->add_option("--gen", gen, "generated mesh, e.g. quad:nx=8,ny=8");
  auto* mesh_opt = solve->add_option("--mesh", mesh_path, "mesh JSON file")->check(CLI::ExistingFile);
  gen_opt->excludes(mesh_opt);
  solve->fallthrough();

  Common conv_opts;
  conv_opts.problem = "sinsin";
  std::string family = "quad", gnuplot;
  int levels = 4, base_n = 4;
  double slack = 0.3;
  auto* converge = app.add_subcommand("converge", "h-refinement study with rate checks");
  add_common(converge, conv_opts);
  converge->add_option("--family", family, "quad | triangle | nonconvex_L")->capture_default_str();
  converge->add_option("--levels", levels, "number of meshes")->capture_default_str()->check(CLI::PositiveNumber);
  converge->add_option("--base-n", base_n, "cells per side on the coarsest mesh")->capture_default_str();
  converge->add_option("--gnuplot", gnuplot, "gnuplot data path (default: --out with .dat)");
  converge->add_option("--slack", slack, "allowed shortfall of observed rates")->capture_default_str();
  converge->fallthrough();

  std::string validate_path, validate_gen;
  auto* validate = app.add_subcommand("validate", "check mesh invariants");
  auto* vmesh = validate->add_option("--mesh", validate_path, "mesh JSON file")->check(CLI::ExistingFile);
  validate->add_option("--gen", validate_gen, "generated mesh spec")->excludes(vmesh);
  validate->fallthrough();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) {
      if (gen.empty() && mesh_path.empty()) throw CLI::RequiredError("--gen or --mesh");
      return run_solve(solve_opts, gen, mesh_path);
    }
    if (converge->parsed()) return run_converge(conv_opts, family, levels, base_n, gnuplot, slack);
    if (validate_path.empty() && validate_gen.empty()) throw CLI::RequiredError("--mesh or --gen");
    return print_validation(load_mesh(validate_gen, validate_path)) ? 0 : 1;
  } catch (const CLI::Error& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
