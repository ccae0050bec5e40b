#include <benchmark/benchmark.h>

#include "wgb/assembly.hpp"
#include "wgb/problems.hpp"
#include "wgb/solver.hpp"
#include "wgb/weak_hessian.hpp"

using namespace wgb;

namespace {

SpaceDegrees degrees_for(int k) { return k == 2 ? SpaceDegrees{2, 2, 1} : SpaceDegrees{3, 3, 2}; }

// one local operator: a square (small r) against an L-hexagon (large r)
void BM_LocalHessian(benchmark::State& state) {
  const auto family = state.range(0) == 0 ? MeshFamily::quad : MeshFamily::nonconvex_L;
  const auto deg = degrees_for(static_cast<int>(state.range(1)));
  const auto mesh = generate_mesh(family, 2, 2);
  Index el = 0;
  while (mesh.element(el).is_convex != (family == MeshFamily::quad)) ++el;
  const int r = default_r(mesh.element(el), deg.k);
  for (auto _ : state) benchmark::DoNotOptimize(build_local_hessian(el, mesh, deg, r));
  state.SetLabel(std::string(to_string(family)) + " r=" + std::to_string(r));
}
BENCHMARK(BM_LocalHessian)->ArgsProduct({{0, 1}, {2, 3}})->Unit(benchmark::kMicrosecond);

void BM_Assemble(benchmark::State& state) {
  const auto mesh = generate_mesh(MeshFamily::quad, static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const auto deg = degrees_for(2);
  const DofMap map(mesh, deg);
  const auto ops = build_local_hessians(mesh, deg, RPolicy{});
  const auto& problem = find_problem("sinsin");
  const Eigen::VectorXd g = boundary_values(mesh, map, problem.boundary());
  for (auto _ : state) benchmark::DoNotOptimize(assemble(mesh, map, ops, problem.f, g));
  state.counters["dofs"] = static_cast<double>(map.num_free());
}
BENCHMARK(BM_Assemble)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_Solve(benchmark::State& state) {
  const auto mesh = generate_mesh(MeshFamily::quad, static_cast<int>(state.range(0)), static_cast<int>(state.range(0)));
  const auto deg = degrees_for(2);
  const DofMap map(mesh, deg);
  const auto ops = build_local_hessians(mesh, deg, RPolicy{});
  const auto& problem = find_problem("sinsin");
  const auto sys = assemble(mesh, map, ops, problem.f, boundary_values(mesh, map, problem.boundary()));
  SolverOptions options;
  options.method = state.range(1) == 0 ? SolverMethod::cholesky : SolverMethod::cg;
  for (auto _ : state) benchmark::DoNotOptimize(solve_spd(sys.a, sys.b, options));
  state.SetLabel(std::string(to_string(options.method)));
  state.counters["dofs"] = static_cast<double>(map.num_free());
}
BENCHMARK(BM_Solve)->ArgsProduct({{16, 32}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
