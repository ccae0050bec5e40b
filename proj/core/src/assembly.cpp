#include "wgb/assembly.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "wgb/basis.hpp"
#include "wgb/parallel.hpp"

namespace wgb {

Eigen::VectorXd boundary_values(const Mesh& mesh, const DofMap& map, const BoundaryData& data, int quad_degree) {
  const auto& deg = map.degrees();
  const int qd = quad_degree >= 0 ? quad_degree : std::min(std::max(2 * deg.p + 2, 24), kMaxQuadratureDegree);
  Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.num_prescribed()));

  auto put = [&](Index first, const Eigen::VectorXd& values) {
    for (Eigen::Index i = 0; i < values.size(); ++i) {
      g[static_cast<Eigen::Index>(map.reduced_index(first + static_cast<Index>(i)))] = values[i];
    }
  };

  for (Index e = 0; e < mesh.num_edges(); ++e) {
    const auto& edge = mesh.edge(e);
    if (!edge.on_boundary) continue;
    const Point n = edge.neighbors.front().normal;
    const Point tau = edge.tangent;

    put(map.trace_offset(e), project_edge(data.xi, e, mesh, deg.p, qd));
    const Eigen::VectorXd normal_part = project_edge([&](const Point& x) { return data.nu(x, n); }, e, mesh, deg.q, qd);
    const Eigen::VectorXd tangential_part =
        project_edge([&](const Point& x) { return data.tangential(x, tau); }, e, mesh, deg.q, qd);
    for (int c = 0; c < 2; ++c) put(map.gradient_offset(e, c), normal_part * n[c] + tangential_part * tau[c]);
  }
  return g;
}

GlobalSystem assemble(const Mesh& mesh, const DofMap& map, const std::vector<LocalHessianOp>& ops, const ScalarField& f,
                      const Eigen::VectorXd& prescribed, int load_quad_degree, unsigned threads) {
  if (ops.size() != mesh.num_elements()) throw std::invalid_argument("assemble: one local operator per element required");
  if (static_cast<std::size_t>(prescribed.size()) != map.num_prescribed()) {
    throw std::invalid_argument("assemble: prescribed vector size does not match the DOF map");
  }
  const auto& deg = map.degrees();

  std::vector<Eigen::MatrixXd> stiffness(mesh.num_elements());
  std::vector<Eigen::VectorXd> loads(mesh.num_elements());
  parallel_for(
      mesh.num_elements(),
      [&](std::size_t el) {
        if (ops[el].element != el) throw std::invalid_argument("assemble: local operators out of element order");
        stiffness[el] = local_stiffness(ops[el]);
        loads[el] = local_load(el, mesh, f, deg, load_quad_degree);
      },
      threads);

  const auto n_free = static_cast<Eigen::Index>(map.num_free());
  GlobalSystem sys;
  sys.prescribed = prescribed;
  sys.b = Eigen::VectorXd::Zero(n_free);

  std::vector<Eigen::Triplet<double>> triplets;
  std::size_t estimate = 0;
  for (const auto& k : stiffness) estimate += static_cast<std::size_t>(k.size());
  triplets.reserve(estimate);

  for (Index el = 0; el < mesh.num_elements(); ++el) {
    const auto& dofs = map.local_dofs(el);
    const auto& k = stiffness[el];
    if (static_cast<std::size_t>(k.rows()) != dofs.size()) {
      throw std::out_of_range("assemble: local operator size does not match DOF map for element " + std::to_string(el));
    }
    for (std::size_t a = 0; a < dofs.size(); ++a) {
      if (!map.is_free(dofs[a])) continue;
      const auto row = static_cast<Eigen::Index>(map.reduced_index(dofs[a]));
      sys.b[row] += loads[el][static_cast<Eigen::Index>(a)];
      for (std::size_t c = 0; c < dofs.size(); ++c) {
        const double value = k(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c));
        const auto col = static_cast<Eigen::Index>(map.reduced_index(dofs[c]));
        if (map.is_free(dofs[c])) {
          triplets.emplace_back(row, col, value);
        } else {
          sys.b[row] -= value * prescribed[col];
        }
      }
    }
  }

  sys.a.resize(n_free, n_free);
  sys.a.setFromTriplets(triplets.begin(), triplets.end());
  sys.a.makeCompressed();
  return sys;
}

WeakFunction expand_solution(const DofMap& map, const Eigen::VectorXd& free_values, const Eigen::VectorXd& prescribed) {
  WeakFunction w(map);
  auto& c = w.coefficients();
  for (Index g = 0; g < map.num_dofs(); ++g) {
    const auto r = static_cast<Eigen::Index>(map.reduced_index(g));
    c[static_cast<Eigen::Index>(g)] = map.is_free(g) ? free_values[r] : prescribed[r];
  }
  return w;
}

double relative_asymmetry(const SparseMatrix& a) {
  const SparseMatrix at = a.transpose();
  const SparseMatrix diff = a - at;
  double max_a = 0.0;
  double max_diff = 0.0;
  for (Eigen::Index i = 0; i < a.outerSize(); ++i) {
    for (SparseMatrix::InnerIterator it(a, i); it; ++it) max_a = std::max(max_a, std::abs(it.value()));
    for (SparseMatrix::InnerIterator it(diff, i); it; ++it) max_diff = std::max(max_diff, std::abs(it.value()));
  }
  return max_a > 0 ? max_diff / max_a : max_diff;
}

}  // namespace wgb
