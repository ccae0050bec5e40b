#include "wgb/weak_function.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

#include "wgb/basis.hpp"

namespace wgb {

void SpaceDegrees::validate() const {
  if (!(k >= p && p >= q && q >= 1)) {
    throw std::invalid_argument("weak space degrees require k >= p >= q >= 1 (got k=" + std::to_string(k) +
                                ", p=" + std::to_string(p) + ", q=" + std::to_string(q) + ")");
  }
}

DofMap::DofMap(const Mesh& mesh, SpaceDegrees degrees) : degrees_(degrees) {
  degrees_.validate();
  edge_base_ = mesh.num_elements() * degrees_.interior_size();
  const std::size_t total = edge_base_ + mesh.num_edges() * degrees_.edge_size();
  free_index_.assign(total, 0);

  std::ptrdiff_t next_free = 0;
  std::ptrdiff_t next_prescribed = 0;
  auto mark = [&](Index begin, std::size_t count, bool free) {
    for (Index i = begin; i < begin + count; ++i) free_index_[i] = free ? next_free++ : -(++next_prescribed);
  };
  mark(0, edge_base_, true);
  for (Index e = 0; e < mesh.num_edges(); ++e) mark(trace_offset(e), degrees_.edge_size(), !mesh.edge(e).on_boundary);
  num_free_ = static_cast<std::size_t>(next_free);

  local_dofs_.resize(mesh.num_elements());
  for (Index el = 0; el < mesh.num_elements(); ++el) {
    const auto& element = mesh.element(el);
    auto& dofs = local_dofs_[el];
    dofs.reserve(degrees_.local_size(element.num_edges()));
    for (std::size_t i = 0; i < degrees_.interior_size(); ++i) dofs.push_back(interior_offset(el) + i);
    for (Index e : element.edge_ids) {
      for (std::size_t i = 0; i < degrees_.edge_size(); ++i) dofs.push_back(trace_offset(e) + i);
    }
  }
}

DofMap number_dofs(const Mesh& mesh, SpaceDegrees degrees) { return DofMap(mesh, degrees); }

WeakFunction::WeakFunction(const DofMap& map, Eigen::VectorXd coeffs) : map_(&map), coeffs_(std::move(coeffs)) {
  if (static_cast<std::size_t>(coeffs_.size()) != map.num_dofs()) {
    throw std::invalid_argument("WeakFunction: coefficient vector size does not match the DOF map");
  }
}

Eigen::VectorXd WeakFunction::local(Index element) const {
  const auto& dofs = map_->local_dofs(element);
  Eigen::VectorXd v(static_cast<Eigen::Index>(dofs.size()));
  for (std::size_t i = 0; i < dofs.size(); ++i) v[static_cast<Eigen::Index>(i)] = coeffs_[static_cast<Eigen::Index>(dofs[i])];
  return v;
}

WeakFunction project_weak(const ScalarField& u, const GradientField& grad, const Mesh& mesh, const DofMap& map,
                          int quad_degree) {
  const auto& deg = map.degrees();
  const int qd = quad_degree >= 0 ? quad_degree : std::min(std::max(2 * deg.k + 2, 24), kMaxQuadratureDegree);
  WeakFunction w(map);
  for (Index el = 0; el < mesh.num_elements(); ++el) {
    const auto& element = mesh.element(el);
    const ElementBasis basis(element, mesh, deg.k);
    w.interior(el) = project_element(u, basis, element_quadrature(element, mesh, qd));
  }
  for (Index e = 0; e < mesh.num_edges(); ++e) {
    w.trace(e) = project_edge(u, e, mesh, deg.p, qd);
    for (int c = 0; c < 2; ++c) {
      w.gradient(e, c) = project_edge([&](const Point& x) { return grad(x)[c]; }, e, mesh, deg.q, qd);
    }
  }
  return w;
}

}  // namespace wgb
