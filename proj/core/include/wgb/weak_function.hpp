#pragma once

#include <functional>
#include <vector>

#include <Eigen/Core>

#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"

namespace wgb {

/// Polynomial degrees of the weak space: interior P_k(T), edge trace P_p(e),
/// edge gradient [P_q(e)]^2. Requires k >= p >= q >= 1.
struct SpaceDegrees {
  int k = 2;
  int p = 2;
  int q = 1;

  /// Throws std::invalid_argument unless k >= p >= q >= 1.
  void validate() const;

  [[nodiscard]] std::size_t interior_size() const { return static_cast<std::size_t>((k + 1) * (k + 2) / 2); }
  [[nodiscard]] std::size_t trace_size() const { return static_cast<std::size_t>(p + 1); }
  [[nodiscard]] std::size_t gradient_size() const { return static_cast<std::size_t>(q + 1); }
  /// Trace block plus both Cartesian gradient blocks.
  [[nodiscard]] std::size_t edge_size() const { return trace_size() + 2 * gradient_size(); }
  /// Element-local DOF count for an element with `num_edges` edges.
  [[nodiscard]] std::size_t local_size(std::size_t num_edges) const {
    return interior_size() + num_edges * edge_size();
  }
  /// Offsets inside the element-local vector.
  [[nodiscard]] std::size_t local_trace_offset(std::size_t local_edge) const {
    return interior_size() + local_edge * edge_size();
  }
  [[nodiscard]] std::size_t local_gradient_offset(std::size_t local_edge, int component) const {
    return local_trace_offset(local_edge) + trace_size() + static_cast<std::size_t>(component) * gradient_size();
  }
};

/// Global numbering: all element-interior blocks first (element order), then
/// one [trace | grad_x | grad_y] block per edge (edge order). Every
/// boundary-edge DOF is prescribed; all others are free.
class DofMap {
 public:
  DofMap(const Mesh& mesh, SpaceDegrees degrees);

  [[nodiscard]] const SpaceDegrees& degrees() const { return degrees_; }
  [[nodiscard]] std::size_t num_dofs() const { return free_index_.size(); }
  [[nodiscard]] std::size_t num_free() const { return num_free_; }
  [[nodiscard]] std::size_t num_prescribed() const { return num_dofs() - num_free_; }

  [[nodiscard]] Index interior_offset(Index element) const { return element * degrees_.interior_size(); }
  [[nodiscard]] Index trace_offset(Index edge) const { return edge_base_ + edge * degrees_.edge_size(); }
  [[nodiscard]] Index gradient_offset(Index edge, int component) const {
    return trace_offset(edge) + degrees_.trace_size() + static_cast<Index>(component) * degrees_.gradient_size();
  }

  [[nodiscard]] bool is_free(Index dof) const { return free_index_[dof] >= 0; }
  /// Position among free DOFs, or among prescribed DOFs when !is_free(dof).
  [[nodiscard]] Index reduced_index(Index dof) const {
    const auto i = free_index_[dof];
    return static_cast<Index>(i >= 0 ? i : -i - 1);
  }

  /// Global indices of an element's local DOFs: interior block, then for each
  /// local edge its trace and gradient blocks.
  [[nodiscard]] const std::vector<Index>& local_dofs(Index element) const { return local_dofs_[element]; }

 private:
  SpaceDegrees degrees_;
  Index edge_base_ = 0;
  std::size_t num_free_ = 0;
  // >= 0: free index; < 0: -(prescribed index) - 1
  std::vector<std::ptrdiff_t> free_index_;
  std::vector<std::vector<Index>> local_dofs_;
};

DofMap number_dofs(const Mesh& mesh, SpaceDegrees degrees);

/// Global coefficient vector of a function in V_h. Edge blocks are stored
/// once, so traces and gradients are single-valued across interior edges.
class WeakFunction {
 public:
  explicit WeakFunction(const DofMap& map) : map_(&map), coeffs_(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.num_dofs()))) {}
  WeakFunction(const DofMap& map, Eigen::VectorXd coeffs);

  [[nodiscard]] const DofMap& dof_map() const { return *map_; }
  [[nodiscard]] const Eigen::VectorXd& coefficients() const { return coeffs_; }
  [[nodiscard]] Eigen::VectorXd& coefficients() { return coeffs_; }

  [[nodiscard]] auto interior(Index element) const {
    return coeffs_.segment(static_cast<Eigen::Index>(map_->interior_offset(element)),
                           static_cast<Eigen::Index>(map_->degrees().interior_size()));
  }
  [[nodiscard]] auto interior(Index element) {
    return coeffs_.segment(static_cast<Eigen::Index>(map_->interior_offset(element)),
                           static_cast<Eigen::Index>(map_->degrees().interior_size()));
  }
  [[nodiscard]] auto trace(Index edge) const {
    return coeffs_.segment(static_cast<Eigen::Index>(map_->trace_offset(edge)),
                           static_cast<Eigen::Index>(map_->degrees().trace_size()));
  }
  [[nodiscard]] auto trace(Index edge) {
    return coeffs_.segment(static_cast<Eigen::Index>(map_->trace_offset(edge)),
                           static_cast<Eigen::Index>(map_->degrees().trace_size()));
  }
  [[nodiscard]] auto gradient(Index edge, int component) const {
    return coeffs_.segment(static_cast<Eigen::Index>(map_->gradient_offset(edge, component)),
                           static_cast<Eigen::Index>(map_->degrees().gradient_size()));
  }
  [[nodiscard]] auto gradient(Index edge, int component) {
    return coeffs_.segment(static_cast<Eigen::Index>(map_->gradient_offset(edge, component)),
                           static_cast<Eigen::Index>(map_->degrees().gradient_size()));
  }

  /// Element-local vector in the layout of DofMap::local_dofs.
  [[nodiscard]] Eigen::VectorXd local(Index element) const;

 private:
  const DofMap* map_;
  Eigen::VectorXd coeffs_;
};

using GradientField = std::function<Eigen::Vector2d(const Point&)>;

/// Interior blocks Q_0 u, edge traces Q_b u, edge gradients Q_n of each
/// Cartesian component of grad u. Shared edges are projected once.
/// quad_degree = -1 picks max(2k + 2, 24) capped to the rule table.
WeakFunction project_weak(const ScalarField& u, const GradientField& grad, const Mesh& mesh, const DofMap& map,
                          int quad_degree = -1);

/// Exact weak embedding of a global polynomial P with deg P <= min(k, p) and
/// deg grad P <= q: identical to project_weak, named for intent.
inline WeakFunction embed_polynomial(const ScalarField& u, const GradientField& grad, const Mesh& mesh,
                                     const DofMap& map) {
  return project_weak(u, grad, mesh, map);
}

}  // namespace wgb
