#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wgb/assembly.hpp"
#include "wgb/norms.hpp"
#include "wgb/weak_function.hpp"

namespace wgb {

/// Closed-form solution of the biharmonic problem on the unit square together
/// with all data derived from it. f is stored analytically, not differentiated.
struct ManufacturedProblem {
  std::string name;
  std::string description;
  ScalarField u;
  GradientField grad;
  HessianField hessian;
  /// Bilaplacian of u.
  ScalarField f;
  /// Total degree when u is a polynomial.
  std::optional<int> polynomial_degree;

  /// xi = u, nu = grad u . n, tangential = grad u . tau on the boundary.
  [[nodiscard]] BoundaryData boundary() const;

  /// True when Q_h u lies in the discrete space exactly and the scheme
  /// reproduces it: polynomial with degree <= min(k, p) and degree - 1 <= q.
  [[nodiscard]] bool reproduced_by(const SpaceDegrees& degrees) const;
};

/// zero, poly2, poly4, sinsin, clamped.
const std::vector<ManufacturedProblem>& registry();

/// Throws std::invalid_argument for an unknown name.
const ManufacturedProblem& find_problem(std::string_view name);

}  // namespace wgb
