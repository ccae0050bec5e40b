#pragma once

#include <array>
#include <vector>

#include <Eigen/Core>

#include "wgb/mesh.hpp"
#include "wgb/quadrature.hpp"

namespace wgb {

inline constexpr int kOrthonormalizeFromDegree = 8;

enum class Orthonormalization { automatic, always, never };

inline constexpr std::size_t polynomial_dimension(int degree) {
  return static_cast<std::size_t>((degree + 1) * (degree + 2) / 2);
}

/// Basis of P_m(T): centroid-centred monomials ((x-xc)/hT)^a ((y-yc)/hT)^b
/// ordered by total degree, or an L2(T)-orthonormal basis spanning the same
/// nested spaces, generated by a polynomial Arnoldi recurrence.
/// Orthonormalization is on by default from degree kOrthonormalizeFromDegree.
class ElementBasis {
 public:
  ElementBasis(const Element& element, const Mesh& mesh, int degree,
               Orthonormalization mode = Orthonormalization::automatic);

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::size_t size() const { return exponents_.size(); }
  [[nodiscard]] bool orthonormal() const { return orthonormal_; }
  [[nodiscard]] const Point& center() const { return center_; }
  [[nodiscard]] double scale() const { return scale_; }
  [[nodiscard]] const std::vector<std::array<int, 2>>& exponents() const { return exponents_; }

  /// d^(dx+dy) / dx^dx dy^dy of every basis function at p.
  [[nodiscard]] Eigen::VectorXd derivative(const Point& p, int dx, int dy) const;
  [[nodiscard]] Eigen::VectorXd values(const Point& p) const { return derivative(p, 0, 0); }
  /// Partial derivative along axis i in {0, 1}.
  [[nodiscard]] Eigen::VectorXd gradient(const Point& p, int i) const {
    return derivative(p, i == 0 ? 1 : 0, i == 0 ? 0 : 1);
  }
  /// Second partial derivative d^2/dx_i dx_j, i, j in {0, 1}.
  [[nodiscard]] Eigen::VectorXd hessian(const Point& p, int i, int j) const {
    return derivative(p, (i == 0) + (j == 0), (i == 1) + (j == 1));
  }

  /// Rows: points, columns: basis functions.
  [[nodiscard]] Eigen::MatrixXd tabulate(const std::vector<Point>& points, int dx = 0, int dy = 0) const;

  /// Polynomial with coefficients `c` in this basis, evaluated at p.
  [[nodiscard]] double evaluate(const Eigen::VectorXd& c, const Point& p, int dx = 0, int dy = 0) const {
    return c.dot(derivative(p, dx, dy));
  }

 private:
  [[nodiscard]] Eigen::VectorXd monomial_derivative(const Point& p, int dx, int dy) const;
  [[nodiscard]] Eigen::MatrixXd arnoldi_tabulate(const std::vector<Point>& points, int dx, int dy) const;

  int degree_;
  Point center_;
  double scale_;
  std::vector<std::array<int, 2>> exponents_;
  bool orthonormal_ = false;
  // orthonormal mode: function j = (x or y) * function parent_[j], minus
  // recurrence_.col(j) against earlier functions, over recurrence_(j, j)
  std::vector<std::size_t> parent_;
  std::vector<int> axis_;
  Eigen::MatrixXd recurrence_;
};

/// Shifted Legendre polynomials P_n(2t - 1), n <= degree, in the canonical
/// arc parameter t of an edge.
class EdgeBasis {
 public:
  EdgeBasis(int degree, double length) : degree_(degree), length_(length) {}

  [[nodiscard]] int degree() const { return degree_; }
  [[nodiscard]] std::size_t size() const { return static_cast<std::size_t>(degree_ + 1); }
  [[nodiscard]] double length() const { return length_; }
  [[nodiscard]] Eigen::VectorXd values(double t) const;
  /// d/dt of every basis function.
  [[nodiscard]] Eigen::VectorXd derivatives(double t) const;
  /// Diagonal entries of the edge mass matrix, length / (2n + 1).
  [[nodiscard]] Eigen::VectorXd mass_diagonal() const;

 private:
  int degree_;
  double length_;
};

/// Gram matrix (phi_a, phi_b)_T using the given quadrature.
Eigen::MatrixXd mass_matrix(const ElementBasis& basis, const ElementQuadrature& quad);
Eigen::MatrixXd mass_matrix(const ElementBasis& basis, const Element& element, const Mesh& mesh);
/// Numerical edge mass matrix; diagonal for the Legendre basis.
Eigen::MatrixXd mass_matrix(const EdgeBasis& basis, const EdgeQuadrature& quad);

/// L2(T) projection onto span(basis). Throws NumericalError if the Gram
/// matrix is not numerically SPD.
Eigen::VectorXd project_element(const ScalarField& f, const ElementBasis& basis, const ElementQuadrature& quad);
Eigen::VectorXd project_element(const ScalarField& f, const Element& element, const Mesh& mesh, int degree,
                                int quad_degree);

/// L2(e) projection onto P_degree(e) in the shifted Legendre basis.
Eigen::VectorXd project_edge(const ScalarField& f, Index edge, const Mesh& mesh, int degree, int quad_degree);

/// Value of an edge polynomial with Legendre coefficients `c` at parameter t.
double evaluate_edge(const Eigen::VectorXd& c, double t);

}  // namespace wgb
