#include "wgb/basis.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Cholesky>

#include "wgb/errors.hpp"

namespace wgb {

namespace {

// a! / (a - d)! for d <= a, else 0.
double falling_factorial(int a, int d) {
  if (d > a) return 0.0;
  double r = 1.0;
  for (int i = 0; i < d; ++i) r *= a - i;
  return r;
}

}  // namespace

ElementBasis::ElementBasis(const Element& element, const Mesh& mesh, int degree, Orthonormalization mode)
    : degree_(degree), center_(element.centroid), scale_(element.diameter) {
  if (degree < 0) throw std::invalid_argument("ElementBasis: negative degree");
  for (int total = 0; total <= degree; ++total) {
    for (int b = 0; b <= total; ++b) exponents_.push_back({total - b, b});
  }
  orthonormal_ = mode == Orthonormalization::always ||
                 (mode == Orthonormalization::automatic && degree >= kOrthonormalizeFromDegree);
  if (!orthonormal_) return;

  // Polynomial Arnoldi: function j is (scaled x or y) * function parent_[j],
  // orthogonalized against 0..j-1 in the discrete L2(T) product. Evaluating
  // through the same recurrence keeps the basis orthonormal at any degree,
  // unlike a change of basis applied to monomials.
  const auto n = static_cast<Eigen::Index>(exponents_.size());
  parent_.assign(exponents_.size(), 0);
  axis_.assign(exponents_.size(), 0);
  for (std::size_t j = 1; j < exponents_.size(); ++j) {
    const auto [a, b] = exponents_[j];
    // (a, b) sits at t(t+1)/2 + b with t = a + b
    auto index_of = [](int x, int y) { return static_cast<std::size_t>((x + y) * (x + y + 1) / 2 + y); };
    if (b > 0) {
      parent_[j] = index_of(a, b - 1);
      axis_[j] = 1;
    } else {
      parent_[j] = index_of(a - 1, 0);
      axis_[j] = 0;
    }
  }

  const auto quad = element_quadrature(element, mesh, std::min(2 * degree + 2, kMaxQuadratureDegree));
  const auto np = static_cast<Eigen::Index>(quad.size());
  Eigen::VectorXd sw(np);
  Eigen::MatrixXd coords(np, 2);
  for (Eigen::Index q = 0; q < np; ++q) {
    sw[q] = std::sqrt(quad.weights[static_cast<std::size_t>(q)]);
    coords.row(q) = ((quad.points[static_cast<std::size_t>(q)] - center_) / scale_).transpose();
  }
  Eigen::MatrixXd qmat(np, n);
  recurrence_ = Eigen::MatrixXd::Zero(n, n);
  recurrence_(0, 0) = sw.norm();
  qmat.col(0) = sw / recurrence_(0, 0);
  for (Eigen::Index j = 1; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    Eigen::VectorXd v = coords.col(axis_[uj]).cwiseProduct(qmat.col(static_cast<Eigen::Index>(parent_[uj])));
    for (int pass = 0; pass < 2; ++pass) {
      const Eigen::VectorXd h = qmat.leftCols(j).transpose() * v;
      v.noalias() -= qmat.leftCols(j) * h;
      recurrence_.col(j).head(j) += h;
    }
    recurrence_(j, j) = v.norm();
    if (!(recurrence_(j, j) > 0)) throw NumericalError("ElementBasis: degenerate element for orthonormalization");
    qmat.col(j) = v / recurrence_(j, j);
  }
}

Eigen::MatrixXd ElementBasis::arnoldi_tabulate(const std::vector<Point>& points, int dx, int dy) const {
  const auto np = static_cast<Eigen::Index>(points.size());
  const auto n = static_cast<Eigen::Index>(exponents_.size());
  Eigen::MatrixXd coords(np, 2);
  for (Eigen::Index q = 0; q < np; ++q) {
    coords.row(q) = ((points[static_cast<std::size_t>(q)] - center_) / scale_).transpose();
  }
  const double dscale = 1.0 / scale_;
  // tables[a][b] holds d^(a+b)/dx^a dy^b of every function at every point
  std::vector<std::vector<Eigen::MatrixXd>> tables(static_cast<std::size_t>(dx + 1),
                                                   std::vector<Eigen::MatrixXd>(static_cast<std::size_t>(dy + 1)));
  for (int a = 0; a <= dx; ++a) {
    for (int b = 0; b <= dy; ++b) {
      auto& t = tables[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
      t.resize(np, n);
      t.col(0).setConstant(a + b == 0 ? 1.0 / recurrence_(0, 0) : 0.0);
    }
  }
  for (Eigen::Index j = 1; j < n; ++j) {
    const auto uj = static_cast<std::size_t>(j);
    const auto par = static_cast<Eigen::Index>(parent_[uj]);
    const int ax = axis_[uj];
    for (int a = 0; a <= dx; ++a) {
      for (int b = 0; b <= dy; ++b) {
        auto& t = tables[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)];
        Eigen::VectorXd v = coords.col(ax).cwiseProduct(t.col(par));
        // Leibniz term from the linear multiplier
        const int order = ax == 0 ? a : b;
        if (order > 0) {
          const auto& lower = ax == 0 ? tables[static_cast<std::size_t>(a - 1)][static_cast<std::size_t>(b)]
                                      : tables[static_cast<std::size_t>(a)][static_cast<std::size_t>(b - 1)];
          v += (order * dscale) * lower.col(par);
        }
        v.noalias() -= t.leftCols(j) * recurrence_.col(j).head(j);
        t.col(j) = v / recurrence_(j, j);
      }
    }
  }
  return std::move(tables[static_cast<std::size_t>(dx)][static_cast<std::size_t>(dy)]);
}

Eigen::VectorXd ElementBasis::monomial_derivative(const Point& p, int dx, int dy) const {
  const double inv = 1.0 / scale_;
  const double x = (p.x() - center_.x()) * inv;
  const double y = (p.y() - center_.y()) * inv;

  std::vector<double> xp(static_cast<std::size_t>(degree_ + 1), 1.0);
  std::vector<double> yp(static_cast<std::size_t>(degree_ + 1), 1.0);
  for (int i = 1; i <= degree_; ++i) {
    xp[static_cast<std::size_t>(i)] = xp[static_cast<std::size_t>(i - 1)] * x;
    yp[static_cast<std::size_t>(i)] = yp[static_cast<std::size_t>(i - 1)] * y;
  }
  const double chain = std::pow(inv, dx + dy);

  Eigen::VectorXd out(static_cast<Eigen::Index>(exponents_.size()));
  for (std::size_t k = 0; k < exponents_.size(); ++k) {
    const auto [a, b] = exponents_[k];
    if (a < dx || b < dy) {
      out[static_cast<Eigen::Index>(k)] = 0.0;
      continue;
    }
    out[static_cast<Eigen::Index>(k)] = chain * falling_factorial(a, dx) * falling_factorial(b, dy) *
                                        xp[static_cast<std::size_t>(a - dx)] * yp[static_cast<std::size_t>(b - dy)];
  }
  return out;
}

Eigen::VectorXd ElementBasis::derivative(const Point& p, int dx, int dy) const {
  if (!orthonormal_) return monomial_derivative(p, dx, dy);
  return arnoldi_tabulate({p}, dx, dy).row(0).transpose();
}

Eigen::MatrixXd ElementBasis::tabulate(const std::vector<Point>& points, int dx, int dy) const {
  if (orthonormal_) return arnoldi_tabulate(points, dx, dy);
  Eigen::MatrixXd table(static_cast<Eigen::Index>(points.size()), static_cast<Eigen::Index>(size()));
  for (std::size_t q = 0; q < points.size(); ++q) {
    table.row(static_cast<Eigen::Index>(q)) = monomial_derivative(points[q], dx, dy);
  }
  return table;
}

Eigen::VectorXd EdgeBasis::values(double t) const {
  Eigen::VectorXd v(degree_ + 1);
  const double s = 2.0 * t - 1.0;
  v[0] = 1.0;
  if (degree_ >= 1) v[1] = s;
  for (int n = 2; n <= degree_; ++n) v[n] = ((2.0 * n - 1.0) * s * v[n - 1] - (n - 1.0) * v[n - 2]) / n;
  return v;
}

Eigen::VectorXd EdgeBasis::derivatives(double t) const {
  // P'_n(s) = n (s P_n - P_{n-1}) / (s^2 - 1) is singular at the ends; use the
  // recurrence P'_n = P'_{n-2} + (2n - 1) P_{n-1} instead.
  const Eigen::VectorXd p = values(t);
  Eigen::VectorXd d = Eigen::VectorXd::Zero(degree_ + 1);
  if (degree_ >= 1) d[1] = 1.0;
  for (int n = 2; n <= degree_; ++n) d[n] = d[n - 2] + (2.0 * n - 1.0) * p[n - 1];
  return 2.0 * d;
}

Eigen::VectorXd EdgeBasis::mass_diagonal() const {
  Eigen::VectorXd m(degree_ + 1);
  for (int n = 0; n <= degree_; ++n) m[n] = length_ / (2.0 * n + 1.0);
  return m;
}

Eigen::MatrixXd mass_matrix(const ElementBasis& basis, const ElementQuadrature& quad) {
  const Eigen::MatrixXd table = basis.tabulate(quad.points);
  const Eigen::Map<const Eigen::VectorXd> w(quad.weights.data(), static_cast<Eigen::Index>(quad.size()));
  Eigen::MatrixXd m = table.transpose() * w.asDiagonal() * table;
  return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd mass_matrix(const ElementBasis& basis, const Element& element, const Mesh& mesh) {
  return mass_matrix(basis, element_quadrature(element, mesh, std::min(2 * basis.degree() + 2, kMaxQuadratureDegree)));
}

Eigen::MatrixXd mass_matrix(const EdgeBasis& basis, const EdgeQuadrature& quad) {
  const auto n = static_cast<Eigen::Index>(basis.size());
  Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n, n);
  for (std::size_t q = 0; q < quad.size(); ++q) {
    const Eigen::VectorXd phi = basis.values(quad.t[q]);
    m += quad.weights[q] * phi * phi.transpose();
  }
  return m;
}

Eigen::VectorXd project_element(const ScalarField& f, const ElementBasis& basis, const ElementQuadrature& quad) {
  const Eigen::MatrixXd table = basis.tabulate(quad.points);
  Eigen::VectorXd wf(static_cast<Eigen::Index>(quad.size()));
  for (std::size_t q = 0; q < quad.size(); ++q) wf[static_cast<Eigen::Index>(q)] = quad.weights[q] * f(quad.points[q]);
  const Eigen::VectorXd rhs = table.transpose() * wf;
  Eigen::LLT<Eigen::MatrixXd> llt(mass_matrix(basis, quad));
  if (llt.info() != Eigen::Success) {
    throw NumericalError("project_element: Gram matrix not positive definite; enable orthonormalization");
  }
  return llt.solve(rhs);
}

Eigen::VectorXd project_element(const ScalarField& f, const Element& element, const Mesh& mesh, int degree,
                                int quad_degree) {
  const ElementBasis basis(element, mesh, degree);
  return project_element(f, basis, element_quadrature(element, mesh, quad_degree));
}

Eigen::VectorXd project_edge(const ScalarField& f, Index edge, const Mesh& mesh, int degree, int quad_degree) {
  const EdgeBasis basis(degree, mesh.edge(edge).length);
  const auto quad = edge_quadrature(edge, mesh, quad_degree);
  Eigen::VectorXd c = Eigen::VectorXd::Zero(degree + 1);
  for (std::size_t q = 0; q < quad.size(); ++q) c += quad.weights[q] * f(quad.points[q]) * basis.values(quad.t[q]);
  return c.cwiseQuotient(basis.mass_diagonal());
}

double evaluate_edge(const Eigen::VectorXd& c, double t) {
  return c.dot(EdgeBasis(static_cast<int>(c.size()) - 1, 1.0).values(t));
}

}  // namespace wgb
