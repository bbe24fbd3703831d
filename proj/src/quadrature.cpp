#include "cergm/quadrature.hpp"

#include <cmath>

#include "cergm/errors.hpp"

namespace cergm {

QuadratureRule gauss_legendre(int points, double lo, double hi) {
  if (points < 1) throw DomainError("quadrature needs at least one node");
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(points, points);
  for (int k = 1; k < points; ++k) {
    const double off = k / std::sqrt(4.0 * k * k - 1.0);
    jacobi(k - 1, k) = off;
    jacobi(k, k - 1) = off;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) throw NumericalError("Jacobi eigenproblem failed");

  const double half = 0.5 * (hi - lo);
  QuadratureRule rule;
  rule.nodes = (solver.eigenvalues().array() + 1.0) * half + lo;
  // Weight on [-1, 1] is 2 v_0^2 for the normalized eigenvector v.
  rule.weights = 2.0 * half * solver.eigenvectors().row(0).transpose().array().square();
  return rule;
}

}  // namespace cergm
