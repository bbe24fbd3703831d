#pragma once

#include <Eigen/Dense>

namespace cergm {

struct QuadratureRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Gauss-Legendre rule with `points` nodes on [lo, hi], from the eigen-
// decomposition of the Jacobi matrix (Golub-Welsch). Exact for polynomials
// of degree <= 2 points - 1.
QuadratureRule gauss_legendre(int points, double lo = 0.0, double hi = 1.0);

}  // namespace cergm
