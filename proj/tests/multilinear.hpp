#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "cergm/nld_bounds.hpp"

namespace cergm::testing {

/// f(x) = sum over subsets S of [n] of coef[S] prod_{i in S} x_i. Every
/// partial derivative is again multilinear, so sup norms over [0, 1]^n are
/// attained at corners and can be computed exactly.
struct Multilinear {
  int n = 0;
  std::vector<double> coef;  // indexed by subset mask

  static Multilinear random(int n, double scale, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> u(-scale, scale);
    Multilinear f{n, std::vector<double>(std::size_t{1} << n)};
    for (double& c : f.coef) c = u(rng);
    return f;
  }

  double operator()(const Eigen::VectorXd& x) const {
    double total = 0.0;
    for (std::size_t s = 0; s < coef.size(); ++s) {
      double term = coef[s];
      for (int i = 0; i < n && term != 0.0; ++i)
        if ((s >> i) & 1U) term *= x(i);
      total += term;
    }
    return total;
  }

  Multilinear partial(int i) const {
    Multilinear d{n, std::vector<double>(coef.size(), 0.0)};
    for (std::size_t s = 0; s < coef.size(); ++s)
      if ((s >> i) & 1U) d.coef[s & ~(std::size_t{1} << i)] = coef[s];
    return d;
  }

  double sup_norm() const {
    double best = 0.0;
    Eigen::VectorXd x(n);
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      for (int i = 0; i < n; ++i) x(i) = static_cast<double>((mask >> i) & 1U);
      best = std::max(best, std::abs((*this)(x)));
    }
    return best;
  }

  CubeFunction function() const {
    return [f = *this](const Eigen::VectorXd& x) { return f(x); };
  }
};

// Exact (a, b, c) and (alpha, beta, gamma) for a multilinear pair (f, h).
inline SupNormProfile exact_profile(const Multilinear& f, const Multilinear& h) {
  SupNormProfile p = SupNormProfile::zeros(f.n);
  p.a = f.sup_norm();
  p.alpha = h.sup_norm();
  for (int i = 0; i < f.n; ++i) {
    const Multilinear fi = f.partial(i), hi = h.partial(i);
    p.b(i) = fi.sup_norm();
    p.beta(i) = hi.sup_norm();
    for (int j = 0; j < f.n; ++j) {
      if (j == i) continue;
      p.c(i, j) = fi.partial(j).sup_norm();
      p.gamma(i, j) = hi.partial(j).sup_norm();
    }
  }
  return p;
}

}  // namespace cergm::testing
