#pragma once

#include <Eigen/Dense>
#include <functional>
#include <optional>

#include "cergm/model.hpp"
#include "cergm/motif_poly.hpp"

namespace cergm {

// Smooth step: -1 for x <= -1, 0 for x >= 0, and
// 10(x+1)^3 - 15(x+1)^4 + 6(x+1)^5 - 1 in between. |g'| <= 2, |g''| <= 6.
double cutoff_g(double x);
double cutoff_g_prime(double x);
double cutoff_g_second(double x);

// K g((t - |x|) / delta): 0 on |x| <= t, -K on |x| >= t + delta.
double cutoff_psi(double x, double K, double t, double delta);

/// Supremum norms of f (a, b_i, c_ij) and of the constraint function h
/// (alpha, beta_i, gamma_ij) over [0, 1]^n.
struct SupNormProfile {
  double a = 0.0;
  Eigen::VectorXd b;
  Eigen::MatrixXd c;
  double alpha = 0.0;
  Eigen::VectorXd beta;
  Eigen::MatrixXd gamma;

  static SupNormProfile zeros(Eigen::Index n);
  Eigen::Index dimension() const { return b.size(); }
  // Throws DimensionError / DomainError on inconsistent shapes or signs.
  void validate() const;
};

/// The same profile for f and h on the C(N, 2) pair coordinates of a graph,
/// when every norm depends only on how two pairs overlap: the same pair,
/// pairs sharing one vertex, or disjoint pairs. Keeps N large cases O(1).
struct PairClassProfile {
  int vertex_count = 0;
  double a = 0.0;
  double b = 0.0;
  double c_same = 0.0;
  double c_shared = 0.0;
  double c_disjoint = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  double gamma_same = 0.0;
  double gamma_shared = 0.0;
  double gamma_disjoint = 0.0;

  Eigen::Index dimension() const { return pair_count(vertex_count); }
  // Expanded n x n form; only sensible for small N.
  SupNormProfile dense() const;
};

/// Profile of f = sum_i zeta_i T_i and h = T_1 - N^2 e from the closed-form
/// derivative bounds of each T_i. alpha, beta, gamma for h are exact.
PairClassProfile ergm_profile(const ModelSpec& model);

// The explicit lower-bound constants: delta_0, epsilon_0 = 2 sqrt(6/n), eta_0.
struct LowerBoundConstants {
  double delta0 = 0.0;
  double eps0 = 0.0;
  double eta0 = 0.0;
};

LowerBoundConstants lower_bound_constants(const SupNormProfile& profile);
LowerBoundConstants lower_bound_constants(const PairClassProfile& profile);

// m and n for a pair-class profile, per overlap class.
struct PairClassTerms {
  double m = 0.0;
  double n_same = 0.0;
  double n_shared = 0.0;
  double n_disjoint = 0.0;
};

/// All quantities of the constrained upper and lower bounds. Each window is
/// recorded next to the bound it belongs to: the upper bound takes its sup
/// over |h| <= (t + delta) n, the lower bound over |h| <= (t - delta0) n.
struct Main1Report {
  Eigen::Index n = 0;
  double t = 0.0;
  double delta = 0.0;
  double eps = 0.0;
  double K = 0.0;
  double l = 0.0;
  Eigen::VectorXd m;         // dense profiles only
  Eigen::MatrixXd n_matrix;  // dense profiles only
  std::optional<PairClassTerms> pair_terms;
  double log_card_f = 0.0;
  double log_card_h = 0.0;
  double complexity_term = 0.0;
  double smoothness_term = 0.0;
  double delta0 = 0.0;
  double eps0 = 0.0;
  double eta0 = 0.0;
  double upper_window = 0.0;  // t + delta
  double lower_window = 0.0;  // t - delta0
  // complexity + smoothness: the amount added to the sup in the upper bound.
  double upper_slack() const { return complexity_term + smoothness_term; }
  // eps0 n + eta0 n + log 2: the amount subtracted in the lower bound.
  double lower_slack() const;
};

/// Throws DimensionError for n = 0 and DegenerateProfileError when
/// sum beta_i^2 = 0 (the complexity log term is then -inf).
Main1Report main1_terms(const SupNormProfile& profile, double t, double delta, double eps, double log_card_f,
                        double log_card_h);
Main1Report main1_terms(const PairClassProfile& profile, double t, double delta, double eps, double log_card_f,
                        double log_card_h);

// constrained_sup - eps0 n - eta0 n - log 2. The sup must be taken over the
// window t - delta0.
double main1_lower_bound(const SupNormProfile& profile, double constrained_sup);

// Unconstrained counterpart: complexity and smoothness terms for f alone,
// and the lower-bound slack (1/2) sum c_ii.
struct CD1Report {
  double complexity_term = 0.0;
  double smoothness_term = 0.0;
  double lower_slack = 0.0;
};
CD1Report cd1_terms(double a, const Eigen::VectorXd& b, const Eigen::MatrixXd& c, double eps, double log_card);

using CubeFunction = std::function<double(const Eigen::VectorXd&)>;

inline constexpr int kBruteForceMaxDimension = 22;

// log sum_{x in {0,1}^n} exp(f(x)).
double brute_F(const CubeFunction& f, int n);
// log sum over corners with |h(x)| <= t n of exp(f(x)).
double brute_Fc(const CubeFunction& f, const CubeFunction& h, double t, int n);

/// max of f(x) - I(x) over the grid {0, 1/r, ..., 1}^n (r = resolution
/// cells per axis) restricted to |h(x)| <= window n. A lower bound for the
/// constrained sup over [0, 1]^n; doubling r never decreases it.
double grid_sup(const CubeFunction& f, const CubeFunction& h, double window, int resolution, int n);

}  // namespace cergm
