#include "cergm/nld_bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>

#include "cergm/errors.hpp"
#include "cergm/log_sum_exp.hpp"
#include "cergm/variational.hpp"

namespace cergm {

namespace {

const double kLog2 = std::numbers::ln2;

// Sufficient statistics of the smoothness term for a profile (l, m, n).
struct SmoothnessSums {
  double diag = 0.0;   // sum_i (l n_ii + m_i^2)
  double pairs = 0.0;  // sum_{i,j} (l n_ij^2 + m_i m_j n_ij + 4 m_i n_ij)
  double sum_m2 = 0.0;
  double sum_nii2 = 0.0;
  double sum_nii = 0.0;
};

double smoothness_from(const SmoothnessSums& s) {
  return 4.0 * std::sqrt(s.diag + 0.25 * s.pairs) + 0.25 * std::sqrt(s.sum_m2) * std::sqrt(s.sum_nii2) +
         3.0 * s.sum_nii + kLog2;
}

SmoothnessSums dense_sums(double l, const Eigen::VectorXd& m, const Eigen::MatrixXd& nm) {
  SmoothnessSums s;
  const Eigen::VectorXd d = nm.diagonal();
  s.diag = l * d.sum() + m.squaredNorm();
  s.pairs = l * nm.squaredNorm() + m.dot(nm * m) + 4.0 * (m.transpose() * nm).sum();
  s.sum_m2 = m.squaredNorm();
  s.sum_nii2 = d.squaredNorm();
  s.sum_nii = d.sum();
  return s;
}

void check_bound_inputs(Eigen::Index n, double delta, double eps) {
  if (n == 0) throw DimensionError("profile dimension n must be positive");
  if (!(delta > 0.0)) throw DomainError("delta must be positive");
  if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
}

double complexity_from(double n, double sum_m2, double sum_beta2, double K, double delta, double eps,
                       double log_card_f, double log_card_h) {
  if (!(sum_beta2 > 0.0))
    throw DegenerateProfileError("sum of beta_i^2 is zero; the complexity log term diverges");
  return 0.25 * std::sqrt(n * sum_m2) * eps + 3.0 * n * eps +
         std::log(12.0 * K * std::sqrt(sum_beta2 / n) / (delta * eps)) + log_card_f + log_card_h;
}

}  // namespace

double cutoff_g(double x) {
  if (x <= -1.0) return -1.0;
  if (x >= 0.0) return 0.0;
  const double y = x + 1.0;
  return y * y * y * (10.0 + y * (-15.0 + 6.0 * y)) - 1.0;
}

double cutoff_g_prime(double x) {
  if (x <= -1.0 || x >= 0.0) return 0.0;
  const double y = x + 1.0;
  return 30.0 * y * y * (1.0 - y) * (1.0 - y);
}

double cutoff_g_second(double x) {
  if (x <= -1.0 || x >= 0.0) return 0.0;
  const double y = x + 1.0;
  return 60.0 * y * (1.0 - y) * (1.0 - 2.0 * y);
}

double cutoff_psi(double x, double K, double t, double delta) {
  if (!(K > 0.0) || !(delta > 0.0) || !(t >= 0.0)) throw DomainError("cutoff_psi needs K, delta > 0 and t >= 0");
  return K * cutoff_g((t - std::abs(x)) / delta);
}

SupNormProfile SupNormProfile::zeros(Eigen::Index n) {
  SupNormProfile p;
  p.b = Eigen::VectorXd::Zero(n);
  p.c = Eigen::MatrixXd::Zero(n, n);
  p.beta = Eigen::VectorXd::Zero(n);
  p.gamma = Eigen::MatrixXd::Zero(n, n);
  return p;
}

void SupNormProfile::validate() const {
  const Eigen::Index n = b.size();
  if (beta.size() != n || c.rows() != n || c.cols() != n || gamma.rows() != n || gamma.cols() != n)
    throw DimensionError("sup-norm profile shapes disagree");
  if (a < 0.0 || alpha < 0.0 || (b.array() < 0.0).any() || (beta.array() < 0.0).any() || (c.array() < 0.0).any() ||
      (gamma.array() < 0.0).any())
    throw DomainError("sup norms must be nonnegative");
  if (!c.isApprox(c.transpose()) || !gamma.isApprox(gamma.transpose()))
    throw DomainError("second-derivative norm matrices must be symmetric");
}

SupNormProfile PairClassProfile::dense() const {
  const int N = vertex_count;
  const Eigen::Index n = dimension();
  SupNormProfile p = SupNormProfile::zeros(n);
  p.a = a;
  p.alpha = alpha;
  p.b.setConstant(b);
  p.beta.setConstant(beta);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int d = distinct_vertices(pair_from_index(N, i), pair_from_index(N, j));
      p.c(i, j) = d == 2 ? c_same : (d == 3 ? c_shared : c_disjoint);
      p.gamma(i, j) = d == 2 ? gamma_same : (d == 3 ? gamma_shared : gamma_disjoint);
    }
  return p;
}

PairClassProfile ergm_profile(const ModelSpec& model) {
  model.validate();
  if (!model.constraint) throw DomainError("the constraint function h needs a constrained model");
  const double N = model.vertex_count;
  PairClassProfile p;
  p.vertex_count = model.vertex_count;
  for (std::size_t i = 0; i < model.motifs.size(); ++i) {
    const auto bounds = t_derivative_bounds(model.motifs[i], model.vertex_count);
    const double z = std::abs(model.zetas[i]);
    p.a += z * bounds.sup_T;
    p.b += z * bounds.sup_grad;
    p.c_same += z * bounds.sup_hess_overlap;
    p.c_shared += z * bounds.sup_hess_overlap;
    p.c_disjoint += z * bounds.sup_hess_disjoint;
  }
  // h = T_1 - N^2 e with T_1 ranging over [0, N(N - 1)]; dT_1/dx_ij = 2.
  const double e = model.constraint->e;
  p.alpha = std::max(N * N * e, N * (N - 1.0) - N * N * e);
  p.beta = 2.0;
  return p;
}

LowerBoundConstants lower_bound_constants(const SupNormProfile& profile) {
  profile.validate();
  const double n = static_cast<double>(profile.dimension());
  if (n == 0.0) throw DimensionError("profile dimension n must be positive");
  LowerBoundConstants k;
  const double s6 = std::sqrt(6.0);
  k.delta0 = s6 / n * std::sqrt(profile.alpha * profile.gamma.diagonal().sum() + profile.beta.squaredNorm());
  k.eps0 = 2.0 * std::sqrt(6.0 / n);
  k.eta0 = s6 / n * std::sqrt(profile.a * profile.c.diagonal().sum() + profile.b.squaredNorm());
  return k;
}

LowerBoundConstants lower_bound_constants(const PairClassProfile& profile) {
  const double n = static_cast<double>(profile.dimension());
  if (n == 0.0) throw DimensionError("profile dimension n must be positive");
  LowerBoundConstants k;
  const double s6 = std::sqrt(6.0);
  k.delta0 = s6 / n * std::sqrt(n * (profile.alpha * profile.gamma_same + profile.beta * profile.beta));
  k.eps0 = 2.0 * std::sqrt(6.0 / n);
  k.eta0 = s6 / n * std::sqrt(n * (profile.a * profile.c_same + profile.b * profile.b));
  return k;
}

double Main1Report::lower_slack() const {
  const double nn = static_cast<double>(n);
  return eps0 * nn + eta0 * nn + kLog2;
}

Main1Report main1_terms(const SupNormProfile& profile, double t, double delta, double eps, double log_card_f,
                        double log_card_h) {
  profile.validate();
  const Eigen::Index dim = profile.dimension();
  check_bound_inputs(dim, delta, eps);
  const double n = static_cast<double>(dim);

  Main1Report r;
  r.n = dim;
  r.t = t;
  r.delta = delta;
  r.eps = eps;
  r.log_card_f = log_card_f;
  r.log_card_h = log_card_h;
  r.K = kLog2 + 2.0 * profile.a / n;
  r.l = profile.a + n * r.K;
  r.m = profile.b + (2.0 * r.K / delta) * profile.beta;
  r.n_matrix = profile.c + (2.0 * r.K / delta) * profile.gamma +
               (6.0 * r.K / (n * delta * delta)) * (profile.beta * profile.beta.transpose());

  r.complexity_term = complexity_from(n, r.m.squaredNorm(), profile.beta.squaredNorm(), r.K, delta, eps,
                                      log_card_f, log_card_h);
  r.smoothness_term = smoothness_from(dense_sums(r.l, r.m, r.n_matrix));

  const auto k = lower_bound_constants(profile);
  r.delta0 = k.delta0;
  r.eps0 = k.eps0;
  r.eta0 = k.eta0;
  r.upper_window = t + delta;
  r.lower_window = t - k.delta0;
  return r;
}

Main1Report main1_terms(const PairClassProfile& profile, double t, double delta, double eps, double log_card_f,
                        double log_card_h) {
  const Eigen::Index dim = profile.dimension();
  check_bound_inputs(dim, delta, eps);
  const double n = static_cast<double>(dim);
  const double N = profile.vertex_count;

  Main1Report r;
  r.n = dim;
  r.t = t;
  r.delta = delta;
  r.eps = eps;
  r.log_card_f = log_card_f;
  r.log_card_h = log_card_h;
  r.K = kLog2 + 2.0 * profile.a / n;
  r.l = profile.a + n * r.K;

  PairClassTerms pt;
  const double rank_one = 6.0 * r.K * profile.beta * profile.beta / (n * delta * delta);
  pt.m = profile.b + 2.0 * r.K * profile.beta / delta;
  pt.n_same = profile.c_same + 2.0 * r.K * profile.gamma_same / delta + rank_one;
  pt.n_shared = profile.c_shared + 2.0 * r.K * profile.gamma_shared / delta + rank_one;
  pt.n_disjoint = profile.c_disjoint + 2.0 * r.K * profile.gamma_disjoint / delta + rank_one;
  r.pair_terms = pt;

  // Per coordinate: 1 identical pair, 2(N - 2) sharing a vertex, C(N - 2, 2) disjoint.
  const double shared = 2.0 * (N - 2.0);
  const double disjoint = (N - 2.0) * (N - 3.0) / 2.0;
  auto pair_term = [&](double nc) { return r.l * nc * nc + pt.m * pt.m * nc + 4.0 * pt.m * nc; };
  SmoothnessSums s;
  s.diag = n * (r.l * pt.n_same + pt.m * pt.m);
  s.pairs = n * (pair_term(pt.n_same) + shared * pair_term(pt.n_shared) + disjoint * pair_term(pt.n_disjoint));
  s.sum_m2 = n * pt.m * pt.m;
  s.sum_nii2 = n * pt.n_same * pt.n_same;
  s.sum_nii = n * pt.n_same;

  r.complexity_term =
      complexity_from(n, s.sum_m2, n * profile.beta * profile.beta, r.K, delta, eps, log_card_f, log_card_h);
  r.smoothness_term = smoothness_from(s);

  const auto k = lower_bound_constants(profile);
  r.delta0 = k.delta0;
  r.eps0 = k.eps0;
  r.eta0 = k.eta0;
  r.upper_window = t + delta;
  r.lower_window = t - k.delta0;
  return r;
}

double main1_lower_bound(const SupNormProfile& profile, double constrained_sup) {
  const auto k = lower_bound_constants(profile);
  const double n = static_cast<double>(profile.dimension());
  return constrained_sup - k.eps0 * n - k.eta0 * n - kLog2;
}

CD1Report cd1_terms(double a, const Eigen::VectorXd& b, const Eigen::MatrixXd& c, double eps, double log_card) {
  const Eigen::Index dim = b.size();
  if (dim == 0) throw DimensionError("profile dimension n must be positive");
  if (c.rows() != dim || c.cols() != dim) throw DimensionError("c must be n x n");
  if (!(eps > 0.0)) throw DomainError("epsilon must be positive");
  const double n = static_cast<double>(dim);
  CD1Report r;
  r.complexity_term = 0.25 * std::sqrt(n * b.squaredNorm()) * eps + 3.0 * n * eps + log_card;
  r.smoothness_term = smoothness_from(dense_sums(a, b, c));
  r.lower_slack = 0.5 * c.diagonal().sum();
  return r;
}

namespace {

void check_cube_dimension(int n) {
  if (n < 1) throw DimensionError("cube dimension must be positive");
  if (n > kBruteForceMaxDimension)
    throw SizeError("brute-force sums limited to n <= " + std::to_string(kBruteForceMaxDimension));
}

template <class Visit>
void for_each_corner(int n, Visit&& visit) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(n);
  const std::uint64_t count = std::uint64_t{1} << n;
  for (std::uint64_t mask = 0; mask < count; ++mask) {
    for (int i = 0; i < n; ++i) x(i) = static_cast<double>((mask >> i) & 1U);
    visit(static_cast<const Eigen::VectorXd&>(x));
  }
}

}  // namespace

double brute_F(const CubeFunction& f, int n) {
  check_cube_dimension(n);
  LogSumExp acc;
  for_each_corner(n, [&](const Eigen::VectorXd& x) { acc.add(f(x)); });
  return acc.value();
}

double brute_Fc(const CubeFunction& f, const CubeFunction& h, double t, int n) {
  check_cube_dimension(n);
  LogSumExp acc;
  for_each_corner(n, [&](const Eigen::VectorXd& x) {
    if (std::abs(h(x)) <= t * n) acc.add(f(x));
  });
  if (acc.empty()) throw InfeasibleError("no corner of the cube satisfies |h(x)| <= t n");
  return acc.value();
}

double grid_sup(const CubeFunction& f, const CubeFunction& h, double window, int resolution, int n) {
  if (n < 1) throw DimensionError("cube dimension must be positive");
  if (n > 4) throw SizeError("grid_sup limited to n <= 4");
  if (resolution < 2) throw DomainError("grid resolution must be at least 2");
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  Eigen::VectorXd x(n);
  double best = -std::numeric_limits<double>::infinity();
  bool feasible = false;
  while (true) {
    double entropy = 0.0;
    for (int i = 0; i < n; ++i) {
      x(i) = static_cast<double>(idx[static_cast<std::size_t>(i)]) / resolution;
      entropy += entropy_scalar(x(i));
    }
    if (std::abs(h(x)) <= window * n) {
      feasible = true;
      best = std::max(best, f(x) - entropy);
    }
    int i = 0;
    while (i < n && idx[static_cast<std::size_t>(i)] == resolution) idx[static_cast<std::size_t>(i++)] = 0;
    if (i == n) break;
    ++idx[static_cast<std::size_t>(i)];
  }
  if (!feasible) throw InfeasibleError("no grid point satisfies the constraint");
  return best;
}

}  // namespace cergm
