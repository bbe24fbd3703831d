#pragma once

#include <cmath>
#include <vector>

#include "cergm/errors.hpp"
#include "cergm/model.hpp"
#include "cergm/motif_poly.hpp"

namespace cergm {

/// x log x + (1 - x) log(1 - x) with 0 log 0 = 0; lies in [-log 2, 0].
template <typename Scalar>
Scalar entropy_scalar(Scalar x) {
  using std::log;
  if (!(x >= Scalar(0) && x <= Scalar(1))) throw DomainError("entropy argument outside [0, 1]");
  auto xlogx = [](Scalar v) { return v == Scalar(0) ? Scalar(0) : v * log(v); };
  return xlogx(x) + xlogx(Scalar(1) - x);
}

// Sum of entropy_scalar over the C(N, 2) free coordinates.
template <typename Scalar>
Scalar entropy_vector(const EdgeVars<Scalar>& x) {
  Scalar total(0);
  for (int i = 0; i < x.vertex_count(); ++i)
    for (int j = i + 1; j < x.vertex_count(); ++j) total += entropy_scalar(x(i, j));
  return total;
}

/// phi(x) = sum_i zeta_i x^{m_i} - I(x) / 2 on a constant edge density x,
/// where m_i is the number of edges of motif i.
struct ScalarObjective {
  std::vector<double> zetas;
  std::vector<int> edge_counts;

  static ScalarObjective from_model(const ModelSpec& model);

  double value(double x) const;
  // phi'(x); +inf at 0 and -inf at 1.
  double derivative(double x) const;
};

// Closed interval [lo, hi] = [e - t, e + t] intersected with [0, 1].
struct Window {
  double lo = 0.0;
  double hi = 1.0;
};

// Throws InfeasibleError when the clamped window is empty.
Window clamp_window(double e, double half_width);

struct VariationalSolution {
  double argmax = 0.0;
  double value = 0.0;
  // The maximizer sits on an endpoint of the clamped window.
  bool boundary_active = false;
  Window window;
};

/// Global maximum of phi over the clamped window: candidates are the window
/// endpoints, the clamped 1/2, and every root of phi' bracketed on a
/// 1024-cell sign grid and refined by bisection.
VariationalSolution solve_constrained_scalar(const ScalarObjective& objective, const ConstraintSpec& constraint);

// Constants c, C of the asymptotic envelopes. They depend on the motifs and
// on e in an unspecified way; 1.0 is a placeholder, not a rigorous value.
struct EnvelopeConstants {
  double c = 1.0;
  double C = 1.0;
};

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
};

/// [sup - c B N^{-1/kappa},
///  sup + C B^{8/5} N^{(8-kappa)/(5 kappa)} (log N)^{1/5} (1 + log B / log N) + C B^2 N^{-1/kappa}]
/// for kappa > 8.
Interval special_envelope(double sup_value, double B, double vertex_count, double kappa,
                          EnvelopeConstants constants = {});

// Scalar suprema over the windows |x - e| <= t -+ (c/2) n^{-1/(2 kappa)}.
struct WindowSups {
  double shrunken = 0.0;
  double enlarged = 0.0;
  double shrunken_half_width = 0.0;
  double enlarged_half_width = 0.0;
  VariationalSolution shrunken_solution;
  VariationalSolution enlarged_solution;
};

/// Requires zeta_i >= 0 for i >= 2, or every H_i (i >= 2) a star; otherwise
/// the reduction to constant edge densities is not justified and
/// UnsupportedModelError is thrown. An empty shrunken window is infeasible.
WindowSups general_window_sups(const ModelSpec& model, double kappa, double c);

// Iterated natural logarithm count: 0 for N <= 1, else 1 + log_star(log N).
int log_star(double value);

}  // namespace cergm
