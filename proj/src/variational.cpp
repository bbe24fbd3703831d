#include "cergm/variational.hpp"

#include <algorithm>
#include <limits>

namespace cergm {

namespace {

constexpr int kSignGridCells = 1024;

double bisect_root(const ScalarObjective& f, double a, double b) {
  double fa = f.derivative(a);
  for (int it = 0; it < 200 && b - a > 1e-15; ++it) {
    const double mid = 0.5 * (a + b);
    const double fm = f.derivative(mid);
    if (fm == 0.0) return mid;
    if ((fm > 0.0) == (fa > 0.0)) {
      a = mid;
      fa = fm;
    } else {
      b = mid;
    }
  }
  return 0.5 * (a + b);
}

}  // namespace

ScalarObjective ScalarObjective::from_model(const ModelSpec& model) {
  ScalarObjective f;
  f.zetas = model.zetas;
  for (const auto& h : model.motifs) f.edge_counts.push_back(h.edge_count());
  return f;
}

double ScalarObjective::value(double x) const {
  double total = 0.0;
  for (std::size_t i = 0; i < zetas.size(); ++i) total += zetas[i] * std::pow(x, edge_counts[i]);
  return total - 0.5 * entropy_scalar(x);
}

double ScalarObjective::derivative(double x) const {
  if (x <= 0.0) return std::numeric_limits<double>::infinity();
  if (x >= 1.0) return -std::numeric_limits<double>::infinity();
  double total = 0.0;
  for (std::size_t i = 0; i < zetas.size(); ++i)
    total += zetas[i] * edge_counts[i] * std::pow(x, edge_counts[i] - 1);
  return total - 0.5 * (std::log(x) - std::log1p(-x));
}

Window clamp_window(double e, double half_width) {
  if (!std::isfinite(e) || !std::isfinite(half_width)) throw DomainError("window parameters must be finite");
  const Window w{std::max(0.0, e - half_width), std::min(1.0, e + half_width)};
  if (half_width < 0.0 || w.lo > w.hi) throw InfeasibleError("constraint window is empty");
  return w;
}

VariationalSolution solve_constrained_scalar(const ScalarObjective& objective, const ConstraintSpec& constraint) {
  if (objective.zetas.size() != objective.edge_counts.size())
    throw DomainError("one edge count per zeta required");
  const Window w = clamp_window(constraint.e, constraint.t);

  VariationalSolution best;
  best.window = w;
  best.value = -std::numeric_limits<double>::infinity();
  // Later candidates must win by more than rounding, so ties keep the
  // endpoints and the clamped 1/2.
  auto consider = [&](double x) {
    const double v = objective.value(x);
    if (best.value == -std::numeric_limits<double>::infinity() ||
        v > best.value + 8.0 * std::numeric_limits<double>::epsilon() * std::abs(best.value)) {
      best.value = v;
      best.argmax = x;
    }
  };
  consider(w.lo);
  consider(w.hi);
  consider(std::clamp(0.5, w.lo, w.hi));

  if (w.hi > w.lo) {
    const double width = w.hi - w.lo;
    double prev_x = w.lo;
    double prev_d = objective.derivative(prev_x);
    for (int cell = 1; cell <= kSignGridCells; ++cell) {
      const double x = cell == kSignGridCells ? w.hi : w.lo + width * cell / kSignGridCells;
      const double d = objective.derivative(x);
      if (d == 0.0) {
        consider(x);
      } else if ((prev_d > 0.0 && d < 0.0) || (prev_d < 0.0 && d > 0.0)) {
        consider(bisect_root(objective, prev_x, x));
      }
      prev_x = x;
      prev_d = d;
    }
  }
  best.boundary_active = best.argmax == w.lo || best.argmax == w.hi;
  return best;
}

Interval special_envelope(double sup_value, double B, double vertex_count, double kappa, EnvelopeConstants k) {
  if (!(kappa > 8.0)) throw ParameterError("kappa must exceed 8");
  if (!(k.c > 0.0) || !(k.C > 0.0)) throw ParameterError("envelope constants must be positive");
  if (!(B >= 1.0)) throw ParameterError("B = 1 + sum |zeta_i| is at least 1");
  if (!(vertex_count > 1.0)) throw ParameterError("envelope needs N > 1");
  const double logn = std::log(vertex_count);
  const double lower_slack = k.c * B * std::pow(vertex_count, -1.0 / kappa);
  const double upper_slack = k.C * std::pow(B, 1.6) * std::pow(vertex_count, (8.0 - kappa) / (5.0 * kappa)) *
                                 std::pow(logn, 0.2) * (1.0 + std::log(B) / logn) +
                             k.C * B * B * std::pow(vertex_count, -1.0 / kappa);
  return {sup_value - lower_slack, sup_value + upper_slack};
}

WindowSups general_window_sups(const ModelSpec& model, double kappa, double c) {
  model.validate();
  if (!model.constraint) throw DomainError("general_window_sups needs a constrained model");
  if (!(kappa > 8.0)) throw ParameterError("kappa must exceed 8");
  if (!(c >= 0.0)) throw ParameterError("window constant c must be nonnegative");
  bool nonnegative = true, stars = true;
  for (std::size_t i = 1; i < model.motifs.size(); ++i) {
    nonnegative = nonnegative && model.zetas[i] >= 0.0;
    stars = stars && model.motifs[i].is_star();
  }
  if (!nonnegative && !stars)
    throw UnsupportedModelError(
        "constant-density reduction needs zeta_i >= 0 for i >= 2 or star motifs H_i, i >= 2");

  const double n = pair_count(model.vertex_count);
  const double shift = 0.5 * c * std::pow(n, -1.0 / (2.0 * kappa));
  const auto objective = ScalarObjective::from_model(model);
  const auto& base = *model.constraint;

  WindowSups out;
  out.shrunken_half_width = base.t - shift;
  out.enlarged_half_width = base.t + shift;
  if (out.shrunken_half_width < 0.0) throw InfeasibleError("shrunken window is empty");
  out.shrunken_solution = solve_constrained_scalar(objective, {base.e, out.shrunken_half_width});
  out.enlarged_solution = solve_constrained_scalar(objective, {base.e, out.enlarged_half_width});
  out.shrunken = out.shrunken_solution.value;
  out.enlarged = out.enlarged_solution.value;
  return out;
}

int log_star(double value) {
  if (!(value >= 0.0)) throw DomainError("log* needs a nonnegative argument");
  int count = 0;
  while (value > 1.0) {
    value = std::log(value);
    ++count;
  }
  return count;
}

}  // namespace cergm
