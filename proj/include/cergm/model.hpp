#pragma once

#include <optional>
#include <vector>

#include "cergm/graph.hpp"

namespace cergm {

// Edge-density window |e(G) - e| <= t, where e(G) = 2|E(G)|/N^2.
struct ConstraintSpec {
  double e = 0.5;
  double t = 0.1;

  // Half-width of the same window written as |T_1(x) - N^2 e| <= t' n.
  double t_prime(int vertex_count) const;
  void validate() const;
};

// Relative slack when testing an edge density against a window boundary, so
// that densities landing on the boundary up to rounding count as inside.
inline constexpr double kWindowTolerance = 1e-12;

bool in_window(const ConstraintSpec& c, double density);
bool in_window(const ConstraintSpec& c, int vertex_count, int edge_count);

// Smallest and largest edge counts k with 2k/N^2 inside the window. Throws
// InfeasibleError naming the nearest achievable density when none exists.
std::pair<int, int> window_edge_range(const ConstraintSpec& c, int vertex_count);

/// Motifs H_1..H_s with parameters zeta_1..zeta_s on N vertices, optionally
/// conditioned on an edge-density window. H_1 is always the single edge.
struct ModelSpec {
  int vertex_count = 0;
  std::vector<GraphMotif> motifs;
  std::vector<double> zetas;
  std::optional<ConstraintSpec> constraint;

  // B = 1 + sum |zeta_i|.
  double B() const;
  // Throws DomainError on a malformed model.
  void validate() const;
  ModelSpec unconstrained() const;
  ModelSpec with_zetas(std::vector<double> z) const;
};

// Model with H_1 = edge followed by the given extra motifs.
ModelSpec make_model(int vertex_count, std::vector<GraphMotif> extra_motifs, std::vector<double> zetas,
                     std::optional<ConstraintSpec> constraint = std::nullopt);

}  // namespace cergm
