#pragma once

#include <cstdint>
#include <vector>

#include "cergm/model.hpp"

namespace cergm {

/// One sweep is C(N, 2) proposed moves. Each move is an edge swap (remove a
/// present pair, add an absent one; edge count unchanged) with probability
/// `move_mix`, otherwise a single-pair toggle.
struct ChainConfig {
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  long sweeps = 10000;
  long burn_in = 1000;
  long thin = 1;
  double move_mix = 0.5;
  // Every audit_interval-th move, recount all motifs from scratch and compare
  // against the incremental counts (0 disables).
  long audit_interval = 0;
  bool record_trace = false;

  void validate() const;
};

struct MotifEstimate {
  double mean = 0.0;
  // Batch-means standard error; accounts for autocorrelation.
  double std_error = 0.0;
};

// Per-chain CSV row: sweep, edge_count, t_H1..t_Hs, accept_rate, window_reject_rate.
struct TraceRow {
  long sweep = 0;
  int edge_count = 0;
  std::vector<double> densities;
  double accept_rate = 0.0;
  double window_reject_rate = 0.0;
};

struct ChainStats {
  std::vector<MotifEstimate> motifs;  // t(H_i, G) for each model motif
  MotifEstimate energy_density;       // sum_i zeta_i t(H_i, G)
  std::vector<std::uint64_t> edge_histogram;  // index = edge count
  std::vector<double> pair_marginals;         // fraction of samples containing each pair
  long samples = 0;
  long moves = 0;
  double accept_rate = 0.0;
  double window_reject_rate = 0.0;  // proposals leaving the window
  double null_move_rate = 0.0;      // swaps with no present or no absent pair
  double rhat_edge_density = 1.0;   // split-chain potential scale reduction
  long audited_moves = 0;
  std::vector<TraceRow> trace;
};

/// Metropolis chain targeting the conditional measure restricted to the
/// model's edge-density window. The chain starts from the first k0 pairs in
/// lexicographic order, k0 = round(e N^2 / 2) clamped into the window.
/// Throws InfeasibleError for an empty window and ConfigError when toggles
/// alone cannot move (t < 2/N^2 with move_mix = 0).
ChainStats run_chain(const ModelSpec& model, const ChainConfig& config);

struct TINode {
  double u = 0.0;
  double weight = 0.0;
  double integrand = 0.0;  // sum_i zeta_i E_{u zeta}[t(H_i, G)]
  double std_error = 0.0;
  double accept_rate = 0.0;
};

struct TIEstimate {
  double psi_estimate = 0.0;
  double zero_point = 0.0;  // truncated_binomial_psi(N, e, t)
  int quadrature_nodes = 0;
  double std_error = 0.0;
  std::vector<TINode> nodes;
};

/// psi(zeta) = psi(0) + int_0^1 sum_i zeta_i E_{u zeta}[t(H_i, G)] du with
/// Gauss-Legendre quadrature, one chain per node on stream config.stream + j.
/// Chains run on up to `threads` workers; the result does not depend on it.
TIEstimate thermo_integrate(const ModelSpec& model, const ChainConfig& config, int nodes, int threads = 1);

}  // namespace cergm
