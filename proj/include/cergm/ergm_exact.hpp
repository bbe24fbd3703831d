#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cergm/model.hpp"

namespace cergm {

// Default ceiling for exhaustive enumeration. N = 8 (2^28 graphs) has to be
// requested explicitly; nothing above 8 is supported.
inline constexpr int kDefaultExactMaxVertices = 7;
inline constexpr int kHardExactMaxVertices = 8;
inline constexpr std::size_t kMaxTrackedMotifs = 6;

struct ExactOptions {
  int max_vertices = kDefaultExactMaxVertices;
  int threads = 1;
  // Called after each finished sub-cube with (finished, total); calls are
  // serialized but may come from any worker.
  std::function<void(int, int)> progress;

  // Defaults with the size gate taken from CERGM_MAX_N when set.
  static ExactOptions from_environment();
};

/// Multiplicities of the hom-count vectors (hom(H_1, G), ..., hom(H_s, G))
/// over all 2^{C(N,2)} graphs G. Every partition function, conditional
/// partition function and expectation of a model on these motifs is a finite
/// sum over the histogram, so one enumeration serves any zeta and any window.
class CountHistogram {
 public:
  using Key = std::array<std::uint64_t, kMaxTrackedMotifs>;

  struct Entry {
    Key homs{};
    std::uint64_t multiplicity = 0;
  };

  CountHistogram(int vertex_count, std::vector<GraphMotif> motifs, std::vector<Entry> entries);

  int vertex_count() const { return n_; }
  const std::vector<GraphMotif>& motifs() const { return motifs_; }
  // Sorted by key.
  const std::vector<Entry>& entries() const { return entries_; }
  std::uint64_t total_graphs() const;
  std::uint64_t graphs_in_window(const std::optional<ConstraintSpec>& window) const;

  // N^2 sum_i zeta_i t(H_i, G) for an entry.
  double energy(const Entry& entry, std::span<const double> zetas) const;
  // Edge count of the graphs of an entry (motif 0 is the single edge).
  int edge_count(const Entry& entry) const { return static_cast<int>(entry.homs[0] / 2); }

  // log sum_G exp(energy), restricted to the window when given. Throws
  // InfeasibleError when no graph lies in the window.
  double log_partition(std::span<const double> zetas, const std::optional<ConstraintSpec>& window) const;
  // log_partition / N^2.
  double psi(std::span<const double> zetas, const std::optional<ConstraintSpec>& window) const;
  // E[t(H_motif, G)] under the (conditional) measure.
  double expectation(std::size_t motif, std::span<const double> zetas,
                     const std::optional<ConstraintSpec>& window) const;

 private:
  int n_;
  std::vector<GraphMotif> motifs_;
  std::vector<Entry> entries_;
  std::vector<double> normalizers_;  // N^{k_i}
};

/// Walks every graph on N vertices in Gray-code order, updating motif hom
/// counts incrementally, split across `threads` workers by sub-cube. The
/// result does not depend on the worker count.
CountHistogram enumerate_counts(int vertex_count, std::span<const GraphMotif> motifs, const ExactOptions& options = {});

// psi_N^zeta, ignoring any constraint on the model.
double psi_exact(const ModelSpec& model, const ExactOptions& options = {});
// psi_{N,t}^{e,zeta}; the model must carry a constraint.
double psi_cond_exact(const ModelSpec& model, const ExactOptions& options = {});

// N^{-2} log sum_{k : |2k/N^2 - e| <= t} C(n, k), the zeta = 0 conditional
// constant, with the binomial sum carried out in exact integer arithmetic.
double truncated_binomial_psi(int vertex_count, const ConstraintSpec& window);
// Exact law of the edge count at zeta = 0 conditioned on the window: entry k
// is C(n, k) / sum, zero outside the window.
std::vector<double> truncated_binomial_pmf(int vertex_count, const ConstraintSpec& window);

// Probability of g under the (conditional) measure; 0 outside the window.
double cond_prob_mass(const ModelSpec& model, const SimpleGraph& g, const ExactOptions& options = {});
double cond_prob_mass(const ModelSpec& model, const CountHistogram& histogram, const SimpleGraph& g);

// E[t(H, G)] under the model's (conditional) measure.
double expectation_exact(const ModelSpec& model, const GraphMotif& h, const ExactOptions& options = {});

// Motif list with `h` appended unless an identical motif is present; returns
// its index through `index`.
std::vector<GraphMotif> motifs_with(const std::vector<GraphMotif>& motifs, const GraphMotif& h, std::size_t& index);

}  // namespace cergm
