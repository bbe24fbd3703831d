#include "cergm/mcmc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <thread>

#include "cergm/ergm_exact.hpp"
#include "cergm/errors.hpp"
#include "cergm/quadrature.hpp"
#include "cergm/rng.hpp"

namespace cergm {

namespace {

constexpr int kBatches = 32;

// Pairs split into present and absent lists with O(1) moves between them.
class PairSets {
 public:
  explicit PairSets(int pairs) : slot_(static_cast<std::size_t>(pairs)) {}

  void insert_absent(int p) { place(absent_, p); }
  void insert_present(int p) { place(present_, p); }

  void make_present(int p) {
    take(absent_, p);
    place(present_, p);
  }
  void make_absent(int p) {
    take(present_, p);
    place(absent_, p);
  }

  const std::vector<int>& present() const { return present_; }
  const std::vector<int>& absent() const { return absent_; }

 private:
  void place(std::vector<int>& list, int p) {
    slot_[static_cast<std::size_t>(p)] = static_cast<int>(list.size());
    list.push_back(p);
  }
  void take(std::vector<int>& list, int p) {
    const int at = slot_[static_cast<std::size_t>(p)];
    const int last = list.back();
    list[static_cast<std::size_t>(at)] = last;
    slot_[static_cast<std::size_t>(last)] = at;
    list.pop_back();
  }

  std::vector<int> slot_;
  std::vector<int> present_;
  std::vector<int> absent_;
};

MotifEstimate batch_means(const std::vector<double>& xs) {
  MotifEstimate out;
  const std::size_t n = xs.size();
  if (n == 0) return out;
  long double sum = 0.0L;
  for (double x : xs) sum += x;
  out.mean = static_cast<double>(sum / n);
  const std::size_t batches = std::min<std::size_t>(kBatches, n / 2);
  if (batches < 2) return out;
  const std::size_t size = n / batches;
  long double sq = 0.0L;
  for (std::size_t b = 0; b < batches; ++b) {
    long double s = 0.0L;
    for (std::size_t i = b * size; i < (b + 1) * size; ++i) s += xs[i];
    const long double d = s / size - out.mean;
    sq += d * d;
  }
  out.std_error = static_cast<double>(std::sqrt(sq / (batches - 1) / batches));
  return out;
}

double split_rhat(const std::vector<double>& xs) {
  const std::size_t half = xs.size() / 2;
  if (half < 2) return 1.0;
  double mean[2], var[2];
  for (int c = 0; c < 2; ++c) {
    long double s = 0.0L;
    for (std::size_t i = 0; i < half; ++i) s += xs[c * half + i];
    mean[c] = static_cast<double>(s / half);
    long double q = 0.0L;
    for (std::size_t i = 0; i < half; ++i) {
      const long double d = xs[c * half + i] - mean[c];
      q += d * d;
    }
    var[c] = static_cast<double>(q / (half - 1));
  }
  const double w = 0.5 * (var[0] + var[1]);
  const double grand = 0.5 * (mean[0] + mean[1]);
  const double b = static_cast<double>(half) *
                   ((mean[0] - grand) * (mean[0] - grand) + (mean[1] - grand) * (mean[1] - grand));
  if (w <= 0.0) return b > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  const double nh = static_cast<double>(half);
  return std::sqrt(((nh - 1.0) / nh * w + b / nh) / w);
}

}  // namespace

void ChainConfig::validate() const {
  if (burn_in < 0 || sweeps <= burn_in) throw ConfigError("chain needs sweeps > burn_in >= 0");
  if (thin < 1) throw ConfigError("chain thin must be >= 1");
  if (!(move_mix >= 0.0 && move_mix <= 1.0)) throw ConfigError("move_mix must lie in [0, 1]");
  if (audit_interval < 0) throw ConfigError("audit_interval must be >= 0");
}

ChainStats run_chain(const ModelSpec& model, const ChainConfig& config) {
  model.validate();
  config.validate();
  if (!model.constraint) throw ConfigError("the sampler needs a constrained model");
  const ConstraintSpec& window = *model.constraint;
  const int N = model.vertex_count;
  const auto [lo, hi] = window_edge_range(window, N);
  const double nn = static_cast<double>(N) * N;
  if (config.move_mix == 0.0 && window.t < 2.0 / nn)
    throw ConfigError("toggle-only chain cannot move when t < 2/N^2; set move_mix > 0");

  const int pairs = pair_count(N);
  if (pairs == 0) throw DomainError("the sampler needs N >= 2");
  const std::size_t s = model.motifs.size();
  // Energy weight of one homomorphism of motif i: N^2 zeta_i / N^{k_i}.
  std::vector<double> weight(s), normalizer(s);
  for (std::size_t i = 0; i < s; ++i) {
    normalizer[i] = hom_normalizer(model.motifs[i], N);
    weight[i] = nn * model.zetas[i] / normalizer[i];
  }

  const int k0 = std::clamp(static_cast<int>(std::lround(window.e * nn / 2.0)), lo, hi);
  SimpleGraph g(N);
  PairSets sets(pairs);
  for (int p = 0; p < pairs; ++p) {
    if (p < k0) {
      const VertexPair uv = pair_from_index(N, p);
      g.add_edge(uv.u, uv.v);
      sets.insert_present(p);
    } else {
      sets.insert_absent(p);
    }
  }
  std::vector<std::uint64_t> homs(s), delta(s), delta_in(s);
  for (std::size_t i = 0; i < s; ++i) homs[i] = hom_count(model.motifs[i], g);

  CounterRng rng(config.seed, config.stream);
  ChainStats stats;
  stats.edge_histogram.assign(static_cast<std::size_t>(pairs + 1), 0);
  std::vector<std::uint64_t> pair_hits(static_cast<std::size_t>(pairs), 0);
  std::vector<std::vector<double>> series(s);
  std::vector<double> energy_series, edge_series;
  long accepted = 0, window_rejects = 0, null_moves = 0, moves = 0;

  auto metropolis = [&](double log_ratio) { return log_ratio >= 0.0 || rng.uniform() < std::exp(log_ratio); };

  auto audit = [&] {
    for (std::size_t i = 0; i < s; ++i)
      if (hom_count(model.motifs[i], g) != homs[i]) throw NumericalError("incremental motif counts drifted");
    ++stats.audited_moves;
  };

  for (long sweep = 1; sweep <= config.sweeps; ++sweep) {
    for (int step = 0; step < pairs; ++step) {
      ++moves;
      const bool swap = config.move_mix > 0.0 && (config.move_mix >= 1.0 || rng.uniform() < config.move_mix);
      if (swap) {
        if (sets.present().empty() || sets.absent().empty()) {
          ++null_moves;
        } else {
          const int p = sets.present()[rng.below(sets.present().size())];
          const int q = sets.absent()[rng.below(sets.absent().size())];
          const VertexPair out = pair_from_index(N, p), in = pair_from_index(N, q);
          double log_ratio = 0.0;
          for (std::size_t i = 0; i < s; ++i) {
            delta[i] = hom_delta(model.motifs[i], g, out);
            log_ratio -= weight[i] * static_cast<double>(delta[i]);
          }
          g.remove_edge(out.u, out.v);
          for (std::size_t i = 0; i < s; ++i) {
            delta_in[i] = hom_delta(model.motifs[i], g, in);
            log_ratio += weight[i] * static_cast<double>(delta_in[i]);
          }
          if (metropolis(log_ratio)) {
            g.add_edge(in.u, in.v);
            for (std::size_t i = 0; i < s; ++i) homs[i] = homs[i] - delta[i] + delta_in[i];
            sets.make_absent(p);
            sets.make_present(q);
            ++accepted;
          } else {
            g.add_edge(out.u, out.v);
          }
        }
      } else {
        const int p = static_cast<int>(rng.below(static_cast<std::uint64_t>(pairs)));
        const VertexPair uv = pair_from_index(N, p);
        const bool present = g.has_edge(uv);
        const int k = g.edge_count() + (present ? -1 : 1);
        if (k < lo || k > hi) {
          ++window_rejects;
        } else {
          double log_ratio = 0.0;
          for (std::size_t i = 0; i < s; ++i) {
            delta[i] = hom_delta(model.motifs[i], g, uv);
            log_ratio += weight[i] * static_cast<double>(delta[i]);
          }
          if (present) log_ratio = -log_ratio;
          if (metropolis(log_ratio)) {
            g.toggle_edge(uv);
            for (std::size_t i = 0; i < s; ++i) homs[i] = present ? homs[i] - delta[i] : homs[i] + delta[i];
            if (present)
              sets.make_absent(p);
            else
              sets.make_present(p);
            ++accepted;
          }
        }
      }
      if (config.audit_interval > 0 && moves % config.audit_interval == 0) audit();
    }

    if (g.edge_count() < lo || g.edge_count() > hi) throw NumericalError("chain left the constraint window");
    if (sweep <= config.burn_in || (sweep - config.burn_in) % config.thin != 0) continue;

    double energy = 0.0;
    TraceRow row;
    for (std::size_t i = 0; i < s; ++i) {
      const double t = static_cast<double>(homs[i]) / normalizer[i];
      series[i].push_back(t);
      energy += model.zetas[i] * t;
      if (config.record_trace) row.densities.push_back(t);
    }
    energy_series.push_back(energy);
    edge_series.push_back(2.0 * g.edge_count() / nn);
    ++stats.edge_histogram[static_cast<std::size_t>(g.edge_count())];
    for (int p : sets.present()) ++pair_hits[static_cast<std::size_t>(p)];
    if (config.record_trace) {
      row.sweep = sweep;
      row.edge_count = g.edge_count();
      row.accept_rate = static_cast<double>(accepted) / moves;
      row.window_reject_rate = static_cast<double>(window_rejects) / moves;
      stats.trace.push_back(std::move(row));
    }
  }

  for (std::size_t i = 0; i < s; ++i) stats.motifs.push_back(batch_means(series[i]));
  stats.energy_density = batch_means(energy_series);
  stats.samples = static_cast<long>(energy_series.size());
  for (std::uint64_t hits : pair_hits)
    stats.pair_marginals.push_back(stats.samples ? static_cast<double>(hits) / stats.samples : 0.0);
  stats.moves = moves;
  stats.accept_rate = static_cast<double>(accepted) / moves;
  stats.window_reject_rate = static_cast<double>(window_rejects) / moves;
  stats.null_move_rate = static_cast<double>(null_moves) / moves;
  stats.rhat_edge_density = split_rhat(edge_series);
  return stats;
}

TIEstimate thermo_integrate(const ModelSpec& model, const ChainConfig& config, int nodes, int threads) {
  model.validate();
  config.validate();
  if (!model.constraint) throw ConfigError("thermodynamic integration needs a constrained model");
  if (nodes < 2) throw ConfigError("thermodynamic integration needs at least 2 nodes");

  TIEstimate out;
  out.zero_point = truncated_binomial_psi(model.vertex_count, *model.constraint);
  out.quadrature_nodes = nodes;
  const QuadratureRule rule = gauss_legendre(nodes);
  out.nodes.resize(static_cast<std::size_t>(nodes));
  for (int j = 0; j < nodes; ++j) {
    out.nodes[static_cast<std::size_t>(j)].u = rule.nodes[j];
    out.nodes[static_cast<std::size_t>(j)].weight = rule.weights[j];
  }

  const bool trivial = std::all_of(model.zetas.begin(), model.zetas.end(), [](double z) { return z == 0.0; });
  if (trivial) {
    out.psi_estimate = out.zero_point;
    return out;
  }

  std::atomic<int> next{0};
  auto worker = [&] {
    for (int j = next++; j < nodes; j = next++) {
      TINode& node = out.nodes[static_cast<std::size_t>(j)];
      std::vector<double> scaled(model.zetas);
      for (double& z : scaled) z *= node.u;
      ChainConfig cfg = config;
      cfg.stream = config.stream + static_cast<std::uint64_t>(j);
      cfg.record_trace = false;
      const ChainStats chain = run_chain(model.with_zetas(scaled), cfg);
      // The chain's energy is sum_i u zeta_i t_i; the integrand drops the u.
      node.integrand = chain.energy_density.mean / node.u;
      node.std_error = chain.energy_density.std_error / node.u;
      node.accept_rate = chain.accept_rate;
    }
  };
  const int workers = std::clamp(threads, 1, nodes);
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < workers; ++i) pool.emplace_back(worker);
  }

  long double sum = out.zero_point, var = 0.0L;
  for (const auto& node : out.nodes) {
    sum += static_cast<long double>(node.weight) * node.integrand;
    var += static_cast<long double>(node.weight) * node.weight * node.std_error * node.std_error;
  }
  out.psi_estimate = static_cast<double>(sum);
  out.std_error = static_cast<double>(std::sqrt(var));
  return out;
}

}  // namespace cergm
