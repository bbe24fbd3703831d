#include "cergm/ergm_exact.hpp"

#include <algorithm>
#include <atomic>
#include <boost/multiprecision/cpp_int.hpp>
#include <cstdlib>
#include <map>
#include <mutex>
#include <numbers>
#include <thread>
#include <unordered_map>

#include "cergm/enumerate.hpp"
#include "cergm/errors.hpp"
#include "cergm/log_sum_exp.hpp"

namespace cergm {

namespace {

using BigInt = boost::multiprecision::cpp_int;

struct KeyHash {
  std::size_t operator()(const CountHistogram::Key& k) const noexcept {
    std::uint64_t h = 0x9e3779b97f4a7c15ULL;
    for (std::uint64_t v : k) {
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 0xbf58476d1ce4e5b9ULL;
    }
    return static_cast<std::size_t>(h ^ (h >> 31));
  }
};

using LocalHistogram = std::unordered_map<CountHistogram::Key, std::uint64_t, KeyHash>;

// Natural log of a positive big integer from its top 64 bits.
double log_big(const BigInt& value) {
  if (value <= 0) throw NumericalError("log of a non-positive integer");
  const unsigned msb = boost::multiprecision::msb(value);
  if (msb < 63) return std::log(static_cast<double>(value.convert_to<std::uint64_t>()));
  const unsigned shift = msb - 62;
  const BigInt top = value >> shift;
  return std::log(static_cast<double>(top.convert_to<std::uint64_t>())) + shift * std::numbers::ln2;
}

BigInt binomial(int n, int k) {
  BigInt r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

bool same_motif(const GraphMotif& a, const GraphMotif& b) {
  if (a.vertex_count() != b.vertex_count() || a.edge_count() != b.edge_count()) return false;
  auto sorted = [](const GraphMotif& m) {
    std::vector<std::pair<int, int>> e;
    for (const auto& p : m.edges()) e.emplace_back(p.u, p.v);
    std::sort(e.begin(), e.end());
    return e;
  };
  return sorted(a) == sorted(b);
}

void walk_subcube(int vertex_count, std::span<const GraphMotif> motifs, SubCube cube, int max_vertices,
                  LocalHistogram& out) {
  CountHistogram::Key homs{};
  const std::size_t s = motifs.size();
  enumerate_graphs(
      vertex_count,
      [&](const SimpleGraph& g, std::optional<Toggle> toggle) {
        if (!toggle) {
          for (std::size_t i = 0; i < s; ++i) homs[i] = hom_count(motifs[i], g);
        } else {
          for (std::size_t i = 0; i < s; ++i) {
            const std::uint64_t d = hom_delta(motifs[i], g, toggle->pair);
            homs[i] = toggle->added ? homs[i] + d : homs[i] - d;
          }
        }
        ++out[homs];
      },
      cube, max_vertices);
}

void check_model_size(const ModelSpec& model, const ExactOptions& options) {
  model.validate();
  const int gate = std::min(options.max_vertices, kHardExactMaxVertices);
  if (model.vertex_count > gate)
    throw SizeError("exact enumeration is limited to N <= " + std::to_string(gate) +
                    " (raise the gate explicitly for N = 8)");
}

}  // namespace

ExactOptions ExactOptions::from_environment() {
  ExactOptions o;
  if (const char* env = std::getenv("CERGM_MAX_N")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) throw ConfigError("CERGM_MAX_N must be a positive integer");
    o.max_vertices = static_cast<int>(v);
  }
  return o;
}

CountHistogram::CountHistogram(int vertex_count, std::vector<GraphMotif> motifs, std::vector<Entry> entries)
    : n_(vertex_count), motifs_(std::move(motifs)), entries_(std::move(entries)) {
  if (motifs_.empty() || motifs_.front().kind() != MotifKind::Edge)
    throw DomainError("histogram motifs must start with the single edge");
  for (const auto& h : motifs_) normalizers_.push_back(hom_normalizer(h, n_));
}

std::uint64_t CountHistogram::total_graphs() const {
  std::uint64_t total = 0;
  for (const auto& e : entries_) total += e.multiplicity;
  return total;
}

std::uint64_t CountHistogram::graphs_in_window(const std::optional<ConstraintSpec>& window) const {
  std::uint64_t total = 0;
  for (const auto& e : entries_)
    if (!window || in_window(*window, n_, edge_count(e))) total += e.multiplicity;
  return total;
}

double CountHistogram::energy(const Entry& entry, std::span<const double> zetas) const {
  if (zetas.size() != motifs_.size()) throw DomainError("one zeta per histogram motif required");
  const double nn = static_cast<double>(n_) * n_;
  double total = 0.0;
  for (std::size_t i = 0; i < zetas.size(); ++i)
    total += zetas[i] * static_cast<double>(entry.homs[i]) / normalizers_[i];
  return nn * total;
}

double CountHistogram::log_partition(std::span<const double> zetas,
                                     const std::optional<ConstraintSpec>& window) const {
  LogSumExp acc;
  for (const auto& e : entries_)
    if (!window || in_window(*window, n_, edge_count(e)))
      acc.add(energy(e, zetas), static_cast<long double>(e.multiplicity));
  if (acc.empty()) window_edge_range(*window, n_);  // throws with the nearest density
  const double v = acc.value();
  if (!std::isfinite(v)) throw NumericalError("log partition function is not finite");
  return v;
}

double CountHistogram::psi(std::span<const double> zetas, const std::optional<ConstraintSpec>& window) const {
  return log_partition(zetas, window) / (static_cast<double>(n_) * n_);
}

double CountHistogram::expectation(std::size_t motif, std::span<const double> zetas,
                                   const std::optional<ConstraintSpec>& window) const {
  if (motif >= motifs_.size()) throw DomainError("motif index out of range");
  const double log_z = log_partition(zetas, window);
  long double total = 0.0L;
  for (const auto& e : entries_) {
    if (window && !in_window(*window, n_, edge_count(e))) continue;
    const long double w =
        static_cast<long double>(e.multiplicity) * std::exp(static_cast<long double>(energy(e, zetas) - log_z));
    total += w * (static_cast<long double>(e.homs[motif]) / normalizers_[motif]);
  }
  return static_cast<double>(total);
}

CountHistogram enumerate_counts(int vertex_count, std::span<const GraphMotif> motifs, const ExactOptions& options) {
  const int gate = std::min(options.max_vertices, kHardExactMaxVertices);
  if (vertex_count < 1) throw DomainError("N must be positive");
  if (vertex_count > gate) throw SizeError("exact enumeration is limited to N <= " + std::to_string(gate));
  if (motifs.empty() || motifs.size() > kMaxTrackedMotifs)
    throw DomainError("between 1 and " + std::to_string(kMaxTrackedMotifs) + " motifs can be tracked");

  const int n = pair_count(vertex_count);
  const int fixed_bits = std::min(n, n >= 16 ? 6 : 0);
  const int chunks = 1 << fixed_bits;
  std::vector<LocalHistogram> parts(static_cast<std::size_t>(chunks));
  std::atomic<int> next{0};
  int finished = 0;
  std::mutex progress_mutex;
  auto worker = [&] {
    for (int c = next++; c < chunks; c = next++) {
      walk_subcube(vertex_count, motifs, {fixed_bits, static_cast<std::uint64_t>(c)}, gate,
                   parts[static_cast<std::size_t>(c)]);
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        options.progress(++finished, chunks);
      }
    }
  };
  const int threads = std::clamp(options.threads, 1, chunks);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  std::map<CountHistogram::Key, std::uint64_t> merged;
  for (const auto& part : parts)
    for (const auto& [key, count] : part) merged[key] += count;
  std::vector<CountHistogram::Entry> entries;
  entries.reserve(merged.size());
  for (const auto& [key, count] : merged) entries.push_back({key, count});
  return CountHistogram(vertex_count, {motifs.begin(), motifs.end()}, std::move(entries));
}

double psi_exact(const ModelSpec& model, const ExactOptions& options) {
  check_model_size(model, options);
  const auto hist = enumerate_counts(model.vertex_count, model.motifs, options);
  return hist.psi(model.zetas, std::nullopt);
}

double psi_cond_exact(const ModelSpec& model, const ExactOptions& options) {
  check_model_size(model, options);
  if (!model.constraint) throw DomainError("psi_cond_exact needs a constrained model");
  window_edge_range(*model.constraint, model.vertex_count);
  const auto hist = enumerate_counts(model.vertex_count, model.motifs, options);
  return hist.psi(model.zetas, model.constraint);
}

double truncated_binomial_psi(int vertex_count, const ConstraintSpec& window) {
  if (vertex_count < 1) throw DomainError("N must be positive");
  const auto [lo, hi] = window_edge_range(window, vertex_count);
  const int n = pair_count(vertex_count);
  BigInt total = 0;
  for (int k = lo; k <= hi; ++k) total += binomial(n, k);
  return log_big(total) / (static_cast<double>(vertex_count) * vertex_count);
}

std::vector<double> truncated_binomial_pmf(int vertex_count, const ConstraintSpec& window) {
  const auto [lo, hi] = window_edge_range(window, vertex_count);
  const int n = pair_count(vertex_count);
  BigInt total = 0;
  for (int k = lo; k <= hi; ++k) total += binomial(n, k);
  const double log_total = log_big(total);
  std::vector<double> pmf(static_cast<std::size_t>(n + 1), 0.0);
  for (int k = lo; k <= hi; ++k) pmf[static_cast<std::size_t>(k)] = std::exp(log_big(binomial(n, k)) - log_total);
  return pmf;
}

double cond_prob_mass(const ModelSpec& model, const CountHistogram& histogram, const SimpleGraph& g) {
  model.validate();
  if (g.vertex_count() != model.vertex_count) throw DomainError("graph size differs from the model");
  if (model.constraint && !in_window(*model.constraint, g.vertex_count(), g.edge_count())) return 0.0;
  const double log_z = histogram.log_partition(model.zetas, model.constraint);
  const double nn = static_cast<double>(model.vertex_count) * model.vertex_count;
  double energy = 0.0;
  for (std::size_t i = 0; i < model.motifs.size(); ++i) energy += model.zetas[i] * hom_density(model.motifs[i], g);
  return std::exp(nn * energy - log_z);
}

double cond_prob_mass(const ModelSpec& model, const SimpleGraph& g, const ExactOptions& options) {
  check_model_size(model, options);
  const auto hist = enumerate_counts(model.vertex_count, model.motifs, options);
  return cond_prob_mass(model, hist, g);
}

std::vector<GraphMotif> motifs_with(const std::vector<GraphMotif>& motifs, const GraphMotif& h, std::size_t& index) {
  for (std::size_t i = 0; i < motifs.size(); ++i)
    if (same_motif(motifs[i], h)) {
      index = i;
      return motifs;
    }
  auto out = motifs;
  out.push_back(h);
  index = out.size() - 1;
  return out;
}

double expectation_exact(const ModelSpec& model, const GraphMotif& h, const ExactOptions& options) {
  check_model_size(model, options);
  std::size_t index = 0;
  const auto motifs = motifs_with(model.motifs, h, index);
  auto zetas = model.zetas;
  zetas.resize(motifs.size(), 0.0);
  const auto hist = enumerate_counts(model.vertex_count, motifs, options);
  return hist.expectation(index, zetas, model.constraint);
}

}  // namespace cergm
