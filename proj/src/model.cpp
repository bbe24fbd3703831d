#include "cergm/model.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

#include "cergm/errors.hpp"

namespace cergm {

double ConstraintSpec::t_prime(int vertex_count) const {
  if (vertex_count < 2) throw DomainError("t' needs N >= 2");
  return 2.0 * vertex_count * t / (vertex_count - 1);
}

void ConstraintSpec::validate() const {
  if (!std::isfinite(e) || e < 0.0 || e > 1.0) throw DomainError("target edge density e must lie in [0, 1]");
  if (!std::isfinite(t) || t <= 0.0) throw DomainError("window half-width t must be positive");
}

bool in_window(const ConstraintSpec& c, double density) { return std::abs(density - c.e) <= c.t + kWindowTolerance; }

bool in_window(const ConstraintSpec& c, int vertex_count, int edge_count) {
  const double n = vertex_count;
  return in_window(c, 2.0 * edge_count / (n * n));
}

std::pair<int, int> window_edge_range(const ConstraintSpec& c, int vertex_count) {
  const int n = pair_count(vertex_count);
  int lo = -1, hi = -1;
  for (int k = 0; k <= n; ++k)
    if (in_window(c, vertex_count, k)) {
      if (lo < 0) lo = k;
      hi = k;
    }
  if (lo < 0) {
    const double nn = static_cast<double>(vertex_count) * vertex_count;
    double nearest = 0.0;
    for (int k = 0; k <= n; ++k)
      if (std::abs(2.0 * k / nn - c.e) < std::abs(nearest - c.e)) nearest = 2.0 * k / nn;
    std::ostringstream msg;
    msg << "no graph on N = " << vertex_count << " vertices has edge density within " << c.t << " of " << c.e
        << "; nearest achievable density is " << nearest;
    throw InfeasibleError(msg.str());
  }
  return {lo, hi};
}

double ModelSpec::B() const {
  return std::accumulate(zetas.begin(), zetas.end(), 1.0, [](double acc, double z) { return acc + std::abs(z); });
}

void ModelSpec::validate() const {
  if (vertex_count < 1) throw DomainError("model needs N >= 1");
  if (motifs.empty()) throw DomainError("model needs at least one motif");
  if (motifs.front().kind() != MotifKind::Edge) throw DomainError("the first motif must be the single edge");
  if (zetas.size() != motifs.size()) throw DomainError("one zeta per motif required");
  for (double z : zetas)
    if (!std::isfinite(z)) throw DomainError("zeta must be finite");
  if (constraint) constraint->validate();
}

ModelSpec ModelSpec::unconstrained() const {
  ModelSpec m = *this;
  m.constraint.reset();
  return m;
}

ModelSpec ModelSpec::with_zetas(std::vector<double> z) const {
  ModelSpec m = *this;
  m.zetas = std::move(z);
  return m;
}

ModelSpec make_model(int vertex_count, std::vector<GraphMotif> extra_motifs, std::vector<double> zetas,
                     std::optional<ConstraintSpec> constraint) {
  ModelSpec m;
  m.vertex_count = vertex_count;
  m.motifs.push_back(GraphMotif::edge());
  for (auto& h : extra_motifs) m.motifs.push_back(std::move(h));
  m.zetas = std::move(zetas);
  m.constraint = constraint;
  m.validate();
  return m;
}

}  // namespace cergm
