#include "cergm/motif_poly.hpp"

#include <set>

namespace cergm {

int distinct_vertices(VertexPair p, VertexPair r) {
  return static_cast<int>(std::set<int>{p.u, p.v, r.u, r.v}.size());
}

TDerivativeBounds t_derivative_bounds(const GraphMotif& h, int vertex_count, CoveringConstants covering) {
  if (vertex_count < 1) throw DomainError("N must be positive");
  if (!(covering.c > 0.0) || !(covering.C > 0.0)) throw DomainError("covering constants must be positive");
  TDerivativeBounds b;
  b.vertex_count = vertex_count;
  b.motif_vertices = h.vertex_count();
  b.motif_edges = h.edge_count();
  b.covering = covering;
  const double n = vertex_count;
  const double m = h.edge_count();
  b.sup_T = n * n;
  b.sup_grad = 2.0 * m;
  b.sup_hess_overlap = 4.0 * m * (m - 1.0) / n;
  b.sup_hess_disjoint = 4.0 * m * (m - 1.0) / (n * n);
  return b;
}

double TDerivativeBounds::covering_log_cardinality(double eps) const {
  if (!(eps > 0.0)) throw DomainError("covering radius must be positive");
  const double m = motif_edges, k = motif_vertices;
  const double mk4 = std::pow(m, 4) * std::pow(k, 4);
  const double eps4 = std::pow(eps, 4);
  return covering.c * mk4 * vertex_count / eps4 * std::log(covering.C * mk4 / eps4);
}

double TDerivativeBounds::hess_bound(VertexPair p, VertexPair r) const {
  return distinct_vertices(p, r) == 4 ? sup_hess_disjoint : sup_hess_overlap;
}

}  // namespace cergm
