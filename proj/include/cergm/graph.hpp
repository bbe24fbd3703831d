#pragma once

#include <array>
#include <bit>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace cergm {

// Unordered vertex pair, stored with u < v once normalized.
struct VertexPair {
  int u = 0;
  int v = 0;

  constexpr VertexPair normalized() const { return u < v ? VertexPair{u, v} : VertexPair{v, u}; }
  friend constexpr bool operator==(const VertexPair&, const VertexPair&) = default;
};

// Number of free edge coordinates on N vertices, C(N, 2).
constexpr int pair_count(int vertex_count) { return vertex_count * (vertex_count - 1) / 2; }

// Lexicographic index of the pair {u, v}: (0,1), (0,2), ..., (0,N-1), (1,2), ...
int pair_index(int vertex_count, VertexPair p);
VertexPair pair_from_index(int vertex_count, int index);

enum class MotifKind { Edge, Triangle, Star, Generic };

/// A fixed finite simple graph H with vertices 0..k-1.
///
/// The structural kind (single edge, triangle, p-star) is detected from the
/// edge set, so an explicit edge list describing a triangle gets the same
/// fast counting paths as the canonical name.
class GraphMotif {
 public:
  GraphMotif(int vertex_count, std::vector<VertexPair> edges, std::string name = {});

  static GraphMotif edge();
  static GraphMotif triangle();
  // p spokes around vertex 0; star(1) is the single edge.
  static GraphMotif star(int p);
  // Simple path with p edges.
  static GraphMotif path(int p);

  // "edge", "triangle", "starP", "pathP" (P >= 1).
  static GraphMotif from_name(std::string_view name);
  // Edge list with 1-indexed endpoints, e.g. {{1,2},{2,3}}.
  static GraphMotif from_one_indexed(std::span<const std::pair<int, int>> edges);

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<VertexPair>& edges() const { return edges_; }
  const std::string& name() const { return name_; }
  MotifKind kind() const { return kind_; }
  // True for the single edge and every p-star.
  bool is_star() const { return kind_ == MotifKind::Edge || kind_ == MotifKind::Star; }
  // Number of spokes of a star motif (1 for the edge), 0 otherwise.
  int star_degree() const { return star_degree_; }
  int star_center() const { return star_center_; }

  std::vector<std::pair<int, int>> one_indexed_edges() const;

 private:
  void classify();

  int vertex_count_;
  std::vector<VertexPair> edges_;
  std::string name_;
  MotifKind kind_ = MotifKind::Generic;
  int star_degree_ = 0;
  int star_center_ = -1;
};

/// Simple graph on N <= 64 labeled vertices stored as one adjacency word per
/// vertex. Zero diagonal and symmetry are maintained by every mutator.
class SimpleGraph {
 public:
  static constexpr int kMaxVertices = 64;

  explicit SimpleGraph(int vertex_count);

  static SimpleGraph complete(int vertex_count);
  // Graph whose present pairs are the set bits of `mask` in pair_index order.
  static SimpleGraph from_pair_mask(int vertex_count, std::uint64_t mask);

  int vertex_count() const { return n_; }
  int edge_count() const { return edges_; }
  std::uint64_t row(int v) const { return rows_[static_cast<std::size_t>(v)]; }
  int degree(int v) const { return std::popcount(row(v)); }
  bool has_edge(int u, int v) const { return (row(u) >> v) & 1U; }
  bool has_edge(VertexPair p) const { return has_edge(p.u, p.v); }

  void add_edge(int u, int v);
  void remove_edge(int u, int v);
  void toggle_edge(int u, int v);
  void toggle_edge(VertexPair p) { toggle_edge(p.u, p.v); }

  // Vertex v of the result is vertex perm[v] of this graph.
  SimpleGraph permuted(std::span<const int> perm) const;
  // Pair mask in pair_index order; requires C(N,2) <= 64.
  std::uint64_t pair_mask() const;

  friend bool operator==(const SimpleGraph& a, const SimpleGraph& b) {
    return a.n_ == b.n_ && a.rows_ == b.rows_;
  }

 private:
  void check_pair(int u, int v) const;

  int n_;
  int edges_ = 0;
  std::array<std::uint64_t, kMaxVertices> rows_{};
};

// |hom(H, G)|: vertex maps V(H) -> V(G) sending every edge of H onto an edge of G.
std::uint64_t hom_count(const GraphMotif& h, const SimpleGraph& g);

// hom(H, G + uv) - hom(H, G - uv), independent of whether uv is present in G.
std::uint64_t hom_delta(const GraphMotif& h, const SimpleGraph& g, VertexPair uv);

// |hom(H, G)| / N^k.
double hom_density(const GraphMotif& h, const SimpleGraph& g);

// Homomorphism density of the single edge, 2|E(G)| / N^2. This is not
// |E(G)| / C(N, 2); the two differ by the factor (N - 1) / N.
double edge_density(const SimpleGraph& g);

// N^k as a double, the normalizer of hom_density.
double hom_normalizer(const GraphMotif& h, int vertex_count);

}  // namespace cergm
