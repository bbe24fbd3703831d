#include "cergm/graph.hpp"

#include <algorithm>
#include <charconv>
#include <set>

#include "cergm/errors.hpp"

namespace cergm {

namespace {

constexpr int kMaxMotifVertices = 10;

std::uint64_t vertex_mask(int n) { return n >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << n) - 1; }

std::uint64_t ipow(std::uint64_t base, int exp) {
  std::uint64_t r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

using RowTable = std::array<std::uint64_t, SimpleGraph::kMaxVertices>;

// Backtracking homomorphism counter. Every motif edge reads adjacency from its
// own row table, so callers can require different edges of H to land in
// different graphs (used for the toggle delta).
class MapCounter {
 public:
  MapCounter(const GraphMotif& h, int n, std::span<const int> placed_first) : n_(n) {
    const int k = h.vertex_count();
    std::vector<int> slot_of(static_cast<std::size_t>(k), -1);
    auto place = [&](int v) {
      Slot s{v, {}};
      for (int e = 0; e < h.edge_count(); ++e) {
        const auto [a, b] = h.edges()[static_cast<std::size_t>(e)];
        const int other = a == v ? b : (b == v ? a : -1);
        if (other >= 0 && slot_of[static_cast<std::size_t>(other)] >= 0)
          s.back.emplace_back(slot_of[static_cast<std::size_t>(other)], e);
      }
      slot_of[static_cast<std::size_t>(v)] = static_cast<int>(slots_.size());
      slots_.push_back(std::move(s));
    };
    for (int v : placed_first) place(v);
    while (static_cast<int>(slots_.size()) < k) {
      // Next: the unplaced vertex with most placed neighbours.
      int best = -1, best_links = -1;
      for (int v = 0; v < k; ++v) {
        if (slot_of[static_cast<std::size_t>(v)] >= 0) continue;
        int links = 0;
        for (const auto& [a, b] : h.edges())
          if ((a == v && slot_of[static_cast<std::size_t>(b)] >= 0) ||
              (b == v && slot_of[static_cast<std::size_t>(a)] >= 0))
            ++links;
        if (links > best_links) best = v, best_links = links;
      }
      place(best);
    }
    image_.assign(slots_.size(), 0);
  }

  // pins[v] >= 0 fixes the image of motif vertex v.
  std::uint64_t count(std::span<const RowTable* const> edge_rows, std::span<const int> pins) {
    rows_ = edge_rows;
    pins_ = pins;
    return count_from(0);
  }

 private:
  struct Slot {
    int vertex;
    std::vector<std::pair<int, int>> back;  // (earlier slot, motif edge)
  };

  std::uint64_t count_from(std::size_t pos) {
    const Slot& s = slots_[pos];
    std::uint64_t cand = vertex_mask(n_);
    for (const auto& [slot, e] : s.back)
      cand &= (*rows_[static_cast<std::size_t>(e)])[static_cast<std::size_t>(image_[static_cast<std::size_t>(slot)])];
    if (!pins_.empty() && pins_[static_cast<std::size_t>(s.vertex)] >= 0)
      cand &= std::uint64_t{1} << pins_[static_cast<std::size_t>(s.vertex)];
    if (pos + 1 == slots_.size()) return static_cast<std::uint64_t>(std::popcount(cand));
    std::uint64_t total = 0;
    while (cand) {
      image_[pos] = std::countr_zero(cand);
      cand &= cand - 1;
      total += count_from(pos + 1);
    }
    return total;
  }

  int n_;
  std::vector<Slot> slots_;
  std::vector<int> image_;
  std::span<const RowTable* const> rows_;
  std::span<const int> pins_;
};

RowTable rows_of(const SimpleGraph& g) {
  RowTable r{};
  for (int v = 0; v < g.vertex_count(); ++v) r[static_cast<std::size_t>(v)] = g.row(v);
  return r;
}

}  // namespace

int pair_index(int vertex_count, VertexPair p) {
  const auto [u, v] = p.normalized();
  // Pairs starting at rows 0..u-1 come first.
  return u * vertex_count - u * (u + 1) / 2 + (v - u - 1);
}

VertexPair pair_from_index(int vertex_count, int index) {
  int u = 0;
  int row_len = vertex_count - 1;
  while (index >= row_len) {
    index -= row_len;
    ++u;
    --row_len;
  }
  return {u, u + 1 + index};
}

GraphMotif::GraphMotif(int vertex_count, std::vector<VertexPair> edges, std::string name)
    : vertex_count_(vertex_count), edges_(std::move(edges)), name_(std::move(name)) {
  if (vertex_count_ < 1 || vertex_count_ > kMaxMotifVertices)
    throw DomainError("motif vertex count must lie in [1, " + std::to_string(kMaxMotifVertices) + "]");
  std::set<std::pair<int, int>> seen;
  for (auto& e : edges_) {
    if (e.u == e.v) throw DomainError("motif edge is a loop");
    if (e.u < 0 || e.v < 0 || e.u >= vertex_count_ || e.v >= vertex_count_)
      throw DomainError("motif edge endpoint out of range");
    e = e.normalized();
    if (!seen.emplace(e.u, e.v).second) throw DomainError("duplicate motif edge");
  }
  classify();
}

void GraphMotif::classify() {
  const int m = edge_count();
  const int k = vertex_count_;
  if (m == 1 && k == 2) {
    kind_ = MotifKind::Edge;
    star_degree_ = 1;
    star_center_ = edges_[0].u;
    return;
  }
  if (m == 3 && k == 3) {
    kind_ = MotifKind::Triangle;
    return;
  }
  if (m >= 2 && m == k - 1) {
    std::vector<int> deg(static_cast<std::size_t>(k), 0);
    for (const auto& e : edges_) ++deg[static_cast<std::size_t>(e.u)], ++deg[static_cast<std::size_t>(e.v)];
    const auto it = std::find(deg.begin(), deg.end(), m);
    if (it != deg.end()) {
      kind_ = MotifKind::Star;
      star_degree_ = m;
      star_center_ = static_cast<int>(it - deg.begin());
    }
  }
}

GraphMotif GraphMotif::edge() { return GraphMotif(2, {{0, 1}}, "edge"); }

GraphMotif GraphMotif::triangle() { return GraphMotif(3, {{0, 1}, {1, 2}, {0, 2}}, "triangle"); }

GraphMotif GraphMotif::star(int p) {
  if (p < 1) throw DomainError("star needs at least one spoke");
  if (p == 1) return edge();
  std::vector<VertexPair> edges;
  for (int i = 1; i <= p; ++i) edges.push_back({0, i});
  return GraphMotif(p + 1, std::move(edges), "star" + std::to_string(p));
}

GraphMotif GraphMotif::path(int p) {
  if (p < 1) throw DomainError("path needs at least one edge");
  if (p == 1) return edge();
  std::vector<VertexPair> edges;
  for (int i = 0; i < p; ++i) edges.push_back({i, i + 1});
  return GraphMotif(p + 1, std::move(edges), "path" + std::to_string(p));
}

GraphMotif GraphMotif::from_name(std::string_view name) {
  if (name == "edge") return edge();
  if (name == "triangle") return triangle();
  auto suffix = [&](std::string_view prefix, int& p) {
    if (!name.starts_with(prefix)) return false;
    const auto digits = name.substr(prefix.size());
    const auto res = std::from_chars(digits.data(), digits.data() + digits.size(), p);
    return res.ec == std::errc{} && res.ptr == digits.data() + digits.size() && p >= 1;
  };
  int p = 0;
  if (suffix("star", p)) return star(p);
  if (suffix("path", p)) return path(p);
  throw DomainError("unknown motif name '" + std::string(name) + "'");
}

GraphMotif GraphMotif::from_one_indexed(std::span<const std::pair<int, int>> edges) {
  int k = 0;
  std::vector<VertexPair> zero_based;
  for (const auto& [a, b] : edges) {
    if (a < 1 || b < 1) throw DomainError("motif edge list is 1-indexed");
    zero_based.push_back({a - 1, b - 1});
    k = std::max({k, a, b});
  }
  if (zero_based.empty()) throw DomainError("motif edge list is empty");
  return GraphMotif(k, std::move(zero_based));
}

std::vector<std::pair<int, int>> GraphMotif::one_indexed_edges() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& e : edges_) out.emplace_back(e.u + 1, e.v + 1);
  return out;
}

SimpleGraph::SimpleGraph(int vertex_count) : n_(vertex_count) {
  if (n_ < 1 || n_ > kMaxVertices)
    throw SizeError("graph vertex count must lie in [1, " + std::to_string(kMaxVertices) + "]");
}

SimpleGraph SimpleGraph::complete(int vertex_count) {
  SimpleGraph g(vertex_count);
  for (int u = 0; u < vertex_count; ++u)
    for (int v = u + 1; v < vertex_count; ++v) g.add_edge(u, v);
  return g;
}

SimpleGraph SimpleGraph::from_pair_mask(int vertex_count, std::uint64_t mask) {
  SimpleGraph g(vertex_count);
  const int n = pair_count(vertex_count);
  for (int i = 0; i < n && i < 64; ++i)
    if ((mask >> i) & 1U) {
      const auto p = pair_from_index(vertex_count, i);
      g.add_edge(p.u, p.v);
    }
  return g;
}

void SimpleGraph::check_pair(int u, int v) const {
  if (u == v || u < 0 || v < 0 || u >= n_ || v >= n_) throw DomainError("invalid vertex pair");
}

void SimpleGraph::add_edge(int u, int v) {
  check_pair(u, v);
  if (has_edge(u, v)) return;
  toggle_edge(u, v);
}

void SimpleGraph::remove_edge(int u, int v) {
  check_pair(u, v);
  if (!has_edge(u, v)) return;
  toggle_edge(u, v);
}

void SimpleGraph::toggle_edge(int u, int v) {
  check_pair(u, v);
  edges_ += has_edge(u, v) ? -1 : 1;
  rows_[static_cast<std::size_t>(u)] ^= std::uint64_t{1} << v;
  rows_[static_cast<std::size_t>(v)] ^= std::uint64_t{1} << u;
}

SimpleGraph SimpleGraph::permuted(std::span<const int> perm) const {
  if (static_cast<int>(perm.size()) != n_) throw DomainError("permutation size mismatch");
  SimpleGraph out(n_);
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      if (has_edge(perm[static_cast<std::size_t>(a)], perm[static_cast<std::size_t>(b)])) out.add_edge(a, b);
  return out;
}

std::uint64_t SimpleGraph::pair_mask() const {
  if (pair_count(n_) > 64) throw SizeError("pair mask needs C(N,2) <= 64");
  std::uint64_t mask = 0;
  for (int i = 0; i < pair_count(n_); ++i)
    if (has_edge(pair_from_index(n_, i))) mask |= std::uint64_t{1} << i;
  return mask;
}

std::uint64_t hom_count(const GraphMotif& h, const SimpleGraph& g) {
  const int n = g.vertex_count();
  switch (h.kind()) {
    case MotifKind::Edge:
      return 2 * static_cast<std::uint64_t>(g.edge_count());
    case MotifKind::Triangle: {
      // trace(A^3): ordered adjacent (u, v) times common neighbours.
      std::uint64_t total = 0;
      for (int u = 0; u < n; ++u) {
        std::uint64_t r = g.row(u);
        while (r) {
          const int v = std::countr_zero(r);
          r &= r - 1;
          total += static_cast<std::uint64_t>(std::popcount(g.row(u) & g.row(v)));
        }
      }
      return total;
    }
    case MotifKind::Star: {
      std::uint64_t total = 0;
      for (int v = 0; v < n; ++v) total += ipow(static_cast<std::uint64_t>(g.degree(v)), h.star_degree());
      return total;
    }
    case MotifKind::Generic:
      break;
  }
  const RowTable rows = rows_of(g);
  std::vector<const RowTable*> edge_rows(static_cast<std::size_t>(h.edge_count()), &rows);
  if (h.edge_count() == 0) return ipow(static_cast<std::uint64_t>(n), h.vertex_count());
  MapCounter counter(h, n, {});
  return counter.count(edge_rows, {});
}

std::uint64_t hom_delta(const GraphMotif& h, const SimpleGraph& g, VertexPair uv) {
  const auto [u, v] = uv.normalized();
  if (u == v || u < 0 || v >= g.vertex_count()) throw DomainError("invalid vertex pair");
  switch (h.kind()) {
    case MotifKind::Edge:
      return 2;
    case MotifKind::Triangle:
      return 6 * static_cast<std::uint64_t>(std::popcount(g.row(u) & g.row(v)));
    case MotifKind::Star: {
      const int present = g.has_edge(u, v) ? 1 : 0;
      const auto du = static_cast<std::uint64_t>(g.degree(u) - present);
      const auto dv = static_cast<std::uint64_t>(g.degree(v) - present);
      const int p = h.star_degree();
      return ipow(du + 1, p) - ipow(du, p) + ipow(dv + 1, p) - ipow(dv, p);
    }
    case MotifKind::Generic:
      break;
  }
  // Maps using uv at least once, split by the first motif edge landing on uv:
  // earlier edges avoid uv, that edge is pinned to uv, later edges are free.
  RowTable minus = rows_of(g), plus = rows_of(g);
  minus[static_cast<std::size_t>(u)] &= ~(std::uint64_t{1} << v);
  minus[static_cast<std::size_t>(v)] &= ~(std::uint64_t{1} << u);
  plus[static_cast<std::size_t>(u)] |= std::uint64_t{1} << v;
  plus[static_cast<std::size_t>(v)] |= std::uint64_t{1} << u;

  const int m = h.edge_count();
  std::vector<const RowTable*> edge_rows(static_cast<std::size_t>(m));
  std::vector<int> pins(static_cast<std::size_t>(h.vertex_count()), -1);
  std::uint64_t total = 0;
  for (int l = 0; l < m; ++l) {
    const auto [a, b] = h.edges()[static_cast<std::size_t>(l)];
    for (int j = 0; j < m; ++j) edge_rows[static_cast<std::size_t>(j)] = j < l ? &minus : &plus;
    const int placed[2] = {a, b};
    MapCounter counter(h, g.vertex_count(), placed);
    for (const auto& [ia, ib] : {std::pair{u, v}, std::pair{v, u}}) {
      pins[static_cast<std::size_t>(a)] = ia;
      pins[static_cast<std::size_t>(b)] = ib;
      total += counter.count(edge_rows, pins);
    }
    pins[static_cast<std::size_t>(a)] = pins[static_cast<std::size_t>(b)] = -1;
  }
  return total;
}

double hom_normalizer(const GraphMotif& h, int vertex_count) {
  return static_cast<double>(ipow(static_cast<std::uint64_t>(vertex_count), h.vertex_count()));
}

double hom_density(const GraphMotif& h, const SimpleGraph& g) {
  return static_cast<double>(hom_count(h, g)) / hom_normalizer(h, g.vertex_count());
}

double edge_density(const SimpleGraph& g) {
  const double n = g.vertex_count();
  return 2.0 * g.edge_count() / (n * n);
}

}  // namespace cergm
