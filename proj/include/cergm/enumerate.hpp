#pragma once

#include <bit>
#include <cstdint>
#include <optional>

#include "cergm/errors.hpp"
#include "cergm/graph.hpp"

namespace cergm {

inline constexpr int kDefaultEnumerationMaxVertices = 8;

// A sub-cube of the 2^n edge configurations: the top `fixed_bits` pair
// indices are held at `prefix`, the remaining low pairs run through all
// settings. The default covers the whole cube.
struct SubCube {
  int fixed_bits = 0;
  std::uint64_t prefix = 0;
};

// What changed between two consecutive graphs of the walk.
struct Toggle {
  VertexPair pair;
  bool added;
};

/// Visits every graph on `vertex_count` vertices inside `cube` exactly once in
/// reflected Gray-code order. The first visit reports no toggle; each later
/// visit reports the single pair toggled relative to the previous graph.
///
/// `visit(const SimpleGraph&, std::optional<Toggle>)`; the graph is only
/// valid for the duration of the call.
template <class Visitor>
void enumerate_graphs(int vertex_count, Visitor&& visit, SubCube cube = {},
                      int max_vertices = kDefaultEnumerationMaxVertices) {
  if (vertex_count < 1) throw DomainError("vertex count must be positive");
  if (vertex_count > max_vertices)
    throw SizeError("exhaustive enumeration limited to N <= " + std::to_string(max_vertices));
  const int n = pair_count(vertex_count);
  if (n > 62) throw SizeError("edge cube too large to enumerate");
  if (cube.fixed_bits < 0 || cube.fixed_bits > n) throw DomainError("sub-cube fixes more bits than pairs");
  const int free_bits = n - cube.fixed_bits;
  if (cube.fixed_bits < 64 && (cube.prefix >> cube.fixed_bits) != 0) throw DomainError("sub-cube prefix too wide");

  SimpleGraph g(vertex_count);
  for (int b = 0; b < cube.fixed_bits; ++b)
    if ((cube.prefix >> b) & 1U) {
      const auto p = pair_from_index(vertex_count, free_bits + b);
      g.add_edge(p.u, p.v);
    }

  // Pair lookup for the free bits, hoisted out of the walk.
  VertexPair pairs[64];
  for (int b = 0; b < free_bits; ++b) pairs[b] = pair_from_index(vertex_count, b);

  visit(static_cast<const SimpleGraph&>(g), std::optional<Toggle>{});
  const std::uint64_t steps = std::uint64_t{1} << free_bits;
  for (std::uint64_t s = 1; s < steps; ++s) {
    const VertexPair p = pairs[std::countr_zero(s)];
    g.toggle_edge(p.u, p.v);
    visit(static_cast<const SimpleGraph&>(g), std::optional<Toggle>{Toggle{p, g.has_edge(p.u, p.v)}});
  }
}

}  // namespace cergm
