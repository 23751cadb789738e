#pragma once

#include <string>
#include <vector>

#include "catmouse/circuit.hpp"
#include "catmouse/solver.hpp"

namespace catmouse::test {

// Instance from a compact edge list over nodes named a, b, c, ...
inline GameInstance tiny(std::size_t n, bool directed, std::vector<std::pair<NodeId, NodeId>> edges, NodeId cat,
                         NodeId mouse, NodeId hole) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.emplace_back(1, static_cast<char>('a' + i));
  return GameInstance(std::move(names), directed, edges, cat, mouse, hole);
}

// Random graph on 2..max_nodes nodes; the hole is sometimes an isolated
// node so that Mouse cannot win.
inline GameInstance random_instance(Rng& rng, std::size_t max_nodes) {
  const std::size_t n = 2 + rng.below(max_nodes - 1);
  const bool directed = rng.chance(0.5);
  const double density = 0.15 + 0.5 * rng.unit();
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId a = 0; a < n; ++a)
    for (NodeId b = 0; b < n; ++b) {
      if (a == b || (!directed && b < a)) continue;
      if (rng.chance(density)) edges.emplace_back(a, b);
    }
  const NodeId cat = rng.below(n);
  NodeId mouse = rng.below(n - 1);
  if (mouse >= cat) ++mouse;
  NodeId hole = rng.below(n);
  while (hole == mouse) hole = rng.below(n);
  if (rng.chance(0.25)) {
    std::erase_if(edges, [&](auto e) { return e.first == hole || e.second == hole; });
  }
  return tiny(n, directed, std::move(edges), cat, mouse, hole);
}

}  // namespace catmouse::test
