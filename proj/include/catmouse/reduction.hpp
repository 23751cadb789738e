#pragma once

// Compiles a circuit and an input assignment into a cat-and-mouse game.
//
// Each gate becomes a five-node gadget on each side. Node 1 is the gate
// output, nodes 4 and 5 lead to the left and right child, and the edges
// are 1->2, 1->3 and {2,3}->{4,5} fully crossed.
//
// A gate at circuit depth j puts node 1 on layer 3j+1, nodes 2/3 on 3j and
// nodes 4/5 on 3j-1; input nodes sit on layer 1 and the Hole on layer 0.

#include <array>
#include <string>
#include <utility>
#include <vector>

#include "catmouse/circuit.hpp"
#include "catmouse/game_graph.hpp"

namespace catmouse {

struct BuiltGame {
  GameGraph graph;
  CorrespondenceMap map;
};

/// Node lookup by role for graphs produced by `build_directed` /
/// `build_undirected`.
class GadgetIndex {
 public:
  GadgetIndex() = default;

  GadgetIndex(const Circuit& c, const GameGraph& g) : circuit_(&c) {
    gadget_.assign(c.gates.size(), {});
    escape_entry_.assign(c.gates.size(), {kNoNode, kNoNode});
    input_.assign(c.num_inputs, {kNoNode, kNoNode});
    gate_of_node_.assign(g.size(), kNoGate);
    for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
      const std::string& id = c.gates[gi].id;
      for (Side s : {Side::Cat, Side::Mouse})
        for (int pos = 1; pos <= 5; ++pos) {
          NodeId n = g.at(NodeRole::gadget(id, pos, s).default_id());
          gadget_[gi][slot(s, pos)] = n;
          gate_of_node_[n] = gi;
        }
      escape_entry_[gi][0] = g.at(NodeRole::escape(id, Branch::Left, 1).default_id());
      escape_entry_[gi][1] = g.at(NodeRole::escape(id, Branch::Right, 1).default_id());
    }
    for (std::size_t i = 0; i < c.num_inputs; ++i) {
      input_[i][0] = g.at(NodeRole::input_node(i, Side::Cat).default_id());
      input_[i][1] = g.at(NodeRole::input_node(i, Side::Mouse).default_id());
    }
  }

  static constexpr std::size_t kNoGate = static_cast<std::size_t>(-1);

  NodeId gadget(std::size_t gate, Side s, int pos) const { return gadget_.at(gate)[slot(s, pos)]; }
  NodeId input(std::size_t i, Side s) const { return input_.at(i)[s == Side::Cat ? 0 : 1]; }
  NodeId escape_entry(std::size_t gate, Branch b) const { return escape_entry_.at(gate)[b == Branch::Left ? 0 : 1]; }

  /// Node 1 of a gate child's gadget, or the input node.
  NodeId entry(NodeRef r, Side s) const { return r.is_input() ? input(r.index, s) : gadget(r.index, s, 1); }

  /// Gate whose gadget contains `n`, or kNoGate.
  std::size_t gate_of(NodeId n) const { return n < gate_of_node_.size() ? gate_of_node_[n] : kNoGate; }

  const Circuit& circuit() const { return *circuit_; }

 private:
  static std::size_t slot(Side s, int pos) { return (s == Side::Cat ? 0 : 5) + static_cast<std::size_t>(pos - 1); }

  const Circuit* circuit_ = nullptr;
  std::vector<std::array<NodeId, 10>> gadget_;
  std::vector<std::array<NodeId, 2>> escape_entry_;
  std::vector<std::array<NodeId, 2>> input_;
  std::vector<std::size_t> gate_of_node_;
};

inline BuiltGame build_directed(const Circuit& c, const Assignment& x) {
  validate_structure(c);
  const LayerMap lm = validate_layers(c);
  if (x.size() != c.num_inputs)
    throw Error(ErrorCode::LengthMismatch, "",
                "assignment has " + std::to_string(x.size()) + " bits, circuit has " + std::to_string(c.num_inputs) +
                    " inputs");

  BuiltGame out;
  GameGraph& g = out.graph;
  g.directed = true;
  std::vector<int> layer;
  auto add = [&](NodeRole r, int l) {
    NodeId n = g.add_node(std::move(r));
    layer.push_back(l);
    return n;
  };

  const int L = lm.depth;
  g.c = add(NodeRole::cat_start(), 3 * L + 2);
  g.h = add(NodeRole::hole(), 0);
  g.d = add(NodeRole::dead_end(), 0);

  // gadget[gate][side][pos]
  std::vector<std::array<std::array<NodeId, 6>, 2>> gadget(c.gates.size());
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const int j = lm.gate_layer[gi];
    const int pos_layer[6] = {0, 3 * j + 1, 3 * j, 3 * j, 3 * j - 1, 3 * j - 1};
    for (Side s : {Side::Cat, Side::Mouse})
      for (int pos = 1; pos <= 5; ++pos)
        gadget[gi][s == Side::Cat ? 0 : 1][pos] = add(NodeRole::gadget(c.gates[gi].id, pos, s), pos_layer[pos]);
  }
  std::vector<std::array<NodeId, 2>> input(c.num_inputs);
  for (std::size_t i = 0; i < c.num_inputs; ++i)
    for (Side s : {Side::Cat, Side::Mouse}) input[i][s == Side::Cat ? 0 : 1] = add(NodeRole::input_node(i, s), 1);

  auto entry = [&](NodeRef r, int side) { return r.is_input() ? input[r.index][side] : gadget[r.index][side][1]; };

  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    for (int side = 0; side < 2; ++side) {
      const auto& n = gadget[gi][side];
      for (auto [a, b] : {std::pair{1, 2}, {1, 3}, {2, 4}, {2, 5}, {3, 4}, {3, 5}})
        g.add_edge(n[a], n[b], EdgeTag::GadgetInternal);
      g.add_edge(n[4], entry(c.gates[gi].left, side), EdgeTag::InterGadget);
      g.add_edge(n[5], entry(c.gates[gi].right, side), EdgeTag::InterGadget);
    }
  }

  g.add_edge(g.c, gadget[c.output][0][1], EdgeTag::Opening);
  g.m = gadget[c.output][1][1];

  for (std::size_t i = 0; i < c.num_inputs; ++i) {
    if (x[i]) {
      g.add_edge(input[i][0], g.h, EdgeTag::InputToHole);
      g.add_edge(input[i][1], g.h, EdgeTag::InputToHole);
    } else {
      g.add_edge(input[i][1], g.d, EdgeTag::InputToDeadEnd);
    }
    g.add_edge(input[i][0], g.d, EdgeTag::InputToDeadEnd);
  }

  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    if (c.gates[gi].kind != GateKind::And) continue;
    const auto& cat = gadget[gi][0];
    const auto& mouse = gadget[gi][1];
    g.add_edge(cat[2], mouse[5], EdgeTag::Threat);
    g.add_edge(cat[3], mouse[4], EdgeTag::Threat);
  }

  // Escape chains: nodes 4/5 sit 3j-1 edges from the Hole, so 3j-2 chain
  // nodes keep every escape path exactly as long as the forward paths.
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const int j = lm.gate_layer[gi];
    const int len = 3 * j - 2;
    for (Branch b : {Branch::Left, Branch::Right}) {
      const int pos = b == Branch::Left ? 4 : 5;
      NodeId prev = kNoNode;
      for (int k = 1; k <= len; ++k) {
        NodeId t = add(NodeRole::escape(c.gates[gi].id, b, k), 3 * j - 1 - k);
        if (k == 1) {
          g.add_edge(gadget[gi][0][pos], t, EdgeTag::Escape);
          g.add_edge(gadget[gi][1][pos], t, EdgeTag::Escape);
        } else {
          g.add_edge(prev, t, EdgeTag::Escape);
        }
        prev = t;
      }
      g.add_edge(prev, g.h, EdgeTag::Escape);
    }
  }

  CorrespondenceMap& map = out.map;
  map.resize(g.size());
  map.layer = std::move(layer);
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi)
    for (int pos = 1; pos <= 5; ++pos) map.pair(gadget[gi][1][pos], gadget[gi][0][pos]);
  for (std::size_t i = 0; i < c.num_inputs; ++i) map.pair(input[i][1], input[i][0]);
  return out;
}

/// The directed construction with every edge made undirected, plus one
/// guard edge m1 -- cat_of(m2) per Mouse-side edge m1 -> m2.
inline BuiltGame build_undirected(const Circuit& c, const Assignment& x) {
  BuiltGame dir = build_directed(c, x);
  BuiltGame out;
  GameGraph& g = out.graph;
  g.directed = false;
  for (const GameNode& n : dir.graph.nodes) g.add_node(n.id, n.role);
  for (const GameEdge& e : dir.graph.edges) g.add_edge(e.from, e.to, e.tag);
  g.c = dir.graph.c;
  g.m = dir.graph.m;
  g.h = dir.graph.h;
  g.d = dir.graph.d;
  out.map = std::move(dir.map);

  for (const GameEdge& e : dir.graph.edges) {
    if (e.tag != EdgeTag::GadgetInternal && e.tag != EdgeTag::InterGadget) continue;
    if (!g.role(e.from).on_side(Side::Mouse)) continue;
    NodeId guard_to = out.map.cat_of.at(e.to);
    if (!g.add_edge(e.from, guard_to, EdgeTag::Guard))
      throw Error(ErrorCode::InconsistentGraph, g.id(e.from), "guard edge collides with an existing edge");
  }
  return out;
}

}  // namespace catmouse
