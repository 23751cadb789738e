#pragma once

// Scripted strategies for games built by the reduction: a Cat that mirrors
// Mouse in the Cat subgraph, and a Mouse that walks a path of true gates
// and falls back to an escape route when Cat stops mirroring.

#include <memory>

#include "catmouse/circuit.hpp"
#include "catmouse/reduction.hpp"
#include "catmouse/solver.hpp"

namespace catmouse {

/// Everything a scripted strategy needs to know about a built instance.
/// Holds references to the circuit and the built game; both must outlive
/// it.
struct ReductionContext {
  ReductionContext(const Circuit& c, const BuiltGame& g, NodeValues v)
      : circuit(c), game(g), values(std::move(v)), index(c, g.graph), inst(GameInstance::from_graph(g.graph)) {}

  const Circuit& circuit;
  const BuiltGame& game;
  NodeValues values;
  GadgetIndex index;
  GameInstance inst;

  const GameGraph& graph() const { return game.graph; }
  const CorrespondenceMap& map() const { return game.map; }
  const NodeRole& role(NodeId n) const { return game.graph.role(n); }

  bool is_gadget(NodeId n, Side s, int pos_lo, int pos_hi) const {
    const NodeRole& r = role(n);
    return r.kind == RoleKind::Gadget && r.side == s && r.position >= pos_lo && r.position <= pos_hi;
  }

  /// Cat at cat_of(mouse), or at C2/C3 while Mouse is at M2/M3 of the same
  /// gadget.
  bool cat_mirrors(const GameState& s) const {
    if (map().cat_of[s.mouse] == s.cat) return true;
    return is_gadget(s.mouse, Side::Mouse, 2, 3) && is_gadget(s.cat, Side::Cat, 2, 3) &&
           index.gate_of(s.mouse) == index.gate_of(s.cat);
  }
};

inline std::shared_ptr<const ReductionContext> make_context(const Circuit& c, const BuiltGame& g,
                                                            const Assignment& x) {
  return std::make_shared<const ReductionContext>(c, g, evaluate(c, x).second);
}

/// Capture when adjacent; at M2/M3 of an AND gadget threaten the true
/// branch; otherwise step to cat_of(Mouse).
inline Strategy make_mirror_cat(std::shared_ptr<const ReductionContext> ctx) {
  return [ctx](const GameState& s) -> NodeId {
    const GameInstance& inst = ctx->inst;
    if (inst.can_move(s.cat, s.mouse)) return s.mouse;

    if (ctx->is_gadget(s.mouse, Side::Mouse, 2, 3)) {
      const std::size_t gi = ctx->index.gate_of(s.mouse);
      const Gate& gate = ctx->circuit.gates[gi];
      if (gate.kind == GateKind::And) {
        // C3 threatens M4 (left branch), C2 threatens M5 (right branch).
        const int pos = ctx->values(gate.left) ? 3 : 2;
        NodeId target = ctx->index.gadget(gi, Side::Cat, pos);
        if (inst.can_move(s.cat, target)) return target;
      }
    }

    NodeId mirror = ctx->map().cat_of[s.mouse];
    if (mirror != kNoNode && inst.can_move(s.cat, mirror)) return mirror;
    throw Error(ErrorCode::NoMove, inst.name(s.cat),
                "Mouse at " + inst.name(s.mouse) + " cannot be mirrored");
  };
}

namespace detail {

/// One forward step of the true-path walk (Cat assumed mirroring).
inline NodeId true_path_step(const ReductionContext& ctx, const GameState& s) {
  const NodeId u = s.mouse;
  const NodeRole& r = ctx.role(u);
  const GameGraph& g = ctx.graph();
  if (r.kind == RoleKind::Input) return ctx.values.inputs[r.input] ? g.h : g.d;
  if (r.kind != RoleKind::Gadget || r.side != Side::Mouse)
    throw Error(ErrorCode::NoSafeMove, ctx.inst.name(u), "Mouse left its subgraph");
  const std::size_t gi = ctx.index.gate_of(u);
  const Gate& gate = ctx.circuit.gates[gi];
  switch (r.position) {
    case 1:
      return ctx.index.gadget(gi, Side::Mouse, 2);
    case 2:
    case 3: {
      int pos;
      if (gate.kind == GateKind::Or) {
        pos = ctx.values(gate.left) || !ctx.values(gate.right) ? 4 : 5;
      } else {
        pos = s.cat == ctx.index.gadget(gi, Side::Cat, 3) ? 5 : 4;
      }
      return ctx.index.gadget(gi, Side::Mouse, pos);
    }
    default:
      return ctx.index.entry(r.position == 4 ? gate.left : gate.right, Side::Mouse);
  }
}

/// A step along a committed escape route.
inline NodeId escape_step(const ReductionContext& ctx, const GameState& s) {
  const NodeId u = s.mouse;
  const NodeRole& r = ctx.role(u);
  const GameInstance& inst = ctx.inst;
  auto safe = [&](NodeId v) { return v != s.cat && !inst.can_move(s.cat, v); };

  if (r.kind == RoleKind::Escape) {
    for (NodeId v : inst.moves(u)) {
      const NodeRole& vr = ctx.role(v);
      bool forward = ctx.map().layer[v] + 1 == ctx.map().layer[u];
      if (forward && (v == ctx.graph().h || (vr.kind == RoleKind::Escape && vr.gate == r.gate && vr.branch == r.branch)))
        return v;
    }
    throw Error(ErrorCode::NoSafeMove, inst.name(u), "escape chain is broken");
  }
  if (r.kind == RoleKind::Input) return ctx.values.inputs[r.input] ? ctx.graph().h : ctx.graph().d;
  if (r.kind != RoleKind::Gadget || r.side != Side::Mouse)
    throw Error(ErrorCode::NoSafeMove, inst.name(u), "Mouse left its subgraph");

  const std::size_t gi = ctx.index.gate_of(u);
  switch (r.position) {
    case 1:
      for (int pos : {2, 3}) {
        NodeId v = ctx.index.gadget(gi, Side::Mouse, pos);
        if (safe(v)) return v;
      }
      break;
    case 2:
    case 3:
      for (Branch b : {Branch::Left, Branch::Right}) {
        NodeId v = ctx.index.gadget(gi, Side::Mouse, b == Branch::Left ? 4 : 5);
        NodeId t1 = ctx.index.escape_entry(gi, b);
        if (!safe(v)) continue;
        bool entry_covered = false;
        for (NodeId y : inst.moves(s.cat))
          if (y == t1 || inst.can_move(y, t1)) entry_covered = true;
        if (!entry_covered) return v;
      }
      break;
    default: {
      NodeId t1 = ctx.index.escape_entry(gi, r.position == 4 ? Branch::Left : Branch::Right);
      if (safe(t1)) return t1;
      break;
    }
  }
  throw Error(ErrorCode::NoSafeMove, inst.name(u), "every escape is covered by Cat at " + inst.name(s.cat));
}

}  // namespace detail

/// Walks true gates toward a true input while Cat mirrors; the first time
/// Cat is found off the mirror position, commits to the nearest unguarded
/// escape route instead.
inline Strategy make_true_path_mouse(std::shared_ptr<const ReductionContext> ctx) {
  auto escaping = std::make_shared<bool>(false);
  return [ctx, escaping](const GameState& s) -> NodeId {
    if (!*escaping && !ctx->cat_mirrors(s)) *escaping = true;
    return *escaping ? detail::escape_step(*ctx, s) : detail::true_path_step(*ctx, s);
  };
}

}  // namespace catmouse
