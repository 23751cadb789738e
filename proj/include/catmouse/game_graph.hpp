#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "catmouse/circuit.hpp"
#include "catmouse/error.hpp"

namespace catmouse {

using NodeId = std::size_t;
inline constexpr NodeId kNoNode = std::numeric_limits<NodeId>::max();

enum class Side { Cat, Mouse };
enum class Branch { Left, Right };

inline char side_char(Side s) { return s == Side::Cat ? 'C' : 'M'; }
inline char branch_char(Branch b) { return b == Branch::Left ? 'L' : 'R'; }

enum class RoleKind { CatStart, Hole, DeadEnd, Gadget, Input, Escape };

/// What a game-graph node stands for. Only the fields relevant to `kind`
/// are meaningful.
struct NodeRole {
  RoleKind kind = RoleKind::CatStart;
  std::string gate;       // Gadget, Escape
  int position = 0;       // Gadget: 1..5
  Side side = Side::Cat;  // Gadget, Input
  std::size_t input = 0;  // Input
  Branch branch = Branch::Left;  // Escape
  int chain_index = 0;    // Escape: 1-based

  static NodeRole of(RoleKind k) {
    NodeRole r;
    r.kind = k;
    return r;
  }
  static NodeRole cat_start() { return of(RoleKind::CatStart); }
  static NodeRole hole() { return of(RoleKind::Hole); }
  static NodeRole dead_end() { return of(RoleKind::DeadEnd); }
  static NodeRole gadget(std::string g, int pos, Side s) {
    NodeRole r = of(RoleKind::Gadget);
    r.gate = std::move(g);
    r.position = pos;
    r.side = s;
    return r;
  }
  static NodeRole input_node(std::size_t i, Side s) {
    NodeRole r = of(RoleKind::Input);
    r.input = i;
    r.side = s;
    return r;
  }
  static NodeRole escape(std::string g, Branch b, int k) {
    NodeRole r = of(RoleKind::Escape);
    r.gate = std::move(g);
    r.branch = b;
    r.chain_index = k;
    return r;
  }

  bool on_side(Side s) const { return (kind == RoleKind::Gadget || kind == RoleKind::Input) && side == s; }

  /// Deterministic node id, e.g. `g3.M.2`, `i0.C`, `g3.esc.L.1`.
  std::string default_id() const {
    switch (kind) {
      case RoleKind::CatStart: return "c";
      case RoleKind::Hole: return "h";
      case RoleKind::DeadEnd: return "d";
      case RoleKind::Gadget: return gate + "." + side_char(side) + "." + std::to_string(position);
      case RoleKind::Input: return "i" + std::to_string(input) + "." + side_char(side);
      case RoleKind::Escape: return gate + ".esc." + branch_char(branch) + "." + std::to_string(chain_index);
    }
    return {};
  }

  friend bool operator==(const NodeRole&, const NodeRole&) = default;
};

enum class EdgeTag { GadgetInternal, InterGadget, InputToHole, InputToDeadEnd, Threat, Escape, Guard, Opening };

inline constexpr std::array<EdgeTag, 8> kAllEdgeTags = {
    EdgeTag::GadgetInternal, EdgeTag::InterGadget, EdgeTag::InputToHole, EdgeTag::InputToDeadEnd,
    EdgeTag::Threat,         EdgeTag::Escape,      EdgeTag::Guard,       EdgeTag::Opening};

inline std::string_view to_string(EdgeTag t) {
  switch (t) {
    case EdgeTag::GadgetInternal: return "gadget-internal";
    case EdgeTag::InterGadget: return "inter-gadget";
    case EdgeTag::InputToHole: return "input-to-hole";
    case EdgeTag::InputToDeadEnd: return "input-to-dead-end";
    case EdgeTag::Threat: return "threat";
    case EdgeTag::Escape: return "escape";
    case EdgeTag::Guard: return "guard";
    case EdgeTag::Opening: return "opening";
  }
  return "?";
}

inline std::optional<EdgeTag> edge_tag_from(std::string_view s) {
  for (EdgeTag t : kAllEdgeTags)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

struct GameNode {
  std::string id;
  NodeRole role;
  friend bool operator==(const GameNode&, const GameNode&) = default;
};

/// In an undirected graph `from`/`to` keep the orientation the edge had in
/// the directed construction; adjacency ignores it.
struct GameEdge {
  NodeId from = 0;
  NodeId to = 0;
  EdgeTag tag = EdgeTag::GadgetInternal;
  friend bool operator==(const GameEdge&, const GameEdge&) = default;
};

class GameGraph {
 public:
  bool directed = true;
  std::vector<GameNode> nodes;
  std::vector<GameEdge> edges;
  NodeId c = kNoNode, m = kNoNode, h = kNoNode, d = kNoNode;

  NodeId add_node(std::string id, NodeRole role) {
    if (!index_.emplace(id, nodes.size()).second) throw Error(ErrorCode::InconsistentGraph, id, "duplicate node id");
    nodes.push_back({std::move(id), std::move(role)});
    return nodes.size() - 1;
  }

  NodeId add_node(NodeRole role) {
    std::string id = role.default_id();
    return add_node(std::move(id), std::move(role));
  }

  /// Returns false (and adds nothing) when the edge already exists.
  bool add_edge(NodeId a, NodeId b, EdgeTag tag) {
    if (a == b) throw Error(ErrorCode::InconsistentGraph, nodes.at(a).id, "self-loop");
    auto key = edge_key(a, b);
    if (!edge_keys_.insert(key).second) return false;
    edges.push_back({a, b, tag});
    return true;
  }

  bool has_edge(NodeId a, NodeId b) const {
    auto key = edge_key(a, b);
    return edge_keys_.count(key) != 0;
  }

  std::size_t size() const { return nodes.size(); }

  NodeId find(std::string_view id) const {
    auto it = index_.find(std::string(id));
    return it == index_.end() ? kNoNode : it->second;
  }

  NodeId at(std::string_view id) const {
    NodeId n = find(id);
    if (n == kNoNode) throw Error(ErrorCode::UnknownNode, std::string(id), "");
    return n;
  }

  const std::string& id(NodeId n) const { return nodes.at(n).id; }
  const NodeRole& role(NodeId n) const { return nodes.at(n).role; }

  /// Moves available from each node (out-neighbours; both directions when
  /// undirected), each list sorted by node index.
  std::vector<std::vector<NodeId>> successors() const {
    std::vector<std::vector<NodeId>> adj(nodes.size());
    for (const GameEdge& e : edges) {
      adj[e.from].push_back(e.to);
      if (!directed) adj[e.to].push_back(e.from);
    }
    for (auto& v : adj) std::sort(v.begin(), v.end());
    return adj;
  }

  friend bool operator==(const GameGraph& a, const GameGraph& b) {
    return a.directed == b.directed && a.nodes == b.nodes && a.edges == b.edges && a.c == b.c && a.m == b.m &&
           a.h == b.h && a.d == b.d;
  }

 private:
  std::pair<NodeId, NodeId> edge_key(NodeId a, NodeId b) const {
    return directed || a < b ? std::pair{a, b} : std::pair{b, a};
  }

  std::unordered_map<std::string, NodeId> index_;
  std::set<std::pair<NodeId, NodeId>> edge_keys_;
};

/// The Mouse-side/Cat-side bijection and each node's layer (forward edge
/// distance to the Hole).
struct CorrespondenceMap {
  std::vector<NodeId> cat_of;    // indexed by Mouse-side node, kNoNode elsewhere
  std::vector<NodeId> mouse_of;  // indexed by Cat-side node, kNoNode elsewhere
  std::vector<int> layer;

  void resize(std::size_t n) {
    cat_of.resize(n, kNoNode);
    mouse_of.resize(n, kNoNode);
    layer.resize(n, 0);
  }

  void pair(NodeId mouse, NodeId cat) {
    cat_of.at(mouse) = cat;
    mouse_of.at(cat) = mouse;
  }

  friend bool operator==(const CorrespondenceMap&, const CorrespondenceMap&) = default;
};

inline int layer_of(const GameGraph& g, const CorrespondenceMap& map, std::string_view id) {
  return map.layer.at(g.at(id));
}

struct GraphStats {
  std::size_t nodes = 0;
  std::size_t edges = 0;
  std::map<std::string, std::size_t> per_tag;
  std::map<std::string, std::size_t> per_role;
};

inline std::string_view role_name(RoleKind k) {
  switch (k) {
    case RoleKind::CatStart: return "cat-start";
    case RoleKind::Hole: return "hole";
    case RoleKind::DeadEnd: return "dead-end";
    case RoleKind::Gadget: return "gadget";
    case RoleKind::Input: return "input";
    case RoleKind::Escape: return "escape";
  }
  return "?";
}

inline GraphStats stats(const GameGraph& g) {
  GraphStats s;
  s.nodes = g.nodes.size();
  s.edges = g.edges.size();
  for (EdgeTag t : kAllEdgeTags) s.per_tag[std::string(to_string(t))] = 0;
  for (const GameEdge& e : g.edges) ++s.per_tag[std::string(to_string(e.tag))];
  for (const GameNode& n : g.nodes) ++s.per_role[std::string(role_name(n.role.kind))];
  return s;
}

// ---------------------------------------------------------------------------
// Structured text format

inline std::string role_text(const NodeRole& r) {
  std::string s(role_name(r.kind));
  switch (r.kind) {
    case RoleKind::Gadget:
      s += " " + r.gate + " " + std::to_string(r.position) + " " + side_char(r.side);
      break;
    case RoleKind::Input:
      s += " " + std::to_string(r.input) + " " + side_char(r.side);
      break;
    case RoleKind::Escape:
      s += " " + r.gate + " " + branch_char(r.branch) + " " + std::to_string(r.chain_index);
      break;
    default:
      break;
  }
  return s;
}

inline std::string export_structured(const GameGraph& g, const CorrespondenceMap& map) {
  std::ostringstream out;
  out << "game " << (g.directed ? "directed" : "undirected") << '\n';
  for (const GameNode& n : g.nodes) out << "node " << n.id << ' ' << role_text(n.role) << '\n';
  for (const GameEdge& e : g.edges) out << "edge " << g.id(e.from) << ' ' << g.id(e.to) << ' ' << to_string(e.tag) << '\n';
  auto name = [&](NodeId n) { return n == kNoNode ? std::string("-") : g.id(n); };
  out << "special c=" << name(g.c) << " m=" << name(g.m) << " h=" << name(g.h) << " d=" << name(g.d) << '\n';
  for (NodeId n = 0; n < g.size(); ++n)
    if (map.cat_of[n] != kNoNode) out << "pair " << g.id(n) << ' ' << g.id(map.cat_of[n]) << '\n';
  for (NodeId n = 0; n < g.size(); ++n) out << "layer " << g.id(n) << ' ' << map.layer[n] << '\n';
  return out.str();
}

/// Checks the invariants every graph produced by the reduction satisfies.
inline void check_consistency(const GameGraph& g, const CorrespondenceMap& map) {
  auto fail = [](const std::string& subject, const std::string& what) {
    return Error(ErrorCode::InconsistentGraph, subject, what);
  };
  for (NodeId s : {g.c, g.m, g.h, g.d})
    if (s >= g.size()) throw fail("special", "c, m, h and d must all name nodes");
  if (map.layer.size() != g.size() || map.cat_of.size() != g.size() || map.mouse_of.size() != g.size())
    throw fail("map", "correspondence map does not cover the graph");

  for (const GameEdge& e : g.edges) {
    if (e.from == e.to) throw fail(g.id(e.from), "self-loop");
    int la = map.layer[e.from], lb = map.layer[e.to];
    bool ok = g.directed ? la == lb + 1 : (la == lb + 1 || lb == la + 1);
    if (!ok)
      throw fail(g.id(e.from) + "->" + g.id(e.to),
                 "edge spans layers " + std::to_string(la) + " and " + std::to_string(lb));
  }
  std::set<std::pair<NodeId, NodeId>> keys;
  for (const GameEdge& e : g.edges) {
    auto key = g.directed || e.from < e.to ? std::pair{e.from, e.to} : std::pair{e.to, e.from};
    if (!keys.insert(key).second) throw fail(g.id(e.from) + "->" + g.id(e.to), "parallel edge");
  }

  std::size_t c_degree = 0;
  for (const GameEdge& e : g.edges) {
    if (e.from == g.c || e.to == g.c) {
      ++c_degree;
      NodeId other = e.from == g.c ? e.to : e.from;
      const NodeRole& r = g.role(other);
      if (e.from != g.c || r.kind != RoleKind::Gadget || r.position != 1 || r.side != Side::Cat)
        throw fail(g.id(g.c), "cat start must lead to a Cat-side gadget node 1");
    }
  }
  if (c_degree != 1) throw fail(g.id(g.c), "cat start must have exactly one incident edge");

  for (NodeId n = 0; n < g.size(); ++n) {
    const NodeRole& r = g.role(n);
    bool mouse_side = r.on_side(Side::Mouse), cat_side = r.on_side(Side::Cat);
    if (mouse_side != (map.cat_of[n] != kNoNode)) throw fail(g.id(n), "Mouse-side node without a partner");
    if (cat_side != (map.mouse_of[n] != kNoNode)) throw fail(g.id(n), "Cat-side node without a partner");
    if (mouse_side) {
      NodeId partner = map.cat_of[n];
      if (map.mouse_of[partner] != n) throw fail(g.id(n), "correspondence is not a bijection");
      if (map.layer[partner] != map.layer[n]) throw fail(g.id(n), "partner lies on a different layer");
    }
  }
}

inline std::pair<GameGraph, CorrespondenceMap> import_graph(std::string_view text) {
  GameGraph g;
  CorrespondenceMap map;
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  bool have_header = false, have_special = false;
  std::vector<std::tuple<std::string, std::string, EdgeTag, std::size_t>> pending_edges;
  std::vector<std::tuple<std::string, std::string, std::size_t>> pending_pairs;
  std::vector<std::tuple<std::string, int, std::size_t>> pending_layers;
  std::array<std::string, 4> special_ids;

  auto syntax = [&](const std::string& what) {
    return Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno), what);
  };
  auto to_int = [&](const std::string& s) {
    auto v = detail::parse_size(s);
    if (!v) throw syntax("expected a non-negative integer, got '" + s + "'");
    return *v;
  };
  auto to_side = [&](const std::string& s) {
    if (s == "C") return Side::Cat;
    if (s == "M") return Side::Mouse;
    throw syntax("side must be C or M");
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto t = detail::split_ws(line.substr(0, line.find('#')));
    if (t.empty()) continue;
    if (!have_header) {
      if (t.size() != 2 || t[0] != "game" || (t[1] != "directed" && t[1] != "undirected"))
        throw syntax("expected 'game directed' or 'game undirected'");
      g.directed = t[1] == "directed";
      have_header = true;
      continue;
    }
    const std::string& kw = t[0];
    if (kw == "node") {
      if (t.size() < 3) throw syntax("node needs an id and a role");
      NodeRole r;
      const std::string& rk = t[2];
      if (rk == "cat-start" && t.size() == 3) r = NodeRole::cat_start();
      else if (rk == "hole" && t.size() == 3) r = NodeRole::hole();
      else if (rk == "dead-end" && t.size() == 3) r = NodeRole::dead_end();
      else if (rk == "gadget" && t.size() == 6) {
        auto pos = to_int(t[4]);
        if (pos < 1 || pos > 5) throw syntax("gadget position must be 1..5");
        r = NodeRole::gadget(t[3], static_cast<int>(pos), to_side(t[5]));
      } else if (rk == "input" && t.size() == 5) r = NodeRole::input_node(to_int(t[3]), to_side(t[4]));
      else if (rk == "escape" && t.size() == 6) {
        if (t[4] != "L" && t[4] != "R") throw syntax("escape branch must be L or R");
        r = NodeRole::escape(t[3], t[4] == "L" ? Branch::Left : Branch::Right, static_cast<int>(to_int(t[5])));
      } else throw syntax("malformed role for node " + t[1]);
      if (g.find(t[1]) != kNoNode) throw syntax("duplicate node " + t[1]);
      g.add_node(t[1], std::move(r));
    } else if (kw == "edge") {
      if (t.size() != 4) throw syntax("expected 'edge <a> <b> <tag>'");
      auto tag = edge_tag_from(t[3]);
      if (!tag) throw syntax("unknown edge tag '" + t[3] + "'");
      pending_edges.emplace_back(t[1], t[2], *tag, lineno);
    } else if (kw == "special") {
      if (t.size() != 5 || have_special) throw syntax("expected one 'special c=.. m=.. h=.. d=..' line");
      const char* keys[] = {"c=", "m=", "h=", "d="};
      for (int i = 0; i < 4; ++i) {
        if (t[i + 1].rfind(keys[i], 0) != 0) throw syntax(std::string("expected ") + keys[i]);
        special_ids[i] = t[i + 1].substr(2);
      }
      have_special = true;
    } else if (kw == "pair") {
      if (t.size() != 3) throw syntax("expected 'pair <mouse-id> <cat-id>'");
      pending_pairs.emplace_back(t[1], t[2], lineno);
    } else if (kw == "layer") {
      if (t.size() != 3) throw syntax("expected 'layer <id> <n>'");
      pending_layers.emplace_back(t[1], static_cast<int>(to_int(t[2])), lineno);
    } else {
      throw syntax("unknown directive '" + kw + "'");
    }
  }
  if (!have_header) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno), "missing header");
  if (!have_special) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno), "missing special line");

  auto lookup = [&](const std::string& id, std::size_t ln) {
    NodeId n = g.find(id);
    if (n == kNoNode) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(ln), "unknown node " + id);
    return n;
  };
  for (auto& [a, b, tag, ln] : pending_edges) {
    NodeId na = lookup(a, ln), nb = lookup(b, ln);
    if (na == nb) throw Error(ErrorCode::InconsistentGraph, a, "self-loop");
    if (!g.add_edge(na, nb, tag)) throw Error(ErrorCode::InconsistentGraph, a + "->" + b, "parallel edge");
  }
  g.c = lookup(special_ids[0], lineno);
  g.m = lookup(special_ids[1], lineno);
  g.h = lookup(special_ids[2], lineno);
  g.d = lookup(special_ids[3], lineno);

  map.resize(g.size());
  std::vector<bool> has_layer(g.size(), false);
  for (auto& [id, n, ln] : pending_layers) {
    NodeId v = lookup(id, ln);
    map.layer[v] = n;
    has_layer[v] = true;
  }
  for (NodeId v = 0; v < g.size(); ++v)
    if (!has_layer[v]) throw Error(ErrorCode::InconsistentGraph, g.id(v), "node has no layer");
  for (auto& [mid, cid, ln] : pending_pairs) {
    NodeId mv = lookup(mid, ln), cv = lookup(cid, ln);
    if (map.cat_of[mv] != kNoNode || map.mouse_of[cv] != kNoNode)
      throw Error(ErrorCode::InconsistentGraph, mid, "node paired twice");
    map.pair(mv, cv);
  }
  check_consistency(g, map);
  return {std::move(g), std::move(map)};
}

// ---------------------------------------------------------------------------
// Graphviz

inline std::string node_label(const NodeRole& r) {
  switch (r.kind) {
    case RoleKind::CatStart: return "c";
    case RoleKind::Hole: return "h";
    case RoleKind::DeadEnd: return "d";
    case RoleKind::Gadget: return std::string(1, side_char(r.side)) + std::to_string(r.position) + "\\n" + r.gate;
    case RoleKind::Input: return std::string("i") + std::to_string(r.input) + " " + side_char(r.side);
    case RoleKind::Escape:
      return "t" + std::to_string(r.chain_index) + "\\n" + r.gate + "." + branch_char(r.branch);
  }
  return "?";
}

/// Threat edges dashed, guard edges dotted, escape routes bold with filled
/// nodes. Presentation only; not re-imported.
inline std::string export_dot(const GameGraph& g, const CorrespondenceMap& map) {
  std::ostringstream out;
  const char* arrow = g.directed ? " -> " : " -- ";
  out << (g.directed ? "digraph" : "graph") << " catmouse {\n";
  out << "  rankdir=TB;\n  node [shape=circle, fontsize=10];\n";
  for (NodeId n = 0; n < g.size(); ++n) {
    const NodeRole& r = g.role(n);
    out << "  \"" << g.id(n) << "\" [label=\"" << node_label(r) << "\"";
    if (r.kind == RoleKind::Escape) out << ", style=filled, fillcolor=gray80";
    else if (r.kind == RoleKind::Hole || r.kind == RoleKind::DeadEnd || r.kind == RoleKind::CatStart)
      out << ", shape=doublecircle";
    else if (r.side == Side::Cat) out << ", color=firebrick";
    else out << ", color=royalblue";
    out << ", tooltip=\"layer " << map.layer[n] << "\"];\n";
  }
  for (const GameEdge& e : g.edges) {
    out << "  \"" << g.id(e.from) << '"' << arrow << '"' << g.id(e.to) << '"';
    switch (e.tag) {
      case EdgeTag::Threat: out << " [style=dashed]"; break;
      case EdgeTag::Guard: out << " [style=dotted]"; break;
      case EdgeTag::Escape: out << " [style=bold, color=gray40]"; break;
      default: break;
    }
    out << ";\n";
  }
  out << "}\n";
  return out.str();
}

enum class ExportFormat { Dot, Structured };

inline std::string export_graph(const GameGraph& g, const CorrespondenceMap& map, ExportFormat f) {
  return f == ExportFormat::Dot ? export_dot(g, map) : export_structured(g, map);
}

}  // namespace catmouse
