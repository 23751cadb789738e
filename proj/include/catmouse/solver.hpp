#pragma once

// Exact solution of cat-and-mouse under the rules: players alternate
// mandatory moves along edges, Cat moving first; Cat wins on co-location
// (even at the Hole), Mouse wins on reaching the Hole, a repeated
// (cat, mouse, turn) situation is a draw, and a player with no move loses.

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "catmouse/error.hpp"
#include "catmouse/game_graph.hpp"

namespace catmouse {

enum class Player : std::uint8_t { Cat, Mouse };
enum class Outcome : std::uint8_t { CatWin, MouseWin, Draw };

inline Player other(Player p) { return p == Player::Cat ? Player::Mouse : Player::Cat; }
inline std::string_view to_string(Player p) { return p == Player::Cat ? "Cat" : "Mouse"; }
inline std::string_view to_string(Outcome o) {
  switch (o) {
    case Outcome::CatWin: return "CatWin";
    case Outcome::MouseWin: return "MouseWin";
    case Outcome::Draw: return "Draw";
  }
  return "?";
}
inline Outcome win_for(Player p) { return p == Player::Cat ? Outcome::CatWin : Outcome::MouseWin; }

struct GameState {
  NodeId cat = 0;
  NodeId mouse = 0;
  Player turn = Player::Cat;

  NodeId mover() const { return turn == Player::Cat ? cat : mouse; }
  GameState after(NodeId to) const {
    GameState s = *this;
    (turn == Player::Cat ? s.cat : s.mouse) = to;
    s.turn = other(turn);
    return s;
  }
  friend bool operator==(const GameState&, const GameState&) = default;
};

/// A graph with Cat, Mouse and Hole positions, stored as compressed
/// adjacency in both directions.
class GameInstance {
 public:
  GameInstance(std::vector<std::string> names, bool directed, std::span<const std::pair<NodeId, NodeId>> edges,
               NodeId cat_start, NodeId mouse_start, NodeId hole)
      : names_(std::move(names)), directed_(directed), cat_start_(cat_start), mouse_start_(mouse_start), hole_(hole) {
    const std::size_t n = names_.size();
    for (NodeId v : {cat_start, mouse_start, hole})
      if (v >= n) throw Error(ErrorCode::InvalidInstance, "", "start or hole is not a node");
    if (cat_start == mouse_start) throw Error(ErrorCode::InvalidInstance, names_[cat_start], "Cat and Mouse start together");
    if (mouse_start == hole) throw Error(ErrorCode::InvalidInstance, names_[hole], "Mouse starts on the Hole");

    std::vector<std::vector<NodeId>> out(n), in(n);
    for (auto [a, b] : edges) {
      if (a >= n || b >= n) throw Error(ErrorCode::InvalidInstance, "", "edge endpoint out of range");
      out[a].push_back(b);
      in[b].push_back(a);
      if (!directed) {
        out[b].push_back(a);
        in[a].push_back(b);
      }
    }
    auto pack = [n](std::vector<std::vector<NodeId>>& lists, std::vector<std::uint32_t>& off, std::vector<NodeId>& flat) {
      off.assign(n + 1, 0);
      for (std::size_t v = 0; v < n; ++v) {
        std::sort(lists[v].begin(), lists[v].end());
        lists[v].erase(std::unique(lists[v].begin(), lists[v].end()), lists[v].end());
        off[v + 1] = off[v] + static_cast<std::uint32_t>(lists[v].size());
      }
      flat.clear();
      for (auto& l : lists) flat.insert(flat.end(), l.begin(), l.end());
    };
    pack(out, out_off_, out_);
    pack(in, in_off_, in_);

    std::vector<NodeId> order(n);
    std::iota(order.begin(), order.end(), NodeId{0});
    std::sort(order.begin(), order.end(), [&](NodeId a, NodeId b) { return names_[a] < names_[b]; });
    name_rank_.assign(n, 0);
    for (std::size_t r = 0; r < n; ++r) name_rank_[order[r]] = static_cast<std::uint32_t>(r);
  }

  static GameInstance from_graph(const GameGraph& g) { return from_graph(g, g.c, g.m, g.h); }

  static GameInstance from_graph(const GameGraph& g, NodeId cat, NodeId mouse, NodeId hole) {
    std::vector<std::string> names;
    names.reserve(g.size());
    for (const GameNode& n : g.nodes) names.push_back(n.id);
    std::vector<std::pair<NodeId, NodeId>> edges;
    edges.reserve(g.edges.size());
    for (const GameEdge& e : g.edges) edges.emplace_back(e.from, e.to);
    return GameInstance(std::move(names), g.directed, edges, cat, mouse, hole);
  }

  std::size_t size() const { return names_.size(); }
  bool directed() const { return directed_; }
  NodeId cat_start() const { return cat_start_; }
  NodeId mouse_start() const { return mouse_start_; }
  NodeId hole() const { return hole_; }
  GameState initial() const { return {cat_start_, mouse_start_, Player::Cat}; }

  std::span<const NodeId> moves(NodeId v) const { return {out_.data() + out_off_[v], out_.data() + out_off_[v + 1]}; }
  std::span<const NodeId> preds(NodeId v) const { return {in_.data() + in_off_[v], in_.data() + in_off_[v + 1]}; }
  bool can_move(NodeId from, NodeId to) const {
    auto m = moves(from);
    return std::binary_search(m.begin(), m.end(), to);
  }

  const std::string& name(NodeId v) const { return names_.at(v); }
  std::uint32_t name_rank(NodeId v) const { return name_rank_[v]; }
  NodeId find(std::string_view name) const {
    for (NodeId v = 0; v < names_.size(); ++v)
      if (names_[v] == name) return v;
    return kNoNode;
  }

 private:
  std::vector<std::string> names_;
  bool directed_;
  NodeId cat_start_, mouse_start_, hole_;
  std::vector<std::uint32_t> out_off_, in_off_;
  std::vector<NodeId> out_, in_;
  std::vector<std::uint32_t> name_rank_;
};

enum class Terminal { CatTerminal, MouseTerminal, Open };

inline Terminal classify(const GameState& s, const GameInstance& inst) {
  if (s.cat == s.mouse) return Terminal::CatTerminal;
  if (s.mouse == inst.hole()) return Terminal::MouseTerminal;
  return Terminal::Open;
}

/// Values for all |V|^2 * 2 states. `dist` is the number of plies to
/// termination under optimal play (-1 for draws).
class Solution {
 public:
  Solution(GameInstance inst, std::vector<Outcome> value, std::vector<std::int32_t> dist)
      : inst_(std::move(inst)), value_(std::move(value)), dist_(std::move(dist)) {}

  const GameInstance& instance() const { return inst_; }

  std::size_t index(const GameState& s) const {
    return (s.cat * inst_.size() + s.mouse) * 2 + (s.turn == Player::Cat ? 0 : 1);
  }
  GameState state(std::size_t idx) const {
    const std::size_t n = inst_.size();
    return {idx / 2 / n, (idx / 2) % n, idx % 2 == 0 ? Player::Cat : Player::Mouse};
  }
  std::size_t num_states() const { return value_.size(); }

  Outcome value(const GameState& s) const { return value_[index(s)]; }
  std::int32_t dist(const GameState& s) const { return dist_[index(s)]; }
  Outcome outcome() const { return value(inst_.initial()); }

  /// Optimal move for the player to move. The winner takes the quickest
  /// win, the loser the slowest loss, a drawing player stays in the draw
  /// region; remaining ties go to the lexicographically smallest node id.
  /// Empty for terminal states and stuck players.
  std::optional<NodeId> best_move(const GameState& s) const {
    if (classify(s, inst_) != Terminal::Open) return std::nullopt;
    const Outcome own = win_for(s.turn);
    const Outcome v = value(s);
    std::optional<NodeId> best;
    std::int32_t best_dist = 0;
    for (NodeId to : inst_.moves(s.mover())) {
      GameState next = s.after(to);
      if (value(next) != v) continue;
      std::int32_t d = dist(next);
      bool better;
      if (!best) better = true;
      else if (v == own && d != best_dist) better = d < best_dist;
      else if (v != own && v != Outcome::Draw && d != best_dist) better = d > best_dist;
      else better = inst_.name_rank(to) < inst_.name_rank(*best);
      if (better) {
        best = to;
        best_dist = d;
      }
    }
    return best;
  }

 private:
  GameInstance inst_;
  std::vector<Outcome> value_;
  std::vector<std::int32_t> dist_;
};

/// Retrograde attractor computation: terminal and stuck states seed a
/// breadth-first backward sweep; a state joins the mover's win set when some
/// move reaches it and the opponent's when its last escaping move is
/// exhausted. Whatever is left is a draw.
inline Solution solve(const GameInstance& inst) {
  const std::size_t n = inst.size();
  const std::size_t states = n * n * 2;
  std::vector<Outcome> value(states, Outcome::Draw);
  std::vector<std::int32_t> dist(states, -1);
  std::vector<std::uint32_t> remaining(states, 0);
  std::vector<std::uint32_t> queue;
  queue.reserve(states);

  auto idx = [n](NodeId cat, NodeId mouse, int turn) { return (cat * n + mouse) * 2 + static_cast<std::size_t>(turn); };

  for (NodeId cat = 0; cat < n; ++cat) {
    for (NodeId mouse = 0; mouse < n; ++mouse) {
      for (int turn = 0; turn < 2; ++turn) {
        const std::size_t s = idx(cat, mouse, turn);
        if (cat == mouse) {
          value[s] = Outcome::CatWin;
        } else if (mouse == inst.hole()) {
          value[s] = Outcome::MouseWin;
        } else {
          NodeId mover = turn == 0 ? cat : mouse;
          remaining[s] = static_cast<std::uint32_t>(inst.moves(mover).size());
          if (remaining[s] != 0) continue;
          value[s] = turn == 0 ? Outcome::MouseWin : Outcome::CatWin;
        }
        dist[s] = 0;
        queue.push_back(static_cast<std::uint32_t>(s));
      }
    }
  }

  for (std::size_t head = 0; head < queue.size(); ++head) {
    const std::size_t s = queue[head];
    const Outcome v = value[s];
    const std::int32_t next_dist = dist[s] + 1;
    const NodeId cat = s / 2 / n, mouse = (s / 2) % n;
    const int turn = static_cast<int>(s % 2);
    // The predecessor had the other player to move.
    const int pturn = 1 - turn;
    const Outcome pwin = pturn == 0 ? Outcome::CatWin : Outcome::MouseWin;
    auto visit = [&](std::size_t p) {
      if (dist[p] >= 0) return;
      if (v == pwin || --remaining[p] == 0) {
        value[p] = v;
        dist[p] = next_dist;
        queue.push_back(static_cast<std::uint32_t>(p));
      }
    };
    if (pturn == 0) {
      for (NodeId from : inst.preds(cat)) visit(idx(from, mouse, 0));
    } else {
      for (NodeId from : inst.preds(mouse)) visit(idx(cat, from, 1));
    }
  }
  return Solution(inst, std::move(value), std::move(dist));
}

inline Outcome outcome(const GameInstance& inst) { return solve(inst).outcome(); }

// ---------------------------------------------------------------------------
// Match play

/// A deterministic move chooser for whichever player is to move.
using Strategy = std::function<NodeId(const GameState&)>;

enum class EndReason { Capture, Hole, Repetition, Stuck, PlyLimit };

inline std::string_view to_string(EndReason r) {
  switch (r) {
    case EndReason::Capture: return "capture";
    case EndReason::Hole: return "hole";
    case EndReason::Repetition: return "repetition";
    case EndReason::Stuck: return "stuck";
    case EndReason::PlyLimit: return "ply-limit";
  }
  return "?";
}

struct Ply {
  Player player;
  NodeId from;
  NodeId to;
};

struct Transcript {
  std::vector<GameState> states;  // states[0] is the start
  std::vector<Ply> plies;
  Outcome result = Outcome::Draw;
  EndReason reason = EndReason::PlyLimit;

  std::size_t length() const { return plies.size(); }

  std::string str(const GameInstance& inst) const {
    std::string out;
    for (std::size_t i = 0; i < plies.size(); ++i) {
      out += "ply " + std::to_string(i + 1) + " " + std::string(to_string(plies[i].player)) + " " +
             inst.name(plies[i].from) + " -> " + inst.name(plies[i].to) + "\n";
    }
    out += "result " + std::string(to_string(result)) + " " + std::string(to_string(reason)) + "\n";
    return out;
  }
};

/// Plays from `start` (default: the initial state, Cat to move).
inline Transcript play_match(const GameInstance& inst, const Strategy& cat_policy, const Strategy& mouse_policy,
                             std::size_t max_plies, std::optional<GameState> start = std::nullopt) {
  Transcript t;
  GameState s = start.value_or(inst.initial());
  t.states.push_back(s);

  auto finished = [&](const GameState& st) {
    switch (classify(st, inst)) {
      case Terminal::CatTerminal:
        t.result = Outcome::CatWin;
        t.reason = EndReason::Capture;
        return true;
      case Terminal::MouseTerminal:
        t.result = Outcome::MouseWin;
        t.reason = EndReason::Hole;
        return true;
      case Terminal::Open:
        return false;
    }
    return false;
  };
  if (finished(s)) return t;

  struct Hash {
    std::size_t operator()(const GameState& g) const {
      return std::hash<std::size_t>()(g.cat * 1000003u + g.mouse * 2 + static_cast<std::size_t>(g.turn));
    }
  };
  std::unordered_set<GameState, Hash> seen{s};

  while (t.plies.size() < max_plies) {
    const NodeId from = s.mover();
    if (inst.moves(from).empty()) {
      t.result = win_for(other(s.turn));
      t.reason = EndReason::Stuck;
      return t;
    }
    const NodeId to = (s.turn == Player::Cat ? cat_policy : mouse_policy)(s);
    if (to >= inst.size() || !inst.can_move(from, to))
      throw Error(ErrorCode::PolicyIllegalMove, std::string(to_string(s.turn)),
                  inst.name(from) + " -> " + (to < inst.size() ? inst.name(to) : std::string("?")));
    t.plies.push_back({s.turn, from, to});
    s = s.after(to);
    t.states.push_back(s);
    if (finished(s)) return t;
    if (!seen.insert(s).second) {
      t.result = Outcome::Draw;
      t.reason = EndReason::Repetition;
      return t;
    }
  }
  t.result = Outcome::Draw;
  t.reason = EndReason::PlyLimit;
  return t;
}

/// Plays `best_move` from the solution for whichever side uses it.
inline Strategy optimal_strategy(const Solution& sol) {
  return [&sol](const GameState& s) {
    auto mv = sol.best_move(s);
    if (!mv) throw Error(ErrorCode::NoMove, sol.instance().name(s.mover()), "no optimal move available");
    return *mv;
  };
}

// ---------------------------------------------------------------------------
// Independent oracle

/// Exhaustive game-tree search that scores a state already on the current
/// line as a draw. No memoisation; exponential, so limited to tiny graphs.
inline Outcome minimax_oracle(const GameInstance& inst, std::optional<GameState> start = std::nullopt) {
  constexpr std::size_t kMaxNodes = 10;
  const std::size_t n = inst.size();
  if (n > kMaxNodes)
    throw Error(ErrorCode::TooLarge, std::to_string(n) + " nodes", "oracle is limited to 10 nodes");
  std::vector<bool> on_line(n * n * 2, false);

  std::function<Outcome(const GameState&)> search = [&](const GameState& s) -> Outcome {
    switch (classify(s, inst)) {
      case Terminal::CatTerminal: return Outcome::CatWin;
      case Terminal::MouseTerminal: return Outcome::MouseWin;
      case Terminal::Open: break;
    }
    const std::size_t key = (s.cat * n + s.mouse) * 2 + (s.turn == Player::Cat ? 0 : 1);
    if (on_line[key]) return Outcome::Draw;
    const Outcome own = win_for(s.turn);
    Outcome best = win_for(other(s.turn));
    on_line[key] = true;
    for (NodeId to : inst.moves(s.mover())) {
      Outcome r = search(s.after(to));
      if (r == own) {
        best = own;
        break;
      }
      if (r == Outcome::Draw) best = Outcome::Draw;
    }
    on_line[key] = false;
    return best;
  };
  return search(start.value_or(inst.initial()));
}

}  // namespace catmouse
