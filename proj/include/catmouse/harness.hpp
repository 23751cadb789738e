#pragma once

// End-to-end checks that a built game agrees with the circuit it came from.

#include <atomic>
#include <deque>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "catmouse/circuit.hpp"
#include "catmouse/reduction.hpp"
#include "catmouse/solver.hpp"
#include "catmouse/strategy.hpp"

namespace catmouse {

enum class Mode { Directed, Undirected };

inline std::string_view to_string(Mode m) { return m == Mode::Directed ? "directed" : "undirected"; }

struct Modes {
  bool directed = true;
  bool undirected = true;

  std::vector<Mode> list() const {
    std::vector<Mode> out;
    if (directed) out.push_back(Mode::Directed);
    if (undirected) out.push_back(Mode::Undirected);
    return out;
  }
};

inline BuiltGame build(const Circuit& c, const Assignment& x, Mode m) {
  return m == Mode::Directed ? build_directed(c, x) : build_undirected(c, x);
}

/// Generous bound on match length: no line of play can avoid repeating a
/// state for longer than the state count.
inline std::size_t match_ply_limit(const GameInstance& inst) { return 2 * inst.size() * inst.size() + 2; }

struct VerificationReport {
  bool value = false;
  std::optional<Outcome> directed;
  std::optional<Outcome> undirected;
  bool equivalence_ok = false;
  bool draw_seen = false;
  std::optional<GraphStats> directed_stats;
  std::optional<GraphStats> undirected_stats;
  std::string assignment;

  std::string str() const {
    std::ostringstream out;
    out << "assignment " << assignment << '\n';
    out << "circuit-value " << (value ? 1 : 0) << '\n';
    auto show = [&](std::string_view name, const std::optional<Outcome>& o, const std::optional<GraphStats>& st) {
      if (!o) return;
      out << name << ' ' << to_string(*o) << " nodes=" << st->nodes << " edges=" << st->edges << '\n';
    };
    show("directed", directed, directed_stats);
    show("undirected", undirected, undirected_stats);
    out << "initial-draw " << (draw_seen ? "yes" : "no") << '\n';
    out << "equivalence " << (equivalence_ok ? "ok" : "MISMATCH") << '\n';
    return out.str();
  }
};

inline bool outcome_matches(bool value, Outcome o) { return o == (value ? Outcome::MouseWin : Outcome::CatWin); }

/// Builds and solves each requested game and compares its initial value
/// with the circuit value.
inline VerificationReport verify_equivalence(const Circuit& c, const Assignment& x, Modes modes = {}) {
  VerificationReport r;
  r.assignment = x.str();
  r.value = evaluate(c, x).first;
  r.equivalence_ok = true;
  for (Mode m : modes.list()) {
    BuiltGame game = build(c, x, m);
    Outcome o = outcome(GameInstance::from_graph(game.graph));
    if (o == Outcome::Draw) r.draw_seen = true;
    if (!outcome_matches(r.value, o)) r.equivalence_ok = false;
    (m == Mode::Directed ? r.directed : r.undirected) = o;
    (m == Mode::Directed ? r.directed_stats : r.undirected_stats) = stats(game.graph);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Fuzzing

struct FuzzParams {
  int max_layers = 2;
  int max_width = 3;
  int max_inputs = 4;
  std::optional<double> p_or;  // unset: drawn per circuit
  bool fanout2 = false;
  Modes modes;
  unsigned threads = 0;  // 0: hardware concurrency
};

struct FuzzFailure {
  std::size_t instance = 0;
  std::uint64_t seed = 0;
  std::string circuit;
  std::string assignment;
  std::string mode;
  std::string detail;

  std::string bundle() const {
    std::ostringstream out;
    out << "# reproducer: instance " << instance << " seed " << seed << " mode " << mode << " assignment "
        << assignment << '\n'
        << "# " << detail << '\n'
        << circuit;
    return out.str();
  }
};

struct FuzzSummary {
  std::size_t n = 0;
  std::size_t passed = 0;
  std::size_t checks = 0;  // (circuit, assignment, mode) triples solved
  std::vector<FuzzFailure> failures;

  bool ok() const { return passed == n; }
  std::string str() const {
    std::ostringstream out;
    out << passed << "/" << n << (ok() ? " ok" : " FAILED") << '\n';
    for (const FuzzFailure& f : failures) out << f.bundle();
    return out.str();
  }
};

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Instance `i` of a fuzz run is a pure function of (params, seed, i).
inline GeneratorParams fuzz_instance_params(const FuzzParams& fp, std::uint64_t seed, std::size_t i) {
  Rng rng(splitmix64(seed ^ splitmix64(i)));
  GeneratorParams gp;
  gp.layers = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(fp.max_layers)));
  gp.width = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(fp.max_width)));
  gp.inputs = 1 + static_cast<int>(rng.below(static_cast<std::size_t>(fp.max_inputs)));
  gp.p_or = fp.p_or ? *fp.p_or : rng.unit();
  gp.fanout2 = fp.fanout2;
  if (gp.fanout2) gp.width = std::min(gp.width, gp.inputs);
  gp.seed = rng.next();
  return gp;
}

/// Every assignment when the circuit has at most 6 inputs, else 16 seeded
/// samples.
inline std::vector<Assignment> fuzz_assignments(const Circuit& c, std::uint64_t seed) {
  std::vector<Assignment> out;
  const std::size_t k = c.num_inputs;
  if (k <= 6) {
    for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) out.push_back(Assignment::from_mask(mask, k));
  } else {
    Rng rng(splitmix64(seed));
    for (int i = 0; i < 16; ++i) {
      Assignment a;
      for (std::size_t b = 0; b < k; ++b) a.bits.push_back(rng.below(2) == 1);
      out.push_back(std::move(a));
    }
  }
  return out;
}

/// Runs `work(i)` for i in [0, n) on a small pool; results land by index so
/// the merge order never depends on scheduling.
template <typename Result, typename Fn>
std::vector<Result> run_indexed(std::size_t n, unsigned threads, Fn work) {
  std::vector<Result> results(n);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(n, 1)));
  std::atomic<std::size_t> next{0};
  auto loop = [&] {
    for (std::size_t i = next++; i < n; i = next++) results[i] = work(i);
  };
  if (threads <= 1) {
    loop();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(loop);
  }
  return results;
}

inline FuzzSummary fuzz_equivalence(const FuzzParams& fp, std::uint64_t seed, std::size_t n) {
  struct One {
    std::size_t checks = 0;
    std::vector<FuzzFailure> failures;
  };
  auto results = run_indexed<One>(n, fp.threads, [&](std::size_t i) {
    One one;
    GeneratorParams gp = fuzz_instance_params(fp, seed, i);
    Circuit c = generate_random(gp);
    for (const Assignment& x : fuzz_assignments(c, gp.seed)) {
      VerificationReport r = verify_equivalence(c, x, fp.modes);
      one.checks += fp.modes.list().size();
      if (r.equivalence_ok && !r.draw_seen) continue;
      for (Mode m : fp.modes.list()) {
        Outcome o = *(m == Mode::Directed ? r.directed : r.undirected);
        if (outcome_matches(r.value, o)) continue;
        one.failures.push_back({i, gp.seed, serialize_circuit(c), x.str(), std::string(to_string(m)),
                                "circuit value " + std::to_string(r.value) + " but game value " +
                                    std::string(to_string(o))});
      }
    }
    return one;
  });
  FuzzSummary s;
  s.n = n;
  for (One& one : results) {
    s.checks += one.checks;
    if (one.failures.empty()) ++s.passed;
    for (FuzzFailure& f : one.failures) s.failures.push_back(std::move(f));
  }
  return s;
}

// ---------------------------------------------------------------------------
// Structural invariants of a built game

inline std::size_t expected_node_count(const Circuit& c) {
  const LayerMap lm = validate_layers(c);
  std::size_t escape = 0;
  for (int j : lm.gate_layer) escape += 2 * static_cast<std::size_t>(3 * j - 2);
  return 10 * c.gates.size() + 2 * c.num_inputs + 3 + escape;
}

/// Returns one message per violated invariant; empty means the build is
/// well formed.
inline std::vector<std::string> structural_violations(const Circuit& c, const Assignment& x, const BuiltGame& game) {
  std::vector<std::string> bad;
  const GameGraph& g = game.graph;
  const CorrespondenceMap& map = game.map;
  auto edge_name = [&](const GameEdge& e) { return g.id(e.from) + (g.directed ? "->" : "--") + g.id(e.to); };

  // Layering: in the directed build every edge drops exactly one layer.
  for (const GameEdge& e : g.edges) {
    int la = map.layer[e.from], lb = map.layer[e.to];
    bool ok = g.directed ? la == lb + 1 : std::abs(la - lb) == 1;
    if (!ok) bad.push_back("edge " + edge_name(e) + " spans layers " + std::to_string(la) + "," + std::to_string(lb));
  }

  if (g.size() != expected_node_count(c))
    bad.push_back("node count " + std::to_string(g.size()) + " != " + std::to_string(expected_node_count(c)));

  std::size_t ands = 0;
  for (const Gate& gate : c.gates) ands += gate.kind == GateKind::And;
  std::map<EdgeTag, std::size_t> tag_count;
  for (const GameEdge& e : g.edges) ++tag_count[e.tag];
  if (tag_count[EdgeTag::Threat] != 2 * ands)
    bad.push_back("threat edges " + std::to_string(tag_count[EdgeTag::Threat]) + " != 2*#AND");

  // Cat start: one edge, to the output gadget's Cat-side node 1.
  std::size_t c_deg = 0;
  for (const GameEdge& e : g.edges)
    if (e.from == g.c || e.to == g.c) ++c_deg;
  if (c_deg != 1) bad.push_back("cat start has degree " + std::to_string(c_deg));
  GadgetIndex idx(c, g);
  if (!g.has_edge(g.c, idx.gadget(c.output, Side::Cat, 1))) bad.push_back("cat start not wired to output C1");
  if (g.m != idx.gadget(c.output, Side::Mouse, 1)) bad.push_back("mouse start is not the output M1");

  // Correspondence: layer-preserving bijection, and an isomorphism between
  // the two subgraphs on their internal edges.
  std::set<std::pair<NodeId, NodeId>> mouse_edges, cat_edges;
  for (const GameEdge& e : g.edges) {
    if (e.tag != EdgeTag::GadgetInternal && e.tag != EdgeTag::InterGadget) continue;
    if (g.role(e.from).on_side(Side::Mouse) && g.role(e.to).on_side(Side::Mouse)) mouse_edges.insert({e.from, e.to});
    else if (g.role(e.from).on_side(Side::Cat) && g.role(e.to).on_side(Side::Cat)) cat_edges.insert({e.from, e.to});
    else bad.push_back("subgraph edge " + edge_name(e) + " crosses sides");
  }
  for (NodeId n = 0; n < g.size(); ++n) {
    if (!g.role(n).on_side(Side::Mouse)) continue;
    NodeId partner = map.cat_of[n];
    if (partner == kNoNode || map.mouse_of[partner] != n) bad.push_back("cat_of not a bijection at " + g.id(n));
    else if (map.layer[partner] != map.layer[n]) bad.push_back("cat_of changes layer at " + g.id(n));
  }
  if (mouse_edges.size() != cat_edges.size()) bad.push_back("Mouse and Cat subgraphs differ in edge count");
  for (auto [a, b] : mouse_edges)
    if (!cat_edges.count({map.cat_of[a], map.cat_of[b]}))
      bad.push_back("Mouse edge " + g.id(a) + "->" + g.id(b) + " has no Cat image");

  // Guard edges: exactly one per Mouse-subgraph edge (m1, m2), joining m1 and
  // cat_of(m2).
  if (!g.directed) {
    std::set<std::pair<NodeId, NodeId>> expected;
    for (auto [a, b] : mouse_edges) expected.insert({a, map.cat_of[b]});
    std::set<std::pair<NodeId, NodeId>> seen;
    for (const GameEdge& e : g.edges) {
      if (e.tag != EdgeTag::Guard) continue;
      if (!expected.count({e.from, e.to})) bad.push_back("unexpected guard edge " + edge_name(e));
      seen.insert({e.from, e.to});
    }
    if (seen.size() != expected.size() || tag_count[EdgeTag::Guard] != expected.size())
      bad.push_back("guard edges " + std::to_string(tag_count[EdgeTag::Guard]) + " != Mouse subgraph edges " +
                    std::to_string(expected.size()));
  } else if (tag_count[EdgeTag::Guard] != 0) {
    bad.push_back("directed build carries guard edges");
  }

  // Escape chains: per gadget and branch, a private chain whose route from
  // node 4/5 to the Hole is exactly layer(node 4/5) long.
  const LayerMap lm = validate_layers(c);
  std::map<NodeId, int> escape_owner;
  for (std::size_t gi = 0; gi < c.gates.size(); ++gi) {
    const int j = lm.gate_layer[gi];
    for (Branch b : {Branch::Left, Branch::Right}) {
      const int pos = b == Branch::Left ? 4 : 5;
      NodeId start = idx.gadget(gi, Side::Mouse, pos);
      NodeId cur = idx.escape_entry(gi, b);
      if (!g.has_edge(start, cur) || !g.has_edge(idx.gadget(gi, Side::Cat, pos), cur))
        bad.push_back("escape entry of " + c.gates[gi].id + " not wired to both sides");
      int length = 1;
      int chain = 0;
      while (cur != g.h) {
        const NodeRole& r = g.role(cur);
        if (r.kind != RoleKind::Escape || r.gate != c.gates[gi].id || r.branch != b) {
          bad.push_back("escape chain of " + c.gates[gi].id + " leaves its route at " + g.id(cur));
          break;
        }
        if (!escape_owner.emplace(cur, static_cast<int>(gi * 2 + (b == Branch::Right))).second)
          bad.push_back("escape node " + g.id(cur) + " shared between chains");
        ++chain;
        NodeId next = r.chain_index == 3 * j - 2 ? g.h
                                                 : g.find(NodeRole::escape(r.gate, b, r.chain_index + 1).default_id());
        if (next == kNoNode || !g.has_edge(cur, next)) {
          bad.push_back("escape chain of " + c.gates[gi].id + " broken at " + g.id(cur));
          break;
        }
        cur = next;
        ++length;
      }
      if (chain != 3 * j - 2) bad.push_back("escape chain of " + c.gates[gi].id + " has " + std::to_string(chain) + " nodes");
      if (length != map.layer[start]) bad.push_back("escape route of " + c.gates[gi].id + " not length-matched");
    }
  }

  // Forward reachability: every subgraph node except false inputs reaches
  // the Hole through layer-decreasing edges, and the stored layer is its
  // breadth-first distance to the Hole in the directed build.
  if (g.directed) {
    std::vector<int> dist(g.size(), -1);
    std::vector<std::vector<NodeId>> rev(g.size());
    for (const GameEdge& e : g.edges) rev[e.to].push_back(e.from);
    std::deque<NodeId> q{g.h};
    dist[g.h] = 0;
    while (!q.empty()) {
      NodeId v = q.front();
      q.pop_front();
      for (NodeId u : rev[v])
        if (dist[u] < 0) {
          dist[u] = dist[v] + 1;
          q.push_back(u);
        }
    }
    for (NodeId n = 0; n < g.size(); ++n) {
      const NodeRole& r = g.role(n);
      if (n == g.d || n == g.h) continue;
      if (r.kind == RoleKind::Input && !x[r.input]) continue;
      if (dist[n] != map.layer[n])
        bad.push_back("node " + g.id(n) + " layer " + std::to_string(map.layer[n]) + " but distance " +
                      std::to_string(dist[n]));
    }
  }
  return bad;
}

// ---------------------------------------------------------------------------
// Proof strategies in play

struct ProofPlayReport {
  bool value = false;
  std::optional<Outcome> mirror_vs_optimal;     // false circuits
  std::optional<Outcome> truepath_vs_optimal;   // true circuits
  Outcome scripted = Outcome::Draw;             // mirror cat vs true-path mouse
  std::size_t scripted_length = 0;              // plies, both players
  std::size_t scripted_mouse_moves = 0;
  std::size_t mouse_start_layer = 0;            // layer(m)
  std::vector<std::string> events;  // NoMove / NoSafeMove / illegal moves

  bool ok() const {
    if (!events.empty()) return false;
    if (value && truepath_vs_optimal != Outcome::MouseWin) return false;
    if (!value && mirror_vs_optimal != Outcome::CatWin) return false;
    if (!outcome_matches(value, scripted)) return false;
    // Won along the true path: the opening plus one forward Mouse move per
    // layer, i.e. layer(m)+1 counted that way and 2*layer(m) plies overall.
    return !value || (scripted_mouse_moves == mouse_start_layer && scripted_length == 2 * mouse_start_layer);
  }
};

/// Pits the scripted strategies against the solver and against each
/// other on one built game.
inline ProofPlayReport play_proof_strategies(const Circuit& c, const Assignment& x, const BuiltGame& game,
                                             const Solution& sol) {
  ProofPlayReport r;
  auto ctx = make_context(c, game, x);
  r.value = ctx->values.gates[c.output];
  r.mouse_start_layer = static_cast<std::size_t>(game.map.layer[game.graph.m]);
  const GameInstance& inst = sol.instance();
  const std::size_t limit = match_ply_limit(inst);

  auto guarded = [&](auto&& fn) -> std::optional<Transcript> {
    try {
      return fn();
    } catch (const Error& e) {
      r.events.push_back(e.what());
      return std::nullopt;
    }
  };

  if (r.value) {
    if (auto t = guarded([&] { return play_match(inst, optimal_strategy(sol), make_true_path_mouse(ctx), limit); }))
      r.truepath_vs_optimal = t->result;
  } else {
    if (auto t = guarded([&] { return play_match(inst, make_mirror_cat(ctx), optimal_strategy(sol), limit); }))
      r.mirror_vs_optimal = t->result;
  }
  if (auto t = guarded([&] { return play_match(inst, make_mirror_cat(ctx), make_true_path_mouse(ctx), limit); })) {
    r.scripted = t->result;
    r.scripted_length = t->length();
    r.scripted_mouse_moves = static_cast<std::size_t>(
        std::count_if(t->plies.begin(), t->plies.end(), [](const Ply& p) { return p.player == Player::Mouse; }));
  }
  return r;
}

// ---------------------------------------------------------------------------
// Undirected deviations

enum class Deviation { MouseBacktracks, MouseCrossesThreat, MouseCrossesGuard, CatBacktracks };

inline std::string_view to_string(Deviation d) {
  switch (d) {
    case Deviation::MouseBacktracks: return "mouse-backtracks";
    case Deviation::MouseCrossesThreat: return "mouse-crosses-threat-edge";
    case Deviation::MouseCrossesGuard: return "mouse-crosses-guard-edge";
    case Deviation::CatBacktracks: return "cat-backtracks";
  }
  return "?";
}

struct ProbeResult {
  Deviation kind = Deviation::MouseBacktracks;
  std::size_t attempts = 0;   // deviation points exercised
  std::size_t confirmed = 0;  // attempts that ended as predicted
  std::vector<std::string> failures;

  bool ok() const { return failures.empty(); }
  bool demonstrated() const { return attempts > 0 && confirmed == attempts; }
};

struct ProbeReport {
  std::vector<ProbeResult> probes;

  bool ok() const {
    return std::all_of(probes.begin(), probes.end(), [](const ProbeResult& p) { return p.ok(); });
  }
  const ProbeResult& at(Deviation d) const {
    for (const ProbeResult& p : probes)
      if (p.kind == d) return p;
    throw std::out_of_range("probe not run");
  }
  std::string str() const {
    std::ostringstream out;
    for (const ProbeResult& p : probes) {
      out << "probe " << to_string(p.kind) << ' ' << p.confirmed << '/' << p.attempts << '\n';
      for (const std::string& f : p.failures) out << "  " << f << '\n';
    }
    return out.str();
  }
};

namespace detail {

/// Candidate deviating moves for Mouse at `s`.
inline std::vector<NodeId> mouse_deviations(const ReductionContext& ctx, const GameState& s, Deviation kind) {
  std::vector<NodeId> out;
  const GameGraph& g = ctx.graph();
  const auto& layer = ctx.map().layer;
  for (NodeId v : ctx.inst.moves(s.mouse)) {
    if (v == s.cat) continue;
    const NodeRole& vr = g.role(v);
    bool backward = layer[v] == layer[s.mouse] + 1;
    switch (kind) {
      case Deviation::MouseBacktracks:
        if (backward && vr.on_side(Side::Mouse)) out.push_back(v);
        break;
      case Deviation::MouseCrossesThreat:
        if (backward && vr.on_side(Side::Cat)) out.push_back(v);
        break;
      case Deviation::MouseCrossesGuard:
        if (!backward && vr.on_side(Side::Cat)) out.push_back(v);
        break;
      default:
        break;
    }
  }
  return out;
}

}  // namespace detail

/// Four scripted deviations on the undirected build: three Mouse deviations
/// against the mirroring Cat, which must capture on the very next ply, and
/// a Cat that steps backward once against the optimal Mouse on a true
/// circuit, which must lose. Every reachable deviation point along the
/// scripted line is tried.
inline ProbeReport targeted_undirected_checks(const Circuit& c, const Assignment& x) {
  ProbeReport report;
  BuiltGame game = build_undirected(c, x);
  auto ctx = make_context(c, game, x);
  const GameInstance& inst = ctx->inst;
  const bool value = ctx->values.gates[c.output];
  const std::size_t main_line = static_cast<std::size_t>(game.map.layer[game.graph.m]) + 1;

  for (Deviation kind : {Deviation::MouseBacktracks, Deviation::MouseCrossesThreat, Deviation::MouseCrossesGuard}) {
    ProbeResult pr;
    pr.kind = kind;
    // Deviation at Mouse's k-th move, trying every candidate move there.
    for (std::size_t k = 1; k <= main_line; ++k) {
      for (std::size_t choice = 0;; ++choice) {
        auto base = make_true_path_mouse(ctx);
        auto moves_made = std::make_shared<std::size_t>(0);
        auto deviated_at = std::make_shared<std::optional<std::size_t>>();
        auto ran_out = std::make_shared<bool>(false);
        Strategy mouse = [&, base, moves_made, deviated_at, ran_out](const GameState& s) -> NodeId {
          ++*moves_made;
          if (*moves_made == k) {
            auto options = detail::mouse_deviations(*ctx, s, kind);
            if (choice < options.size()) {
              *deviated_at = *moves_made;
              return options[choice];
            }
            *ran_out = true;
          }
          return base(s);
        };
        Transcript t;
        try {
          // Stop right after the Cat's reply to the deviation.
          t = play_match(inst, make_mirror_cat(ctx), mouse, 2 * k + 1);
        } catch (const Error& e) {
          pr.failures.push_back("k=" + std::to_string(k) + ": " + e.what());
          break;
        }
        if (!deviated_at->has_value()) break;
        ++pr.attempts;
        // Mouse's k-th move is ply 2k; the capture must come at ply 2k+1.
        if (t.result == Outcome::CatWin && t.reason == EndReason::Capture && t.length() == 2 * k + 1)
          ++pr.confirmed;
        else
          pr.failures.push_back("k=" + std::to_string(k) + ": deviation " + inst.name(t.plies[2 * k - 1].from) +
                                " -> " + inst.name(t.plies[2 * k - 1].to) + " ended " +
                                std::string(to_string(t.result)) + " after " + std::to_string(t.length()) + " plies");
        if (*ran_out) break;
      }
    }
    report.probes.push_back(std::move(pr));
  }

  ProbeResult cat_probe;
  cat_probe.kind = Deviation::CatBacktracks;
  if (value) {
    Solution sol = solve(inst);
    for (std::size_t k = 2; k <= main_line; ++k) {
      auto mirror = make_mirror_cat(ctx);
      auto optimal = optimal_strategy(sol);
      auto moves_made = std::make_shared<std::size_t>(0);
      auto deviated = std::make_shared<bool>(false);
      Strategy cat = [&, mirror, optimal, moves_made, deviated](const GameState& s) -> NodeId {
        ++*moves_made;
        if (*deviated) return optimal(s);
        if (*moves_made == k) {
          for (NodeId v : inst.moves(s.cat))
            if (game.map.layer[v] == game.map.layer[s.cat] + 1 && v != s.mouse) {
              *deviated = true;
              return v;
            }
        }
        return mirror(s);
      };
      Transcript t;
      try {
        t = play_match(inst, cat, optimal_strategy(sol), match_ply_limit(inst));
      } catch (const Error& e) {
        cat_probe.failures.push_back("k=" + std::to_string(k) + ": " + e.what());
        continue;
      }
      if (!*deviated) continue;
      ++cat_probe.attempts;
      if (t.result == Outcome::MouseWin) ++cat_probe.confirmed;
      else cat_probe.failures.push_back("k=" + std::to_string(k) + ": ended " + std::string(to_string(t.result)));
    }
  }
  report.probes.push_back(std::move(cat_probe));
  return report;
}

}  // namespace catmouse
