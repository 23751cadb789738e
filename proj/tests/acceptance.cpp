// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <queue>
#include <sstream>
#include <string>

#include "catmouse/harness.hpp"
#include "random_games.hpp"

using namespace catmouse;

namespace {

constexpr std::uint64_t kSeed = 1;
constexpr std::size_t kCircuits = 200;

FuzzParams corpus_params() {
  FuzzParams fp;
  fp.max_layers = 4;
  fp.max_width = 6;
  fp.max_inputs = 6;
  return fp;  // p_or drawn per circuit
}

struct Instance {
  Circuit circuit;
  std::vector<Assignment> assignments;
};

std::vector<Instance> corpus() {
  const FuzzParams fp = corpus_params();
  std::vector<Instance> out;
  for (std::size_t i = 0; i < kCircuits; ++i) {
    GeneratorParams gp = fuzz_instance_params(fp, kSeed, i);
    Circuit c = generate_random(gp);
    out.push_back({c, fuzz_assignments(c, gp.seed)});
  }
  return out;
}

int failures = 0;

void report(int id, bool pass, const std::string& what, const std::string& detail) {
  if (!pass) ++failures;
  std::cout << (pass ? "PASS" : "FAIL") << " [" << id << "] " << what << ": " << detail << std::endl;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fixed(double v, int digits) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string fmt_seconds(double s) { return fixed(s, 1) + "s"; }

void criterion_equivalence() {
  auto t0 = std::chrono::steady_clock::now();
  FuzzSummary s = fuzz_equivalence(corpus_params(), kSeed, kCircuits);
  const double secs = seconds_since(t0);
  double lo = 1, hi = 0;
  for (std::size_t i = 0; i < kCircuits; ++i) {
    double p = fuzz_instance_params(corpus_params(), kSeed, i).p_or;
    lo = std::min(lo, p);
    hi = std::max(hi, p);
  }
  std::ostringstream d;
  d << s.passed << "/" << s.n << " circuits, " << s.checks << " (circuit, assignment, mode) solves, p_or in ["
    << fixed(lo, 2) << ", " << fixed(hi, 2) << "], " << fmt_seconds(secs);
  if (!s.failures.empty()) d << "; first failure:\n" << s.failures.front().bundle();
  report(1, s.ok() && s.n >= 200 && secs < 300, "theorem equivalence, both modes, no initial draws", d.str());
}

bool hole_reachable(const GameInstance& inst) {
  std::vector<bool> seen(inst.size(), false);
  std::queue<NodeId> q;
  q.push(inst.mouse_start());
  seen[inst.mouse_start()] = true;
  while (!q.empty()) {
    NodeId v = q.front();
    q.pop();
    for (NodeId w : inst.moves(v))
      if (!seen[w]) {
        seen[w] = true;
        q.push(w);
      }
  }
  return seen[inst.hole()];
}

void criterion_oracle() {
  using test::tiny;
  std::size_t total = 0, mismatches = 0;
  std::size_t directed = 0, undirected = 0, reachable = 0, unreachable = 0;
  std::string first;
  auto check = [&](const GameInstance& inst, const std::string& label) {
    ++total;
    Outcome a = outcome(inst), b = minimax_oracle(inst);
    if (a != b) {
      ++mismatches;
      if (first.empty()) first = label + ": solve " + std::string(to_string(a)) + " oracle " + std::string(to_string(b));
    }
    return a;
  };

  Rng rng(kSeed);
  for (int i = 0; i < 150; ++i) {
    GameInstance inst = test::random_instance(rng, 7);
    (inst.directed() ? directed : undirected)++;
    (hole_reachable(inst) ? reachable : unreachable)++;
    check(inst, "random " + std::to_string(i));
  }

  bool edge_ok = true;
  // Capture at the hole beats arrival.
  edge_ok &= check(tiny(3, true, {{0, 2}, {1, 2}}, 0, 1, 2), "capture precedence") == Outcome::CatWin;
  // Mouse stranded on a sink that is not the hole.
  edge_ok &= check(tiny(4, true, {{0, 3}, {3, 0}}, 0, 1, 2), "stuck mouse") == Outcome::CatWin;
  // Cat with no move.
  edge_ok &= check(tiny(3, true, {{1, 2}}, 0, 1, 2), "stuck cat") == Outcome::MouseWin;
  // 4-cycle with an isolated hole.
  edge_ok &= check(tiny(5, false, {{0, 1}, {1, 2}, {2, 3}, {3, 0}}, 0, 2, 4), "4-cycle") == Outcome::Draw;
  edge_ok &= check(tiny(3, true, {{0, 1}}, 0, 1, 2), "one-move capture") == Outcome::CatWin;
  edge_ok &= check(tiny(4, false, {{0, 1}, {2, 3}}, 0, 2, 3), "split components") == Outcome::MouseWin;

  std::ostringstream d;
  d << total - mismatches << "/" << total << " agree (" << directed << " directed, " << undirected << " undirected, "
    << reachable << " with reachable hole, " << unreachable << " without, 6 hand-built)";
  if (!first.empty()) d << "; " << first;
  if (!edge_ok) d << "; a hand-built case has the wrong value";
  report(2, mismatches == 0 && edge_ok && directed > 0 && undirected > 0 && reachable > 0 && unreachable > 0,
         "solver matches the minimax oracle", d.str());
}

struct CorpusTally {
  std::size_t builds = 0;
  std::size_t structural_bad = 0;
  std::string structural_first;

  std::size_t proof_runs = 0;
  std::size_t proof_bad = 0;
  std::size_t events = 0;
  std::size_t true_wins = 0;
  std::string proof_first;
};

void criteria_structure_and_proof(const std::vector<Instance>& cs) {
  CorpusTally t;
  for (const Instance& inst : cs) {
    for (const Assignment& x : inst.assignments) {
      for (Mode m : {Mode::Directed, Mode::Undirected}) {
        BuiltGame g = build(inst.circuit, x, m);
        ++t.builds;
        auto v = structural_violations(inst.circuit, x, g);
        if (!v.empty() && t.structural_bad++ == 0)
          t.structural_first = std::string(to_string(m)) + " " + x.str() + ": " + v.front();

        Solution sol = solve(GameInstance::from_graph(g.graph));
        ProofPlayReport r = play_proof_strategies(inst.circuit, x, g, sol);
        ++t.proof_runs;
        t.events += r.events.size();
        if (r.value && r.ok()) ++t.true_wins;
        if (!r.ok() && t.proof_bad++ == 0) {
          std::ostringstream d;
          d << to_string(m) << " " << x.str() << " value " << r.value << " scripted " << to_string(r.scripted)
            << " plies " << r.scripted_length << " mouse moves " << r.scripted_mouse_moves << " layer(m) "
            << r.mouse_start_layer;
          if (!r.events.empty()) d << " event " << r.events.front();
          d << "\n" << serialize_circuit(inst.circuit);
          t.proof_first = d.str();
        }
      }
    }
  }
  report(3, t.structural_bad == 0, "structural invariants",
         std::to_string(t.builds - t.structural_bad) + "/" + std::to_string(t.builds) + " built games clean" +
             (t.structural_first.empty() ? "" : "; " + t.structural_first));
  report(4, t.proof_bad == 0 && t.events == 0, "proof strategies",
         std::to_string(t.proof_runs - t.proof_bad) + "/" + std::to_string(t.proof_runs) +
             " games: mirror Cat beats optimal Mouse when false, true-path Mouse beats optimal Cat when true, "
             "scripted match reproduces the value; " +
             std::to_string(t.true_wins) +
             " true-path wins took exactly layer(m) Mouse moves (opening + Mouse moves = layer(m)+1, 2*layer(m) "
             "plies); " +
             std::to_string(t.events) + " NoMove/NoSafeMove events" +
             (t.proof_first.empty() ? "" : "; " + t.proof_first));
}

void criterion_probes(const std::vector<Instance>& cs) {
  std::map<Deviation, std::size_t> demonstrated, attempts;
  std::size_t failed = 0, runs = 0;
  std::string first;
  for (const Instance& inst : cs) {
    for (const Assignment& x : inst.assignments) {
      ProbeReport r = targeted_undirected_checks(inst.circuit, x);
      ++runs;
      for (const ProbeResult& p : r.probes) {
        attempts[p.kind] += p.attempts;
        if (p.demonstrated()) ++demonstrated[p.kind];
        if (!p.ok() && failed++ == 0) first = std::string(to_string(p.kind)) + " " + x.str() + ": " + p.failures.front();
      }
    }
  }
  bool enough = true;
  std::ostringstream d;
  d << runs << " undirected games;";
  for (Deviation k : {Deviation::MouseBacktracks, Deviation::MouseCrossesThreat, Deviation::MouseCrossesGuard,
                      Deviation::CatBacktracks}) {
    d << ' ' << to_string(k) << " on " << demonstrated[k] << " games (" << attempts[k] << " deviations)";
    enough &= demonstrated[k] >= 10;
  }
  d << "; " << failed << " failed";
  if (!first.empty()) d << "; " << first;
  report(5, enough && failed == 0, "undirected deviation probes (capture next ply / MouseWin)", d.str());
}

void criterion_determinism(const std::vector<Instance>& cs) {
  std::size_t circuit_rt = 0, graph_rt = 0, total_graphs = 0;
  std::string first;
  std::vector<Instance> again = corpus();
  bool same_corpus = again.size() == cs.size();
  for (std::size_t i = 0; same_corpus && i < cs.size(); ++i)
    same_corpus = serialize_circuit(cs[i].circuit) == serialize_circuit(again[i].circuit);

  for (const Instance& inst : cs) {
    std::string text = serialize_circuit(inst.circuit);
    Circuit back = parse_circuit(text);
    if (back == inst.circuit && serialize_circuit(back) == text) ++circuit_rt;
    else if (first.empty()) first = "circuit round trip\n" + text;

    for (const Assignment& x : inst.assignments) {
      for (Mode m : {Mode::Directed, Mode::Undirected}) {
        BuiltGame g = build(inst.circuit, x, m);
        ++total_graphs;
        std::string s = export_structured(g.graph, g.map);
        auto [g2, map2] = import_graph(s);
        BuiltGame rebuilt = build(inst.circuit, x, m);
        if (g2 == g.graph && map2 == g.map && export_structured(g2, map2) == s &&
            export_structured(rebuilt.graph, rebuilt.map) == s &&
            export_dot(g.graph, g.map) == export_dot(rebuilt.graph, rebuilt.map))
          ++graph_rt;
        else if (first.empty())
          first = "graph round trip " + x.str() + "\n" + text;
      }
    }
  }

  FuzzParams fp = corpus_params();
  fp.threads = 1;
  FuzzSummary a = fuzz_equivalence(fp, 7, 40);
  fp.threads = 0;
  FuzzSummary b = fuzz_equivalence(fp, 7, 40);
  const bool fuzz_same = a.str() == b.str() && a.checks == b.checks;

  std::ostringstream d;
  d << "corpus regenerated " << (same_corpus ? "identically" : "DIFFERENTLY") << "; fuzz summaries "
    << (fuzz_same ? "identical" : "DIFFER") << " across thread counts; circuits " << circuit_rt << "/" << cs.size()
    << " and structured graphs " << graph_rt << "/" << total_graphs << " round-trip";
  if (!first.empty()) d << "; " << first;
  report(6, same_corpus && fuzz_same && circuit_rt == cs.size() && graph_rt == total_graphs,
         "determinism and round-trips", d.str());
}

}  // namespace

int main() {
  auto t0 = std::chrono::steady_clock::now();
  auto guarded = [](int id, const std::string& what, const std::function<void()>& fn) {
    try {
      fn();
    } catch (const std::exception& e) {
      report(id, false, what, std::string("threw ") + e.what());
    }
  };
  std::vector<Instance> cs = corpus();
  guarded(1, "theorem equivalence", criterion_equivalence);
  guarded(2, "solver matches the minimax oracle", criterion_oracle);
  guarded(3, "structural invariants / proof strategies", [&] { criteria_structure_and_proof(cs); });
  guarded(5, "undirected deviation probes", [&] { criterion_probes(cs); });
  guarded(6, "determinism and round-trips", [&] { criterion_determinism(cs); });
  std::cout << (failures == 0 ? "all criteria pass" : std::to_string(failures) + " criteria fail") << " in "
            << fmt_seconds(seconds_since(t0)) << std::endl;
  return failures == 0 ? 0 : 1;
}
