// catmouse: circuits, the reduction to cat-and-mouse games, and the solver.

#include <cctype>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "catmouse/circuit.hpp"
#include "catmouse/game_graph.hpp"
#include "catmouse/harness.hpp"
#include "catmouse/reduction.hpp"
#include "catmouse/solver.hpp"

using namespace catmouse;

namespace {

constexpr int kOk = 0;
constexpr int kViolated = 1;
constexpr int kUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), std::istreambuf_iterator<char>()};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Circuit load_circuit(const std::string& path) { return parse_circuit(read_input(path)); }

Modes parse_modes(const std::string& m) {
  Modes modes;
  if (m == "directed") modes.undirected = false;
  else if (m == "undirected") modes.directed = false;
  else if (m != "both") throw UsageError("unknown mode " + m);
  return modes;
}

Mode parse_mode(const std::string& m) {
  if (m == "directed") return Mode::Directed;
  if (m == "undirected") return Mode::Undirected;
  throw UsageError("unknown mode " + m);
}

std::string lower(std::string s) {
  for (char& ch : s) ch = static_cast<char>(std::tolower(static_cast<unsigned char>(ch)));
  return s;
}

GameState parse_state(const std::string& text, const GameInstance& inst) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string p; std::getline(ss, p, ',');) parts.push_back(p);
  if (parts.size() != 3) throw UsageError("--state wants cat,mouse,turn");
  GameState s;
  s.cat = inst.find(parts[0]);
  s.mouse = inst.find(parts[1]);
  if (s.cat == kNoNode) throw Error(ErrorCode::UnknownNode, parts[0], "not in the graph");
  if (s.mouse == kNoNode) throw Error(ErrorCode::UnknownNode, parts[1], "not in the graph");
  const std::string turn = lower(parts[2]);
  if (turn == "cat") s.turn = Player::Cat;
  else if (turn == "mouse") s.turn = Player::Mouse;
  else throw UsageError("turn must be cat or mouse");
  return s;
}

int cmd_eval(const std::string& circuit, const std::string& bits) {
  Circuit c = load_circuit(circuit);
  Assignment x = Assignment::parse(bits);
  if (x.size() != c.num_inputs)
    throw Error(ErrorCode::LengthMismatch, "", "circuit has " + std::to_string(c.num_inputs) + " inputs");
  std::cout << (evaluate(c, x).first ? 1 : 0) << '\n';
  return kOk;
}

int cmd_reduce(const std::string& circuit, const std::string& bits, const std::string& mode,
               const std::string& format) {
  Circuit c = load_circuit(circuit);
  BuiltGame game = build(c, Assignment::parse(bits), parse_mode(mode));
  ExportFormat f;
  if (format == "dot") f = ExportFormat::Dot;
  else if (format == "structured") f = ExportFormat::Structured;
  else throw UsageError("unknown format " + format);
  std::cout << export_graph(game.graph, game.map, f);
  GraphStats st = stats(game.graph);
  std::cerr << mode << ": " << st.nodes << " nodes, " << st.edges << " edges\n";
  return kOk;
}

int cmd_solve(const std::string& graph_file, const std::string& state) {
  auto [graph, map] = import_graph(read_input(graph_file));
  GameInstance inst = GameInstance::from_graph(graph);
  GameState start = state.empty() ? inst.initial() : parse_state(state, inst);
  Solution sol = solve(inst);
  std::cout << "outcome " << to_string(sol.value(start)) << '\n';
  std::cout << "dist " << sol.dist(start) << '\n';
  Strategy opt = optimal_strategy(sol);
  Transcript t = play_match(inst, opt, opt, match_ply_limit(inst), start);
  std::cout << t.str(inst);
  return kOk;
}

int cmd_verify(const std::string& circuit, const std::string& bits, const std::string& mode) {
  Circuit c = load_circuit(circuit);
  VerificationReport r = verify_equivalence(c, Assignment::parse(bits), parse_modes(mode));
  std::cout << r.str();
  return r.equivalence_ok && !r.draw_seen ? kOk : kViolated;
}

int cmd_gen(const GeneratorParams& gp) {
  std::cout << serialize_circuit(generate_random(gp));
  return kOk;
}

int cmd_fuzz(FuzzParams fp, std::uint64_t seed, std::size_t n, const std::string& mode) {
  fp.modes = parse_modes(mode);
  FuzzSummary s = fuzz_equivalence(fp, seed, n);
  std::cout << s.str();
  std::cerr << s.checks << " (circuit, assignment, mode) checks\n";
  return s.ok() ? kOk : kViolated;
}

int cmd_play(const std::string& circuit, const std::string& bits, const std::string& mode, const std::string& as) {
  Circuit c = load_circuit(circuit);
  BuiltGame game = build(c, Assignment::parse(bits), parse_mode(mode));
  const std::string side = lower(as);
  if (side != "cat" && side != "mouse") throw UsageError("--as must be cat or mouse");
  const Player human = side == "cat" ? Player::Cat : Player::Mouse;

  GameInstance inst = GameInstance::from_graph(game.graph);
  Solution sol = solve(inst);
  Strategy opt = optimal_strategy(sol);

  Strategy person = [&](const GameState& s) -> NodeId {
    auto moves = inst.moves(s.mover());
    std::cout << "cat " << inst.name(s.cat) << " mouse " << inst.name(s.mouse) << '\n';
    std::cout << "legal:";
    for (NodeId v : moves) std::cout << ' ' << inst.name(v);
    std::cout << '\n';
    for (;;) {
      std::cout << to_string(human) << "> " << std::flush;
      std::string line;
      if (!std::getline(std::cin, line)) {
        std::cout << '\n';
        throw UsageError("input ended");
      }
      std::stringstream ls(line);
      std::string want;
      ls >> want;
      NodeId v = inst.find(want);
      if (v != kNoNode && inst.can_move(s.mover(), v)) return v;
      std::cout << "not a legal move: " << want << '\n';
    }
  };
  auto echo = [&](Strategy inner) {
    return Strategy([&, inner](const GameState& s) {
      NodeId v = inner(s);
      std::cout << to_string(s.turn) << " moves " << inst.name(s.mover()) << " -> " << inst.name(v) << '\n';
      return v;
    });
  };

  std::cerr << "circuit value " << evaluate(c, Assignment::parse(bits)).first << ", solver says "
            << to_string(sol.outcome()) << '\n';
  Transcript t = human == Player::Cat ? play_match(inst, person, echo(opt), match_ply_limit(inst))
                                      : play_match(inst, echo(opt), person, match_ply_limit(inst));
  std::cout << t.str(inst);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cat-and-mouse games from monotone circuits"};
  app.require_subcommand(1);

  std::string circuit, bits, mode = "directed", format = "structured", graph_file, state, as = "mouse";

  auto* eval = app.add_subcommand("eval", "Evaluate a circuit; prints 0 or 1");
  eval->add_option("circuit", circuit, "Circuit file, - for stdin")->required();
  eval->add_option("bits", bits, "Assignment, i0 first")->required();

  auto* reduce = app.add_subcommand("reduce", "Build the game graph for a circuit and assignment");
  reduce->add_option("circuit", circuit)->required();
  reduce->add_option("bits", bits)->required();
  reduce->add_option("--mode", mode)->check(CLI::IsMember({"directed", "undirected"}));
  reduce->add_option("--format", format)->check(CLI::IsMember({"dot", "structured"}));

  auto* solve_cmd = app.add_subcommand("solve", "Solve a structured game graph; prints outcome and optimal line");
  solve_cmd->add_option("graph", graph_file, "Structured graph file, - for stdin")->required();
  solve_cmd->add_option("--state", state, "Start state cat,mouse,turn");

  std::string verify_mode = "both";
  auto* verify = app.add_subcommand("verify", "Check the circuit value against the game value");
  verify->add_option("circuit", circuit)->required();
  verify->add_option("bits", bits)->required();
  verify->add_option("--mode", verify_mode)->check(CLI::IsMember({"directed", "undirected", "both"}));

  GeneratorParams gp;
  gp.layers = 2;
  gp.width = 3;
  gp.inputs = 4;
  auto* gen = app.add_subcommand("gen", "Generate a random synchronous monotone circuit");
  gen->add_option("--layers", gp.layers)->check(CLI::PositiveNumber);
  gen->add_option("--width", gp.width)->check(CLI::PositiveNumber);
  gen->add_option("--inputs", gp.inputs)->check(CLI::PositiveNumber);
  gen->add_option("--p-or", gp.p_or)->check(CLI::Range(0.0, 1.0));
  gen->add_option("--seed", gp.seed);
  gen->add_flag("--fanout2", gp.fanout2, "Every gate input has fan-out at most 2");

  FuzzParams fp;
  double fuzz_p_or = -1;
  std::uint64_t fuzz_seed = 1;
  std::size_t fuzz_n = 50;
  std::string fuzz_mode = "both";
  auto* fuzz = app.add_subcommand("fuzz", "Check the equivalence on random circuits and all their assignments");
  fuzz->add_option("--n", fuzz_n);
  fuzz->add_option("--seed", fuzz_seed);
  fuzz->add_option("--layers", fp.max_layers, "Upper bound")->check(CLI::PositiveNumber);
  fuzz->add_option("--width", fp.max_width, "Upper bound")->check(CLI::PositiveNumber);
  fuzz->add_option("--inputs", fp.max_inputs, "Upper bound")->check(CLI::PositiveNumber);
  fuzz->add_option("--p-or", fuzz_p_or, "Default: drawn per circuit")->check(CLI::Range(0.0, 1.0));
  fuzz->add_flag("--fanout2", fp.fanout2);
  fuzz->add_option("--mode", fuzz_mode)->check(CLI::IsMember({"directed", "undirected", "both"}));
  fuzz->add_option("--threads", fp.threads, "0 for all cores");

  auto* play = app.add_subcommand("play", "Play against the solver");
  play->add_option("circuit", circuit)->required();
  play->add_option("bits", bits)->required();
  play->add_option("--mode", mode)->check(CLI::IsMember({"directed", "undirected"}));
  play->add_option("--as", as)->check(CLI::IsMember({"cat", "mouse"}, CLI::ignore_case));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*eval) return cmd_eval(circuit, bits);
    if (*reduce) return cmd_reduce(circuit, bits, mode, format);
    if (*solve_cmd) return cmd_solve(graph_file, state);
    if (*verify) return cmd_verify(circuit, bits, verify_mode);
    if (*gen) return cmd_gen(gp);
    if (*fuzz) {
      if (fuzz_p_or >= 0) fp.p_or = fuzz_p_or;
      return cmd_fuzz(fp, fuzz_seed, fuzz_n, fuzz_mode);
    }
    if (*play) return cmd_play(circuit, bits, mode, as);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
