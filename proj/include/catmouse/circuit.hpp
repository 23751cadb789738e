#pragma once

// Synchronous monotone circuits: model, text format, layering, evaluation
// and a seeded random generator.

#include <algorithm>
#include <charconv>
#include <limits>
#include <cstdint>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "catmouse/error.hpp"

namespace catmouse {

enum class GateKind { And, Or };

inline std::string_view to_string(GateKind k) { return k == GateKind::And ? "AND" : "OR"; }

/// A gate child: either a circuit input (by index) or an earlier gate (by
/// its position in `Circuit::gates`).
struct NodeRef {
  enum class Kind { Input, Gate };
  Kind kind = Kind::Input;
  std::size_t index = 0;

  static NodeRef input(std::size_t i) { return {Kind::Input, i}; }
  static NodeRef gate(std::size_t g) { return {Kind::Gate, g}; }
  bool is_input() const { return kind == Kind::Input; }
  bool is_gate() const { return kind == Kind::Gate; }

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct Gate {
  std::string id;
  GateKind kind = GateKind::And;
  NodeRef left;
  NodeRef right;

  friend bool operator==(const Gate&, const Gate&) = default;
};

/// Gates are stored in topological order. `output` indexes into `gates`.
struct Circuit {
  std::size_t num_inputs = 0;
  std::vector<Gate> gates;
  std::size_t output = 0;

  const Gate& output_gate() const { return gates.at(output); }

  std::string ref_name(NodeRef r) const {
    return r.is_input() ? "i" + std::to_string(r.index) : gates.at(r.index).id;
  }

  std::optional<std::size_t> find_gate(std::string_view id) const {
    for (std::size_t g = 0; g < gates.size(); ++g)
      if (gates[g].id == id) return g;
    return std::nullopt;
  }

  friend bool operator==(const Circuit&, const Circuit&) = default;
};

struct Assignment {
  std::vector<bool> bits;

  std::size_t size() const { return bits.size(); }
  bool operator[](std::size_t i) const { return bits[i]; }

  /// Index 0 is the leftmost character.
  static Assignment parse(std::string_view text) {
    Assignment a;
    for (char ch : text) {
      if (ch != '0' && ch != '1')
        throw Error(ErrorCode::SyntaxError, "", "assignment must be a bitstring, got '" + std::string(text) + "'");
      a.bits.push_back(ch == '1');
    }
    return a;
  }

  static Assignment from_mask(std::uint64_t mask, std::size_t k) {
    Assignment a;
    for (std::size_t i = 0; i < k; ++i) a.bits.push_back(((mask >> i) & 1U) != 0);
    return a;
  }

  std::string str() const {
    std::string s;
    for (bool b : bits) s.push_back(b ? '1' : '0');
    return s;
  }
};

/// Truth values of every input and gate under one assignment.
struct NodeValues {
  std::vector<bool> inputs;
  std::vector<bool> gates;

  bool operator()(NodeRef r) const { return r.is_input() ? inputs.at(r.index) : gates.at(r.index); }
};

struct LayerMap {
  std::vector<int> gate_layer;
  int depth = 0;

  int operator()(NodeRef r) const { return r.is_input() ? 0 : gate_layer.at(r.index); }
};

namespace detail {

inline bool is_input_token(std::string_view tok) {
  if (tok.size() < 2 || tok[0] != 'i') return false;
  return std::all_of(tok.begin() + 1, tok.end(), [](char c) { return c >= '0' && c <= '9'; });
}

inline bool is_id_token(std::string_view tok) {
  if (tok.empty()) return false;
  return std::all_of(tok.begin(), tok.end(), [](char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == '-';
  });
}

inline std::optional<std::size_t> parse_size(std::string_view tok) {
  std::size_t v = 0;
  auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
  if (ec != std::errc{} || p != tok.data() + tok.size()) return std::nullopt;
  return v;
}

inline std::vector<std::string> split_ws(std::string_view line) {
  std::vector<std::string> out;
  std::istringstream in{std::string(line)};
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

}  // namespace detail

/// Checks synchrony over the gates reachable from the output, then that
/// every gate is reachable.
inline LayerMap validate_layers(const Circuit& c) {
  LayerMap lm;
  lm.gate_layer.assign(c.gates.size(), 0);
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const Gate& gate = c.gates[g];
    auto child_layer = [&](NodeRef r) { return r.is_input() ? 0 : lm.gate_layer[r.index]; };
    lm.gate_layer[g] = std::max(child_layer(gate.left), child_layer(gate.right)) + 1;
  }

  std::vector<bool> reach(c.gates.size(), false);
  reach.at(c.output) = true;
  for (std::size_t g = c.gates.size(); g-- > 0;) {
    if (!reach[g]) continue;
    for (NodeRef r : {c.gates[g].left, c.gates[g].right})
      if (r.is_gate()) reach[r.index] = true;
  }

  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    if (!reach[g]) continue;
    const Gate& gate = c.gates[g];
    if (lm(gate.left) != lm(gate.right))
      throw Error(ErrorCode::NotSynchronous, gate.id,
                  "children at layers " + std::to_string(lm(gate.left)) + " and " + std::to_string(lm(gate.right)));
  }
  for (std::size_t g = 0; g < c.gates.size(); ++g)
    if (!reach[g]) throw Error(ErrorCode::UnreachableGate, c.gates[g].id, "not reachable from the output");

  lm.depth = lm.gate_layer[c.output];
  return lm;
}

/// Checks the invariants a hand-built Circuit value might violate: unique
/// ids, children defined before parents, input indices in range.
inline void validate_structure(const Circuit& c) {
  if (c.num_inputs == 0) throw Error(ErrorCode::InvalidParams, "", "circuit needs at least one input");
  if (c.gates.empty()) throw Error(ErrorCode::OutputIsInput, "", "circuit has no gates");
  if (c.output >= c.gates.size()) throw Error(ErrorCode::UnknownRef, "", "output index out of range");
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const Gate& gate = c.gates[g];
    if (!detail::is_id_token(gate.id) || detail::is_input_token(gate.id))
      throw Error(ErrorCode::SyntaxError, gate.id, "invalid gate id");
    if (!seen.emplace(gate.id, g).second) throw Error(ErrorCode::DuplicateId, gate.id, "");
    for (NodeRef r : {gate.left, gate.right}) {
      if (r.is_input() && r.index >= c.num_inputs) throw Error(ErrorCode::UnknownRef, c.ref_name(r), "");
      if (r.is_gate() && r.index >= g) throw Error(ErrorCode::NotTopological, gate.id, "");
    }
  }
}

/// Parses the line-oriented circuit format and runs full validation.
inline Circuit parse_circuit(std::string_view text) {
  Circuit c;
  bool have_inputs = false;
  bool have_output = false;
  std::unordered_map<std::string, std::size_t> defined;
  std::vector<std::pair<std::string, std::size_t>> all_ids;  // id, line

  // First pass collects every declared gate id so forward references can be
  // told apart from unknown ones.
  {
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      auto toks = detail::split_ws(line.substr(0, line.find('#')));
      if (toks.size() >= 2 && toks[0] == "gate") all_ids.emplace_back(toks[1], lineno);
    }
  }
  auto declared_later = [&](const std::string& id) {
    return std::any_of(all_ids.begin(), all_ids.end(), [&](const auto& p) { return p.first == id; });
  };

  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t lineno = 0;
  auto syntax = [&](const std::string& what) {
    return Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno), what);
  };

  auto resolve = [&](const std::string& tok) -> NodeRef {
    if (detail::is_input_token(tok)) {
      auto j = detail::parse_size(std::string_view(tok).substr(1));
      if (!j || *j >= c.num_inputs) throw Error(ErrorCode::UnknownRef, tok, "input index out of range");
      return NodeRef::input(*j);
    }
    if (auto it = defined.find(tok); it != defined.end()) return NodeRef::gate(it->second);
    if (declared_later(tok)) throw Error(ErrorCode::NotTopological, tok, "referenced before its declaration");
    throw Error(ErrorCode::UnknownRef, tok, "");
  };

  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::split_ws(line.substr(0, line.find('#')));
    if (toks.empty()) continue;
    if (have_output) throw syntax("content after output line");
    const std::string& kw = toks[0];
    if (kw == "inputs") {
      if (have_inputs || toks.size() != 2) throw syntax("expected 'inputs <k>' once");
      auto k = detail::parse_size(toks[1]);
      if (!k || *k == 0) throw syntax("input count must be a positive integer");
      c.num_inputs = *k;
      have_inputs = true;
    } else if (kw == "gate") {
      if (!have_inputs) throw syntax("'inputs' must come first");
      if (toks.size() != 5) throw syntax("expected 'gate <id> <AND|OR> <src> <src>'");
      const std::string& id = toks[1];
      if (!detail::is_id_token(id) || detail::is_input_token(id)) throw syntax("invalid gate id '" + id + "'");
      if (defined.count(id)) throw Error(ErrorCode::DuplicateId, id, "line " + std::to_string(lineno));
      Gate g;
      g.id = id;
      if (toks[2] == "AND") g.kind = GateKind::And;
      else if (toks[2] == "OR") g.kind = GateKind::Or;
      else throw syntax("gate kind must be AND or OR");
      g.left = resolve(toks[3]);
      g.right = resolve(toks[4]);
      defined.emplace(id, c.gates.size());
      c.gates.push_back(std::move(g));
    } else if (kw == "output") {
      if (!have_inputs) throw syntax("'inputs' must come first");
      if (toks.size() != 2) throw syntax("expected 'output <id>'");
      if (detail::is_input_token(toks[1])) throw Error(ErrorCode::OutputIsInput, toks[1], "output must be a gate");
      auto it = defined.find(toks[1]);
      if (it == defined.end()) throw Error(ErrorCode::UnknownRef, toks[1], "");
      c.output = it->second;
      have_output = true;
    } else {
      throw syntax("unknown directive '" + kw + "'");
    }
  }
  if (!have_inputs) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno), "missing 'inputs' line");
  if (!have_output) throw Error(ErrorCode::SyntaxError, "line " + std::to_string(lineno), "missing 'output' line");
  validate_layers(c);
  return c;
}

inline std::string serialize_circuit(const Circuit& c) {
  std::string out = "inputs " + std::to_string(c.num_inputs) + "\n";
  for (const Gate& g : c.gates) {
    out += "gate " + g.id + " " + std::string(to_string(g.kind)) + " " + c.ref_name(g.left) + " " +
           c.ref_name(g.right) + "\n";
  }
  out += "output " + c.output_gate().id + "\n";
  return out;
}

inline std::pair<bool, NodeValues> evaluate(const Circuit& c, const Assignment& x) {
  if (x.size() != c.num_inputs)
    throw Error(ErrorCode::LengthMismatch, "",
                "assignment has " + std::to_string(x.size()) + " bits, circuit has " + std::to_string(c.num_inputs) +
                    " inputs");
  NodeValues v;
  v.inputs = x.bits;
  v.gates.assign(c.gates.size(), false);
  for (std::size_t g = 0; g < c.gates.size(); ++g) {
    const Gate& gate = c.gates[g];
    bool l = v(gate.left), r = v(gate.right);
    v.gates[g] = gate.kind == GateKind::And ? (l && r) : (l || r);
  }
  return {v.gates[c.output], std::move(v)};
}

struct GeneratorParams {
  int layers = 1;
  int width = 1;
  int inputs = 2;
  double p_or = 0.5;
  std::uint64_t seed = 0;
  bool fanout2 = false;
};

/// Portable draws on top of mt19937_64 (whose output sequence the standard
/// fixes), so generated circuits are identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  std::uint64_t next() { return eng_(); }

  /// Uniform in [0, n).
  std::size_t below(std::size_t n) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % n;
    std::uint64_t v;
    do v = eng_();
    while (v >= limit);
    return static_cast<std::size_t>(v % n);
  }

  double unit() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  bool chance(double p) { return p >= 1.0 || unit() < p; }

 private:
  std::mt19937_64 eng_;
};

/// Layers 1..L-1 get `width` gates, layer L holds the single output gate.
/// Gates left without a parent are rewired into a parent slot whose current
/// child has another reference, or dropped when no such slot exists.
inline Circuit generate_random(const GeneratorParams& p) {
  if (p.layers < 1 || p.width < 1 || p.inputs < 1 || !(p.p_or >= 0.0 && p.p_or <= 1.0))
    throw Error(ErrorCode::InvalidParams, "", "layers, width and inputs must be positive and p_or in [0,1]");
  Rng rng(p.seed);
  const auto L = static_cast<std::size_t>(p.layers);
  const auto W = static_cast<std::size_t>(p.width);
  const auto K = static_cast<std::size_t>(p.inputs);

  struct Proto {
    GateKind kind;
    std::size_t left, right;  // index into previous layer (or input index)
    bool kept = true;
  };
  std::vector<std::vector<Proto>> layer(L + 1);

  for (std::size_t j = 1; j <= L; ++j) {
    const std::size_t count = j == L ? 1 : W;
    const std::size_t pool = j == 1 ? K : layer[j - 1].size();
    if (p.fanout2 && count > pool)
      throw Error(ErrorCode::InvalidParams, "", "fan-out two cannot supply layer " + std::to_string(j));
    std::vector<int> used(pool, 0);
    auto pick = [&]() {
      if (!p.fanout2) return rng.below(pool);
      std::vector<std::size_t> open;
      for (std::size_t i = 0; i < pool; ++i)
        if (used[i] < 2) open.push_back(i);
      std::size_t choice = open[rng.below(open.size())];
      ++used[choice];
      return choice;
    };
    for (std::size_t i = 0; i < count; ++i) {
      Proto pr;
      pr.kind = rng.chance(p.p_or) ? GateKind::Or : GateKind::And;
      pr.left = pick();
      pr.right = pick();
      layer[j].push_back(pr);
    }
  }

  for (std::size_t j = L - 1; j >= 1; --j) {
    std::vector<int> refs(layer[j].size(), 0);
    for (const Proto& par : layer[j + 1]) {
      if (!par.kept) continue;
      ++refs[par.left];
      ++refs[par.right];
    }
    for (std::size_t o = 0; o < layer[j].size(); ++o) {
      if (refs[o] > 0) continue;
      std::vector<std::pair<std::size_t, int>> slots;  // parent, 0=left 1=right
      for (std::size_t q = 0; q < layer[j + 1].size(); ++q) {
        const Proto& par = layer[j + 1][q];
        if (!par.kept) continue;
        if (refs[par.left] >= 2) slots.emplace_back(q, 0);
        if (refs[par.right] >= 2) slots.emplace_back(q, 1);
      }
      if (slots.empty()) {
        layer[j][o].kept = false;
        continue;
      }
      auto [q, side] = slots[rng.below(slots.size())];
      std::size_t& slot = side == 0 ? layer[j + 1][q].left : layer[j + 1][q].right;
      --refs[slot];
      slot = o;
      ++refs[o];
    }
  }

  Circuit c;
  c.num_inputs = K;
  std::vector<std::size_t> prev_index;  // proto index in layer j-1 -> gate index
  for (std::size_t j = 1; j <= L; ++j) {
    std::vector<std::size_t> cur_index(layer[j].size(), 0);
    for (std::size_t i = 0; i < layer[j].size(); ++i) {
      const Proto& pr = layer[j][i];
      if (!pr.kept) continue;
      Gate g;
      g.id = "g" + std::to_string(c.gates.size());
      g.kind = pr.kind;
      g.left = j == 1 ? NodeRef::input(pr.left) : NodeRef::gate(prev_index[pr.left]);
      g.right = j == 1 ? NodeRef::input(pr.right) : NodeRef::gate(prev_index[pr.right]);
      cur_index[i] = c.gates.size();
      c.gates.push_back(std::move(g));
    }
    prev_index = std::move(cur_index);
  }
  c.output = c.gates.size() - 1;
  validate_layers(c);
  return c;
}

}  // namespace catmouse
