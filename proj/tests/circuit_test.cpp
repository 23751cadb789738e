#include <set>

#include "support.hpp"

namespace catmouse {
namespace {

using test::circuit;
using test::error_code;

TEST(ParseCircuit, SmallestCircuit) {
  Circuit c = circuit(test::kAndText);
  EXPECT_EQ(c.num_inputs, 2u);
  ASSERT_EQ(c.gates.size(), 1u);
  EXPECT_EQ(c.gates[0].kind, GateKind::And);
  EXPECT_EQ(c.gates[0].left, NodeRef::input(0));
  EXPECT_EQ(c.gates[0].right, NodeRef::input(1));
  EXPECT_EQ(c.output, 0u);
}

TEST(ParseCircuit, OutputMustBeAGate) {
  EXPECT_EQ(error_code([] { parse_circuit("inputs 1\noutput i0"); }), ErrorCode::OutputIsInput);
}

TEST(ParseCircuit, ThreeGateCircuit) {
  Circuit c = circuit(test::kThreeGateText);
  EXPECT_EQ(c.gates.size(), 3u);
  EXPECT_EQ(validate_layers(c).depth, 2);
}

TEST(ParseCircuit, Errors) {
  EXPECT_EQ(error_code([] { parse_circuit("inputs 2\ngate g0 AND i0 i1\ngate g0 OR i0 i1\noutput g0"); }),
            ErrorCode::DuplicateId);
  EXPECT_EQ(error_code([] { parse_circuit("inputs 2\ngate g0 AND i0 i2\noutput g0"); }), ErrorCode::UnknownRef);
  EXPECT_EQ(error_code([] { parse_circuit("inputs 2\ngate g0 AND i0 zz\noutput g0"); }), ErrorCode::UnknownRef);
  EXPECT_EQ(error_code([] { parse_circuit("inputs 2\ngate g0 AND g1 g1\ngate g1 OR i0 i1\noutput g0"); }),
            ErrorCode::NotTopological);
  EXPECT_EQ(error_code([] { parse_circuit("inputs 2\ngate g0 XOR i0 i1\noutput g0"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(error_code([] { parse_circuit("gate g0 AND i0 i1\noutput g0"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(error_code([] { parse_circuit("inputs 2\ngate g0 AND i0 i1"); }), ErrorCode::SyntaxError);
  EXPECT_EQ(error_code([] { parse_circuit("inputs 2\ngate g0 AND i0 i1\noutput g1"); }), ErrorCode::UnknownRef);
}

TEST(ValidateLayers, OneGate) {
  LayerMap lm = validate_layers(circuit(test::kAndText));
  EXPECT_EQ(lm(NodeRef::input(0)), 0);
  EXPECT_EQ(lm(NodeRef::input(1)), 0);
  EXPECT_EQ(lm(NodeRef::gate(0)), 1);
  EXPECT_EQ(lm.depth, 1);
}

TEST(ValidateLayers, NotSynchronous) {
  try {
    parse_circuit("inputs 3\ngate a AND i0 i1\ngate b AND a i2\noutput b");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NotSynchronous);
    EXPECT_EQ(e.subject(), "b");
  }
}

TEST(ValidateLayers, Unreachable) {
  try {
    parse_circuit("inputs 2\ngate a AND i0 i1\ngate b OR i0 i1\noutput b");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UnreachableGate);
    EXPECT_EQ(e.subject(), "a");
  }
}

TEST(ValidateLayers, ThreeGate) {
  Circuit c = circuit(test::kThreeGateText);
  LayerMap lm = validate_layers(c);
  EXPECT_EQ(lm.gate_layer, (std::vector<int>{1, 1, 2}));
}

TEST(Evaluate, Examples) {
  Circuit a = circuit(test::kAndText);
  EXPECT_TRUE(evaluate(a, Assignment::parse("11")).first);
  EXPECT_FALSE(evaluate(a, Assignment::parse("10")).first);

  Circuit c = circuit(test::kThreeGateText);
  auto [out, values] = evaluate(c, Assignment::parse("011"));
  EXPECT_TRUE(out);
  EXPECT_TRUE(values.gates[0]);
  EXPECT_TRUE(values.gates[1]);
  EXPECT_EQ(error_code([&] { evaluate(c, Assignment::parse("01")); }), ErrorCode::LengthMismatch);
}

TEST(Evaluate, Monotone) {
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    GeneratorParams gp{3, 4, 6, 0.5, seed, false};
    Circuit c = generate_random(gp);
    const std::size_t k = c.num_inputs;
    for (std::uint64_t mask = 0; mask < (1ULL << k); ++mask) {
      bool v = evaluate(c, Assignment::from_mask(mask, k)).first;
      if (!v) continue;
      for (std::size_t b = 0; b < k; ++b)
        EXPECT_TRUE(evaluate(c, Assignment::from_mask(mask | (1ULL << b), k)).first) << serialize_circuit(c);
    }
  }
}

// Every input-to-output path has the same number of edges.
TEST(ValidateLayers, AllPathsHaveDepthLength) {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    GeneratorParams gp{1 + static_cast<int>(seed % 3), 3, 3, 0.5, seed, false};
    Circuit c = generate_random(gp);
    if (c.gates.size() + c.num_inputs > 12) continue;
    const int depth = validate_layers(c).depth;
    std::set<int> lengths;
    std::function<void(NodeRef, int)> walk = [&](NodeRef r, int len) {
      if (r.is_input()) {
        lengths.insert(len);
        return;
      }
      walk(c.gates[r.index].left, len + 1);
      walk(c.gates[r.index].right, len + 1);
    };
    walk(NodeRef::gate(c.output), 0);
    EXPECT_EQ(lengths, std::set<int>{depth}) << serialize_circuit(c);
  }
}

TEST(Serialize, CanonicalForm) {
  EXPECT_EQ(serialize_circuit(circuit(test::kAndText)), "inputs 2\ngate g0 AND i0 i1\noutput g0\n");
  EXPECT_EQ(serialize_circuit(circuit("inputs 3\n  gate a OR i0   i1 # comment\ngate b AND i1 i2\n\ngate c AND a b\n"
                                      "output c")),
            test::kThreeGateText);
}

TEST(Serialize, RoundTrip) {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    GeneratorParams gp{4, 6, 6, 0.3, seed, seed % 2 == 0};
    Circuit c = generate_random(gp);
    EXPECT_EQ(parse_circuit(serialize_circuit(c)), c);
  }
}

TEST(Generate, SingleAnd) {
  Circuit c = generate_random({1, 1, 2, 0.0, 7, false});
  ASSERT_EQ(c.gates.size(), 1u);
  EXPECT_EQ(c.gates[0].kind, GateKind::And);
  EXPECT_TRUE(c.gates[0].left.is_input());
  EXPECT_TRUE(c.gates[0].right.is_input());
}

TEST(Generate, Deterministic) {
  GeneratorParams gp{3, 4, 4, 0.5, 42, false};
  EXPECT_EQ(serialize_circuit(generate_random(gp)), serialize_circuit(generate_random(gp)));
}

TEST(Generate, Depth) { EXPECT_EQ(validate_layers(generate_random({3, 4, 4, 0.5, 1, false})).depth, 3); }

TEST(Generate, AlwaysValid) {
  for (int L = 1; L <= 4; ++L)
    for (int W = 1; W <= 6; ++W)
      for (int k = 1; k <= 6; ++k)
        for (bool f2 : {false, true}) {
          GeneratorParams gp{L, W, k, 0.5, static_cast<std::uint64_t>(L * 100 + W * 10 + k), f2};
          if (f2 && L >= 2 && W > k) {
            EXPECT_EQ(error_code([&] { generate_random(gp); }), ErrorCode::InvalidParams);
            continue;
          }
          Circuit c = generate_random(gp);
          EXPECT_EQ(validate_layers(c).depth, L);
          EXPECT_NO_THROW(parse_circuit(serialize_circuit(c)));
        }
}

TEST(Generate, InvalidParams) {
  EXPECT_EQ(error_code([] { generate_random({0, 1, 2, 0.5, 1, false}); }), ErrorCode::InvalidParams);
  EXPECT_EQ(error_code([] { generate_random({1, 0, 2, 0.5, 1, false}); }), ErrorCode::InvalidParams);
  EXPECT_EQ(error_code([] { generate_random({1, 1, 0, 0.5, 1, false}); }), ErrorCode::InvalidParams);
  EXPECT_EQ(error_code([] { generate_random({1, 1, 2, 1.5, 1, false}); }), ErrorCode::InvalidParams);
}

TEST(Generate, FanoutAtMostTwo) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    Circuit c = generate_random({3, 4, 5, 0.5, seed, true});
    std::map<std::string, int> uses;
    for (const Gate& g : c.gates) {
      ++uses[c.ref_name(g.left)];
      ++uses[c.ref_name(g.right)];
    }
    for (auto& [name, n] : uses) EXPECT_LE(n, 2) << name << "\n" << serialize_circuit(c);
  }
}

}  // namespace
}  // namespace catmouse
