#pragma once

#include <gtest/gtest.h>

#include <string>
#include <vector>

#include "catmouse/circuit.hpp"
#include "catmouse/solver.hpp"
#include "random_games.hpp"

namespace catmouse::test {

inline const char* const kAndText = "inputs 2\ngate g0 AND i0 i1\noutput g0\n";
inline const char* const kOrText = "inputs 2\ngate g0 OR i0 i1\noutput g0\n";
inline const char* const kAndSameText = "inputs 1\ngate g0 AND i0 i0\noutput g0\n";
inline const char* const kThreeGateText = "inputs 3\ngate a OR i0 i1\ngate b AND i1 i2\ngate c AND a b\noutput c\n";

inline Circuit circuit(const char* text) { return parse_circuit(text); }

// Runs `fn` and returns the code of the catmouse::Error it throws.
template <typename Fn>
std::optional<ErrorCode> error_code(Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

}  // namespace catmouse::test
