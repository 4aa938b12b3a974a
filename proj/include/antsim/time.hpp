#pragma once

#include <chrono>
#include <cmath>
#include <cstdint>

namespace antsim {

/// Simulation clock. Integer nanoseconds so that 1 ms ticks accumulate exactly.
using SimTime = std::chrono::nanoseconds;

using namespace std::chrono_literals;

inline SimTime from_seconds(double s) {
  return SimTime{static_cast<std::int64_t>(std::llround(s * 1e9))};
}

inline double to_seconds(SimTime t) { return static_cast<double>(t.count()) * 1e-9; }

}  // namespace antsim
