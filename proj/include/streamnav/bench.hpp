#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "streamnav/geometry.hpp"
#include "streamnav/safety_margins.hpp"

namespace streamnav {

struct BenchConfig {
  int agents = 6;           ///< formation size, failed leader included
  int k_passes = 2;
  std::int64_t steps = 2000;
  std::uint64_t seed = 1;
  double dt = 0.01;
  double v_des = 1.0;
};

struct BenchReport {
  int agents = 0;
  int k_passes = 0;
  std::int64_t steps = 0;
  double p50_ns = 0.0;
  double p99_ns = 0.0;
  double mean_ns = 0.0;
  double max_ns = 0.0;
  std::size_t deadline_misses = 0;  ///< steps whose runtime exceeded dt
};

/// Leading-triangle lattice of `n` points with spacing 2(delta + epsilon) + a_p.
/// Point 0 is the tip at the origin; row r behind it holds r + 1 points.
std::vector<Vec2> triangle_formation(int n, const SafetyMargins& margins = {});

/// Times `steps` navigation periods of a synthetic formation whose tip has
/// failed. Zero steps yields an empty report. Throws InvalidArgument for
/// fewer than two agents or negative steps.
BenchReport run_bench(const BenchConfig& cfg);

}  // namespace streamnav
