#pragma once

#include <cstdint>
#include <random>

namespace streamnav {

/// Seeded Gaussian stream used for saddle-escape noise. One instance per
/// navigator; draws are consumed in a fixed agent order so runs replay exactly.
class NoiseSource {
 public:
  explicit NoiseSource(std::uint64_t seed = 0) : engine_(seed) {}

  /// N(0, sigma). sigma == 0 returns 0 without advancing the engine.
  double normal(double sigma) {
    if (sigma == 0.0) return 0.0;
    return sigma * unit_(engine_);
  }

  void reseed(std::uint64_t seed) {
    engine_.seed(seed);
    unit_.reset();
  }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> unit_{0.0, 1.0};
};

}  // namespace streamnav
