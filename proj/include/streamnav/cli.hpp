#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace streamnav::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitSafetyWarning = 2;

struct SimulateOptions {
  std::filesystem::path config;
  bool realtime = false;
  std::filesystem::path out_dir = ".";
  std::optional<std::uint64_t> seed;  ///< wins over STREAMNAV_SEED and the config
};

/// Writes <out_dir>/steps.jsonl and <out_dir>/summary.csv. Returns 2 when a
/// pre-flight condition fails (single-obstacle condition with one failure,
/// general condition with several) or the run breaks separation/clearance.
int simulate(const SimulateOptions& opts, std::ostream& out, std::ostream& err);

/// Prints both safety conditions for the configuration at failure time.
int check(const std::filesystem::path& config, std::ostream& out, std::ostream& err);

struct FieldOptions {
  std::string obstacles;  ///< "x,y,a_p;..."
  std::string bbox;       ///< "x_min,x_max,y_min,y_max"
  double step = 0.05;
  std::filesystem::path out;  ///< empty: write to `out` stream
};

int field(const FieldOptions& opts, std::ostream& out, std::ostream& err);

struct BenchOptions {
  int agents = 6;
  std::vector<int> k_values{2};
  std::int64_t steps = 2000;
  std::uint64_t seed = 1;
};

int bench(const BenchOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace streamnav::cli
