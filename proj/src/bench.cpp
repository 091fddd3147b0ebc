#include "streamnav/bench.hpp"

#include <algorithm>
#include <cmath>

#include "streamnav/cem_navigator.hpp"
#include "streamnav/errors.hpp"
#include "streamnav/flow_field.hpp"
#include "streamnav/stats.hpp"

namespace streamnav {

std::vector<Vec2> triangle_formation(int n, const SafetyMargins& margins) {
  const double a_p = Obstacle::failed_agent({}, margins).planned_radius();
  const double spacing = margins.separation_floor() + a_p;
  const double row_dx = spacing * std::sqrt(3.0) / 2.0;
  std::vector<Vec2> out;
  for (int row = 0; static_cast<int>(out.size()) < n; ++row) {
    for (int j = 0; j <= row && static_cast<int>(out.size()) < n; ++j) {
      out.push_back({-row * row_dx, (j - row / 2.0) * spacing});
    }
  }
  return out;
}

BenchReport run_bench(const BenchConfig& cfg) {
  if (cfg.agents < 2) throw InvalidArgument("bench needs at least two agents");
  if (cfg.steps < 0) throw InvalidArgument("bench steps must be non-negative");

  BenchReport report;
  report.agents = cfg.agents;
  report.k_passes = cfg.k_passes;
  report.steps = cfg.steps;
  if (cfg.steps == 0) return report;

  const SafetyMargins margins;
  const auto formation = triangle_formation(cfg.agents, margins);
  FlowField field({Obstacle::failed_agent(formation[0], margins)});
  std::vector<Vec2> positions(formation.begin() + 1, formation.end());
  std::vector<int> ids;
  for (int i = 2; i <= cfg.agents; ++i) ids.push_back(i);

  NavigatorConfig nav{cfg.dt, cfg.k_passes, cfg.v_des, cfg.steps};
  SolverConfig solver;
  solver.dt = cfg.dt;
  solver.rng_seed = cfg.seed;
  CemNavigator navigator(nav, solver);
  navigator.activate(positions, ids, std::move(field));

  std::vector<std::int64_t> runtimes;
  runtimes.reserve(static_cast<std::size_t>(cfg.steps));
  for (std::int64_t k = 0; k < cfg.steps; ++k) {
    runtimes.push_back(navigator.step().step_runtime_ns);
  }
  const double budget_ns = cfg.dt * 1e9;
  report.p50_ns = percentile(runtimes, 50.0);
  report.p99_ns = percentile(runtimes, 99.0);
  report.mean_ns = mean(runtimes);
  report.max_ns = static_cast<double>(*std::max_element(runtimes.begin(), runtimes.end()));
  report.deadline_misses = static_cast<std::size_t>(std::count_if(
      runtimes.begin(), runtimes.end(), [&](std::int64_t r) { return static_cast<double>(r) > budget_ns; }));
  return report;
}

}  // namespace streamnav
