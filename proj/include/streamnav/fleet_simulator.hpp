#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "streamnav/cem_navigator.hpp"
#include "streamnav/geometry.hpp"
#include "streamnav/safety_margins.hpp"
#include "streamnav/scenario_log.hpp"
#include "streamnav/streamline_solver.hpp"

namespace streamnav {

struct AgentSpec {
  int id = 0;
  Vec2 position;
  double altitude = 1.0;

  friend bool operator==(const AgentSpec&, const AgentSpec&) = default;
};

struct FailureSpec {
  int agent_id = 0;
  double time = 0.0;  ///< seconds from scenario start

  friend bool operator==(const FailureSpec&, const FailureSpec&) = default;
};

enum class TrackingMode { Perfect, FirstOrderLag, LagPlusDisturbance };

/// Bounded-error stand-in for the onboard position controller.
///
/// The lag modes integrate x' = v_cmd(t - dt) + k_p (r_d - x): feedforward of
/// the previous command plus proportional correction. The disturbance adds
/// A (sin(w t + a), sin(1.3 w t + b)) with seeded phases. The total error
/// |r_actual - r_d| is saturated at delta.
struct VehicleModel {
  TrackingMode mode = TrackingMode::LagPlusDisturbance;
  double k_p = 2.0;                      ///< 1/s
  double disturbance_amplitude = 0.2;    ///< m, at most delta
  double disturbance_frequency = 0.5;    ///< Hz

  friend bool operator==(const VehicleModel&, const VehicleModel&) = default;
};

struct Scenario {
  std::string name = "scenario";
  std::vector<AgentSpec> agents;
  std::vector<FailureSpec> failures;
  SafetyMargins margins;
  NavigatorConfig navigator;
  SolverConfig solver;
  VehicleModel vehicle;
  double duration = 20.0;  ///< seconds
  std::uint64_t seed = 1;
  /// Before the first failure, advance the formation at v_des along +x
  /// instead of holding position.
  bool preroll = false;

  /// Number of control periods, round(duration / dt).
  std::int64_t step_count() const;

  /// Throws ConfigInvalid listing every problem found.
  void validate() const;

  friend bool operator==(const Scenario&, const Scenario&) = default;
};

/// Runs the scenario to completion. Failed agents freeze at their actual
/// position and become obstacles with a_f = delta + epsilon; the navigator is
/// re-anchored whenever the obstacle set changes. `fast` skips real-time
/// pacing. With exactly one scripted failure the initial formation is checked
/// against the single-obstacle separation condition and a warning is logged
/// if it fails.
ScenarioLog run_scenario(const Scenario& s, bool fast, CommandSink* sink = nullptr);

/// Leading-triangle formation on a triangular lattice with spacing
/// 2(delta + epsilon) + a_p = 2.72 m, flying +x. Q1 is the leading tip and
/// fails at t = 0; Q2 trails directly behind it on the psi = 0 streamline.
///
///   Q1 ( 0.000,  0.00)   Q3 (-2.356,  1.36)   Q4 (-2.356, -1.36)
///   Q2 (-4.711,  0.00)   Q5 (-4.711,  2.72)   Q6 (-4.711, -2.72)
Scenario default_six_agent_scenario();

/// Q1 and Q2 of the six-agent layout only.
Scenario two_vehicle_scenario();

struct KSweepEntry {
  int k = 0;
  double peak_speed = 0.0;  ///< max commanded speed over CEM steps
  double mean_runtime_ns = 0.0;
  double median_runtime_ns = 0.0;
  double p99_runtime_ns = 0.0;
};

/// Reruns `s` once per K with identical seeds in fast mode.
std::vector<KSweepEntry> sweep_k(const Scenario& s, std::span<const int> k_values);

/// Peak commanded speed of healthy agents over CEM steps of a log.
double peak_commanded_speed(const ScenarioLog& log);

}  // namespace streamnav
