#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "streamnav/flow_field.hpp"
#include "streamnav/geometry.hpp"

namespace streamnav {

struct AgentRecord {
  int id = 0;
  bool healthy = true;
  Vec2 desired_position;
  Vec2 desired_velocity;
  std::optional<Vec2> actual_position;  ///< absent for navigator-only logs
  std::optional<Vec2> actual_velocity;
  double phi = 0.0;     ///< phi target of the emitted command
  double psi0 = 0.0;    ///< streamline anchor
  double psi = 0.0;     ///< psi evaluated at the commanded position
  double altitude = 0.0;
  bool noise_injected = false;
  bool projected = false;

  friend bool operator==(const AgentRecord&, const AgentRecord&) = default;
};

struct StepRecord {
  std::int64_t step = 0;
  double time = 0.0;
  bool cem_active = false;  ///< false while holding formation before any failure
  double delta_phi = 0.0;   ///< slide used for the emitted commands
  double v_max = 0.0;       ///< max commanded speed of the emitted commands
  std::size_t field_epoch = 0;  ///< index into ScenarioLog::fields
  std::vector<AgentRecord> agents;

  friend bool operator==(const StepRecord&, const StepRecord&) = default;
};

/// Per-step telemetry. `fields` and `steps` are deterministic for a given
/// seed; wall-clock timing lives in the separate `runtime_ns` channel.
struct ScenarioLog {
  std::vector<FlowField> fields;
  std::vector<StepRecord> steps;
  std::vector<std::int64_t> runtime_ns;  ///< one per step
  std::vector<bool> deadline_missed;     ///< one per step
  std::size_t deadline_misses = 0;
  std::vector<std::string> warnings;  ///< pre-flight and runtime safety warnings

  bool empty() const { return steps.empty(); }
  const FlowField& field_at(std::size_t step) const { return fields.at(steps.at(step).field_epoch); }
};

/// Trajectory equality: fields and step records, ignoring timing.
inline bool same_trajectory(const ScenarioLog& a, const ScenarioLog& b) {
  return a.fields == b.fields && a.steps == b.steps;
}

}  // namespace streamnav
