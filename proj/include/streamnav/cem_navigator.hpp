#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "streamnav/flow_field.hpp"
#include "streamnav/geometry.hpp"
#include "streamnav/noise.hpp"
#include "streamnav/scenario_log.hpp"
#include "streamnav/streamline_solver.hpp"

namespace streamnav {

struct NavigatorConfig {
  double dt = 0.01;    ///< control period, seconds
  int k_passes = 2;    ///< slide-speed retuning passes per step
  double v_des = 1.0;  ///< desired maximum speed, m/s
  std::int64_t total_steps = 0;

  double nominal_delta_phi() const { return v_des * dt; }
  double min_delta_phi() const { return 1e-6; }
  double max_delta_phi() const { return 10.0 * v_des * dt; }

  void validate() const;

  friend bool operator==(const NavigatorConfig&, const NavigatorConfig&) = default;
};

struct AgentNavState {
  int agent_id = 0;
  double phi = 0.0;
  double psi0 = 0.0;
  Vec2 desired_position;
  Vec2 desired_velocity;
};

struct AgentCommand {
  int agent_id = 0;
  Vec2 position;
  Vec2 velocity;
  double phi = 0.0;
  bool noise_injected = false;
  bool projected = false;
};

struct StepOutput {
  std::vector<AgentCommand> commands;
  double delta_phi_used = 0.0;
  double v_max_observed = 0.0;
  std::int64_t step_runtime_ns = 0;
};

struct Activation {
  std::vector<AgentNavState> states;
  double delta_phi = 0.0;
};

/// Anchors each healthy agent on its streamline: phi_i and psi_i0 from the
/// field at its position, and the slide initialized to v_des * dt.
/// Throws AgentInsideExclusion for a position inside a planned disk.
Activation activate(std::span<const Vec2> positions, std::span<const int> agent_ids,
                    const FlowField& field, const NavigatorConfig& cfg);

struct StepResult {
  StepOutput output;
  double delta_phi_out = 0.0;
};

/// One control period with K slide-retuning passes. Every pass restarts from
/// the previous step's phi and commanded positions, adds the shared slide,
/// inverts each agent, and rescales the slide by v_des / v_max. The commands
/// of the last pass are emitted and written back into `states`; the slide
/// after the last rescale is returned for the next step.
StepResult step(std::vector<AgentNavState>& states, const FlowField& field,
                const NavigatorConfig& cfg, const SolverConfig& solver, double delta_phi_in,
                NoiseSource& noise);

/// Receives the desired state X_d,i = (r_d, v_d) of each agent every period.
class CommandSink {
 public:
  virtual ~CommandSink() = default;
  virtual void send(double timestamp, int agent_id, Vec2 position, Vec2 velocity) = 0;
};

enum class ClockMode { Fast, RealTime };

/// Stateful wrapper owning the field, anchors, slide and noise stream.
class CemNavigator {
 public:
  CemNavigator(NavigatorConfig cfg, SolverConfig solver);

  /// (Re)anchors all agents against `field`; called whenever the obstacle set changes.
  void activate(std::span<const Vec2> positions, std::span<const int> agent_ids,
                FlowField field);

  bool active() const { return !states_.empty(); }
  StepOutput step();

  /// Runs cfg.total_steps periods. In RealTime mode each period sleeps until
  /// its deadline; a period that overruns dt is flagged, counted and reported
  /// through `on_deadline_miss` if set.
  ScenarioLog run_episode(CommandSink* sink, ClockMode mode);

  std::function<void(std::int64_t step, std::int64_t runtime_ns)> on_deadline_miss;

  const std::vector<AgentNavState>& states() const { return states_; }
  const FlowField& field() const { return field_; }
  double delta_phi() const { return delta_phi_; }
  const NavigatorConfig& config() const { return cfg_; }
  const SolverConfig& solver_config() const { return solver_; }

 private:
  NavigatorConfig cfg_;
  SolverConfig solver_;
  NoiseSource noise_;
  FlowField field_;
  std::vector<AgentNavState> states_;
  double delta_phi_ = 0.0;
};

}  // namespace streamnav
