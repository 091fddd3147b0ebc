#include "streamnav/cem_navigator.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>
#include <thread>

#include "streamnav/errors.hpp"

namespace streamnav {

void NavigatorConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("navigator dt must be > 0");
  if (k_passes < 1) throw InvalidArgument("navigator K must be >= 1");
  if (!(v_des > 0.0)) throw InvalidArgument("v_des must be > 0");
  if (total_steps < 0) throw InvalidArgument("total_steps must be >= 0");
}

Activation activate(std::span<const Vec2> positions, std::span<const int> agent_ids,
                    const FlowField& field, const NavigatorConfig& cfg) {
  cfg.validate();
  if (positions.size() != agent_ids.size()) {
    throw InvalidArgument("positions and agent ids differ in length");
  }
  Activation act;
  act.states.reserve(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) {
    if (field.inside_planned(positions[i])) {
      std::ostringstream os;
      os << "agent " << agent_ids[i] << " at (" << positions[i].x << ", " << positions[i].y
         << ") is inside a planned-exclusion disk";
      throw AgentInsideExclusion(agent_ids[i], os.str());
    }
    const FieldPoint f = eval_field(positions[i], field);
    act.states.push_back({agent_ids[i], f.phi, f.psi, positions[i], {}});
  }
  act.delta_phi = cfg.nominal_delta_phi();
  return act;
}

StepResult step(std::vector<AgentNavState>& states, const FlowField& field,
                const NavigatorConfig& cfg, const SolverConfig& solver, double delta_phi_in,
                NoiseSource& noise) {
  const std::size_t n = states.size();
  double delta_phi = std::clamp(delta_phi_in, cfg.min_delta_phi(), cfg.max_delta_phi());

  StepResult result;
  auto& cmds = result.output.commands;
  cmds.resize(n);
  for (int pass = 0; pass < cfg.k_passes; ++pass) {
    double v_max = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const AgentNavState& s = states[i];
      const double phi = s.phi + delta_phi;
      SolveResult r;
      try {
        r = calc_xy(phi, s.psi0, s.desired_position, field, solver, noise);
      } catch (const Error& e) {
        std::ostringstream os;
        os << "agent " << s.agent_id << ": " << e.what();
        throw AgentSolveError(i, os.str());
      }
      cmds[i] = {s.agent_id, r.position, r.velocity, phi, r.noise_was_injected, r.projected};
      v_max = std::max(v_max, norm(r.velocity));
    }
    result.output.delta_phi_used = delta_phi;
    result.output.v_max_observed = v_max;
    if (v_max > 0.0) {
      delta_phi = std::clamp(delta_phi * cfg.v_des / v_max, cfg.min_delta_phi(),
                             cfg.max_delta_phi());
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    states[i].phi = cmds[i].phi;
    states[i].desired_position = cmds[i].position;
    states[i].desired_velocity = cmds[i].velocity;
  }
  result.delta_phi_out = delta_phi;
  return result;
}

CemNavigator::CemNavigator(NavigatorConfig cfg, SolverConfig solver)
    : cfg_(cfg), solver_(solver), noise_(solver.rng_seed) {
  cfg_.validate();
  solver_.validate();
}

void CemNavigator::activate(std::span<const Vec2> positions, std::span<const int> agent_ids,
                            FlowField field) {
  Activation act = streamnav::activate(positions, agent_ids, field, cfg_);
  field_ = std::move(field);
  states_ = std::move(act.states);
  delta_phi_ = act.delta_phi;
}

StepOutput CemNavigator::step() {
  if (!active()) throw InvalidArgument("navigator stepped before activation");
  const auto start = std::chrono::steady_clock::now();
  StepResult r = streamnav::step(states_, field_, cfg_, solver_, delta_phi_, noise_);
  const auto stop = std::chrono::steady_clock::now();
  delta_phi_ = r.delta_phi_out;
  r.output.step_runtime_ns =
      std::chrono::duration_cast<std::chrono::nanoseconds>(stop - start).count();
  return std::move(r.output);
}

ScenarioLog CemNavigator::run_episode(CommandSink* sink, ClockMode mode) {
  ScenarioLog log;
  if (cfg_.total_steps == 0) return log;
  if (!active()) throw InvalidArgument("run_episode called before activation");
  log.fields.push_back(field_);

  const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(cfg_.dt));
  auto deadline = std::chrono::steady_clock::now();
  for (std::int64_t k = 0; k < cfg_.total_steps; ++k) {
    deadline += period;
    StepOutput out = step();
    const double t = static_cast<double>(k + 1) * cfg_.dt;

    StepRecord rec;
    rec.step = k;
    rec.time = t;
    rec.cem_active = true;
    rec.delta_phi = out.delta_phi_used;
    rec.v_max = out.v_max_observed;
    rec.agents.reserve(out.commands.size());
    for (std::size_t i = 0; i < out.commands.size(); ++i) {
      const AgentCommand& c = out.commands[i];
      AgentRecord a;
      a.id = c.agent_id;
      a.desired_position = c.position;
      a.desired_velocity = c.velocity;
      a.phi = c.phi;
      a.psi0 = states_[i].psi0;
      a.psi = eval_field(c.position, field_).psi;
      a.noise_injected = c.noise_injected;
      a.projected = c.projected;
      rec.agents.push_back(a);
      if (sink) sink->send(t, c.agent_id, c.position, c.velocity);
    }
    log.steps.push_back(std::move(rec));
    log.runtime_ns.push_back(out.step_runtime_ns);

    const bool missed = static_cast<double>(out.step_runtime_ns) > cfg_.dt * 1e9;
    log.deadline_missed.push_back(missed);
    if (missed) {
      ++log.deadline_misses;
      if (on_deadline_miss) on_deadline_miss(k, out.step_runtime_ns);
    }
    if (mode == ClockMode::RealTime) std::this_thread::sleep_until(deadline);
  }
  return log;
}

}  // namespace streamnav
