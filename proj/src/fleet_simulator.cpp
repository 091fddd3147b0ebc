#include "streamnav/fleet_simulator.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <thread>

#include "streamnav/errors.hpp"
#include "streamnav/safety_analysis.hpp"
#include "streamnav/stats.hpp"

namespace streamnav {

std::int64_t Scenario::step_count() const {
  return static_cast<std::int64_t>(std::llround(duration / navigator.dt));
}

void Scenario::validate() const {
  std::vector<std::string> problems;
  auto check = [&](bool ok, const std::string& msg) {
    if (!ok) problems.push_back(msg);
  };
  check(!agents.empty(), "scenario has no agents");
  std::set<int> ids;
  for (const auto& a : agents) {
    check(ids.insert(a.id).second, "duplicate agent id " + std::to_string(a.id));
    check(std::isfinite(a.position.x) && std::isfinite(a.position.y) && std::isfinite(a.altitude),
          "agent " + std::to_string(a.id) + " has a non-finite position");
  }
  std::set<int> failed;
  for (const auto& f : failures) {
    check(ids.count(f.agent_id) == 1, "failure references unknown agent " + std::to_string(f.agent_id));
    check(failed.insert(f.agent_id).second, "agent " + std::to_string(f.agent_id) + " fails twice");
    check(f.time >= 0.0 && f.time <= duration,
          "failure time of agent " + std::to_string(f.agent_id) + " is outside [0, duration]");
  }
  check(failures.size() < agents.size() || agents.empty(),
        "at least one agent must stay healthy (N_f < N_q)");
  check(margins.delta > 0.0 && margins.epsilon > 0.0, "margins require delta > 0 and epsilon > 0");
  check(duration > 0.0 && std::isfinite(duration), "duration must be positive");
  check(navigator.dt > 0.0, "navigator dt must be > 0");
  check(navigator.k_passes >= 1, "navigator K must be >= 1");
  check(navigator.v_des > 0.0, "v_des must be > 0");
  check(solver.iterations >= 1, "solver iterations must be >= 1");
  check(solver.noise_sigma >= 0.0, "noise sigma must be >= 0");
  check(solver.dt > 0.0, "solver dt must be > 0");
  check(vehicle.k_p > 0.0, "vehicle k_p must be > 0");
  check(vehicle.disturbance_amplitude >= 0.0 && vehicle.disturbance_amplitude <= margins.delta,
        "disturbance amplitude must lie in [0, delta]");
  check(vehicle.disturbance_frequency >= 0.0, "disturbance frequency must be >= 0");
  if (!problems.empty()) {
    std::ostringstream os;
    os << "invalid scenario '" << name << "':";
    for (const auto& p : problems) os << "\n  - " << p;
    throw ConfigInvalid(os.str());
  }
}

namespace {

struct AgentSim {
  int id = 0;
  double altitude = 1.0;
  bool healthy = true;
  Vec2 commanded;
  Vec2 commanded_velocity;
  Vec2 previous_command_velocity;
  Vec2 tracked;  // controller state before disturbance
  Vec2 actual;
  Vec2 actual_velocity;
  double phase_x = 0.0;
  double phase_y = 0.0;
  double phi = 0.0;
  double psi0 = 0.0;
  bool noise = false;
  bool projected = false;
};

Vec2 clamp_norm(Vec2 v, double limit) {
  const double n = norm(v);
  return n > limit ? v * (limit / n) : v;
}

void advance_vehicle(AgentSim& a, const VehicleModel& m, double delta, double t, double dt) {
  const Vec2 before = a.actual;
  if (m.mode == TrackingMode::Perfect) {
    a.tracked = a.commanded;
    a.actual = a.commanded;
  } else {
    a.tracked += dt * (a.previous_command_velocity + m.k_p * (a.commanded - a.tracked));
    a.tracked = a.commanded + clamp_norm(a.tracked - a.commanded, delta);
    Vec2 offset = a.tracked - a.commanded;
    if (m.mode == TrackingMode::LagPlusDisturbance) {
      // Ramp in over the first second; random phases would otherwise teleport
      // the vehicle at t = 0.
      const double w = 2.0 * std::numbers::pi * m.disturbance_frequency;
      offset += std::min(t, 1.0) * m.disturbance_amplitude *
                Vec2{std::sin(w * t + a.phase_x), std::sin(1.3 * w * t + a.phase_y)};
    }
    // Saturate just inside delta so rounding never reports an error above it.
    a.actual = a.commanded + clamp_norm(offset, delta * (1.0 - 1e-12));
  }
  a.actual_velocity = (a.actual - before) / dt;
  a.previous_command_velocity = a.commanded_velocity;
}

}  // namespace

ScenarioLog run_scenario(const Scenario& s, bool fast, CommandSink* sink) {
  s.validate();
  const NavigatorConfig& nav_cfg = s.navigator;
  const double dt = nav_cfg.dt;
  const std::int64_t steps = s.step_count();

  SolverConfig solver = s.solver;
  solver.rng_seed = s.seed;
  solver.dt = dt;
  NavigatorConfig episode_cfg = nav_cfg;
  episode_cfg.total_steps = steps;
  CemNavigator nav(episode_cfg, solver);

  std::mt19937_64 phase_rng(s.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  std::vector<AgentSim> agents;
  agents.reserve(s.agents.size());
  for (const auto& spec : s.agents) {
    AgentSim a;
    a.id = spec.id;
    a.altitude = spec.altitude;
    a.commanded = a.tracked = a.actual = spec.position;
    a.phase_x = phase(phase_rng);
    a.phase_y = phase(phase_rng);
    agents.push_back(a);
  }
  auto index_of = [&](int id) {
    for (std::size_t i = 0; i < agents.size(); ++i) {
      if (agents[i].id == id) return i;
    }
    throw ConfigInvalid("unknown agent id " + std::to_string(id));
  };

  ScenarioLog log;
  log.fields.emplace_back();

  if (s.failures.size() == 1) {
    std::vector<Vec2> healthy;
    for (const auto& spec : s.agents) {
      if (spec.id != s.failures.front().agent_id) healthy.push_back(spec.position);
    }
    const double a_p = Obstacle::failed_agent({}, s.margins).planned_radius();
    if (healthy.size() >= 2) {
      const SafetyReport rep = check_theorem2(healthy, s.margins, a_p);
      if (!rep.theorem2_satisfied()) {
        std::ostringstream os;
        os << "theorem 2 check failed: d_min,0 = " << rep.d_min0 << " m < "
           << s.margins.separation_floor() + a_p << " m";
        log.warnings.push_back(os.str());
      }
    }
  }

  std::vector<FailureSpec> pending = s.failures;
  std::stable_sort(pending.begin(), pending.end(),
                   [](const FailureSpec& a, const FailureSpec& b) { return a.time < b.time; });
  std::size_t next_failure = 0;
  std::vector<Obstacle> obstacles;

  const auto period = std::chrono::duration_cast<std::chrono::steady_clock::duration>(
      std::chrono::duration<double>(dt));
  auto deadline = std::chrono::steady_clock::now();

  for (std::int64_t k = 0; k < steps; ++k) {
    deadline += period;
    const double t_start = static_cast<double>(k) * dt;

    bool field_changed = false;
    while (next_failure < pending.size() && pending[next_failure].time <= t_start + 1e-9) {
      AgentSim& f = agents[index_of(pending[next_failure].agent_id)];
      f.healthy = false;
      f.commanded = f.tracked = f.actual;
      f.commanded_velocity = f.actual_velocity = {};
      obstacles.push_back(Obstacle::failed_agent(f.actual, s.margins));
      field_changed = true;
      ++next_failure;
    }
    if (field_changed) {
      log.fields.emplace_back(obstacles);
      std::vector<Vec2> positions;
      std::vector<int> ids;
      for (const auto& a : agents) {
        if (a.healthy) {
          positions.push_back(a.commanded);
          ids.push_back(a.id);
        }
      }
      nav.activate(positions, ids, log.fields.back());
    }

    StepRecord rec;
    rec.step = k;
    rec.time = static_cast<double>(k + 1) * dt;
    rec.field_epoch = log.fields.size() - 1;
    std::int64_t runtime = 0;

    if (nav.active()) {
      const StepOutput out = nav.step();
      runtime = out.step_runtime_ns;
      rec.cem_active = true;
      rec.delta_phi = out.delta_phi_used;
      rec.v_max = out.v_max_observed;
      for (std::size_t i = 0; i < out.commands.size(); ++i) {
        const AgentCommand& c = out.commands[i];
        AgentSim& a = agents[index_of(c.agent_id)];
        a.commanded = c.position;
        a.commanded_velocity = c.velocity;
        a.phi = c.phi;
        a.psi0 = nav.states()[i].psi0;
        a.noise = c.noise_injected;
        a.projected = c.projected;
      }
    } else {
      const Vec2 v = s.preroll ? Vec2{nav_cfg.v_des, 0.0} : Vec2{};
      double v_max = 0.0;
      for (auto& a : agents) {
        a.commanded += dt * v;
        a.commanded_velocity = v;
        a.phi = a.commanded.x;
        a.psi0 = a.commanded.y;
        v_max = std::max(v_max, norm(v));
      }
      rec.v_max = v_max;
    }

    for (auto& a : agents) {
      if (a.healthy) advance_vehicle(a, s.vehicle, s.margins.delta, rec.time, dt);
      if (sink && a.healthy) sink->send(rec.time, a.id, a.commanded, a.commanded_velocity);

      AgentRecord ar;
      ar.id = a.id;
      ar.healthy = a.healthy;
      ar.desired_position = a.commanded;
      ar.desired_velocity = a.commanded_velocity;
      ar.actual_position = a.actual;
      ar.actual_velocity = a.actual_velocity;
      ar.altitude = a.altitude;
      if (a.healthy) {
        ar.phi = a.phi;
        ar.psi0 = a.psi0;
        ar.psi = rec.cem_active ? eval_field(a.commanded, log.fields.back()).psi : a.commanded.y;
        ar.noise_injected = rec.cem_active && a.noise;
        ar.projected = rec.cem_active && a.projected;
      }
      rec.agents.push_back(ar);
    }

    log.steps.push_back(std::move(rec));
    log.runtime_ns.push_back(runtime);
    const bool missed = static_cast<double>(runtime) > dt * 1e9;
    log.deadline_missed.push_back(missed);
    if (missed) ++log.deadline_misses;
    if (!fast) std::this_thread::sleep_until(deadline);
  }
  return log;
}

Scenario default_six_agent_scenario() {
  Scenario s;
  s.name = "six-agent";
  s.margins = {0.40, 0.28};
  const double a_p = Obstacle::failed_agent({}, s.margins).planned_radius();
  const double spacing = s.margins.separation_floor() + a_p;  // 2.72 m
  const double half = 0.5 * spacing;
  const double row = spacing * std::sqrt(3.0) / 2.0;
  s.agents = {
      {1, {0.0, 0.0}, 1.0},         {2, {-2.0 * row, 0.0}, 1.0},
      {3, {-row, half}, 1.0},       {4, {-row, -half}, 1.0},
      {5, {-2.0 * row, spacing}, 1.0}, {6, {-2.0 * row, -spacing}, 1.0},
  };
  s.failures = {{1, 0.0}};
  s.navigator.dt = 0.01;
  s.navigator.k_passes = 2;
  s.navigator.v_des = 1.0;
  s.duration = 20.0;
  s.seed = 1;
  s.solver = SolverConfig{};
  s.solver.dt = s.navigator.dt;
  s.solver.rng_seed = s.seed;
  return s;
}

Scenario two_vehicle_scenario() {
  Scenario s = default_six_agent_scenario();
  s.name = "two-vehicle";
  s.agents.erase(std::remove_if(s.agents.begin(), s.agents.end(),
                                [](const AgentSpec& a) { return a.id > 2; }),
                 s.agents.end());
  return s;
}

double peak_commanded_speed(const ScenarioLog& log) {
  double peak = 0.0;
  for (const auto& rec : log.steps) {
    if (!rec.cem_active) continue;
    for (const auto& a : rec.agents) {
      if (a.healthy) peak = std::max(peak, norm(a.desired_velocity));
    }
  }
  return peak;
}

std::vector<KSweepEntry> sweep_k(const Scenario& s, std::span<const int> k_values) {
  if (k_values.empty()) throw InvalidArgument("sweep_k needs at least one K");
  std::vector<KSweepEntry> out;
  for (int k : k_values) {
    Scenario run = s;
    run.navigator.k_passes = k;
    const ScenarioLog log = run_scenario(run, true);
    std::vector<std::int64_t> rt;
    for (std::size_t i = 0; i < log.steps.size(); ++i) {
      if (log.steps[i].cem_active) rt.push_back(log.runtime_ns[i]);
    }
    out.push_back({k, peak_commanded_speed(log), mean(rt), percentile(rt, 50.0),
                   percentile(rt, 99.0)});
  }
  return out;
}

}  // namespace streamnav
