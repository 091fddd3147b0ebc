#include "streamnav/log_io.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "streamnav/errors.hpp"

namespace streamnav {

using nlohmann::json;

namespace {

json vec(const Vec2& v) { return json::array({v.x, v.y}); }

Vec2 to_vec(const json& j) { return {j.at(0).get<double>(), j.at(1).get<double>()}; }

// 17 significant digits round-trip any double.
std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

}  // namespace

std::string step_record_json(const StepRecord& rec, const FlowField& field) {
  json j;
  j["schema"] = kStepLogSchema;
  j["step"] = rec.step;
  j["t"] = rec.time;
  j["cem"] = rec.cem_active;
  j["dphi"] = rec.delta_phi;
  j["vmax"] = rec.v_max;
  j["epoch"] = rec.field_epoch;
  json obstacles = json::array();
  for (const auto& o : field.obstacles()) {
    obstacles.push_back({{"c", vec(o.center())}, {"af", o.actual_radius()}, {"ap", o.planned_radius()}});
  }
  j["obstacles"] = obstacles;
  json agents = json::array();
  for (const auto& a : rec.agents) {
    json r = {{"id", a.id},         {"healthy", a.healthy},
              {"rd", vec(a.desired_position)}, {"vd", vec(a.desired_velocity)},
              {"phi", a.phi},       {"psi0", a.psi0},
              {"psi", a.psi},       {"alt", a.altitude},
              {"noise", a.noise_injected}, {"projected", a.projected}};
    if (a.actual_position) r["ra"] = vec(*a.actual_position);
    if (a.actual_velocity) r["va"] = vec(*a.actual_velocity);
    agents.push_back(std::move(r));
  }
  j["agents"] = agents;
  return j.dump();
}

void write_step_log(std::ostream& out, const ScenarioLog& log) {
  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    out << step_record_json(log.steps[k], log.field_at(k)) << '\n';
  }
}

ScenarioLog read_step_log(std::istream& in) {
  ScenarioLog log;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    try {
      const json j = json::parse(line);
      if (j.at("schema").get<std::string>() != kStepLogSchema) {
        throw ConfigParseError("line " + std::to_string(lineno) + ": unsupported schema");
      }
      StepRecord rec;
      rec.step = j.at("step").get<std::int64_t>();
      rec.time = j.at("t").get<double>();
      rec.cem_active = j.at("cem").get<bool>();
      rec.delta_phi = j.at("dphi").get<double>();
      rec.v_max = j.at("vmax").get<double>();
      rec.field_epoch = j.at("epoch").get<std::size_t>();
      // Epochs without steps (e.g. the pre-failure field when the first
      // failure is at t = 0) stay empty.
      if (log.fields.size() <= rec.field_epoch) {
        log.fields.resize(rec.field_epoch + 1);
        std::vector<Obstacle> obs;
        for (const auto& o : j.at("obstacles")) {
          obs.emplace_back(to_vec(o.at("c")), o.at("af").get<double>(), o.at("ap").get<double>());
        }
        log.fields[rec.field_epoch] = FlowField(std::move(obs));
      }
      for (const auto& r : j.at("agents")) {
        AgentRecord a;
        a.id = r.at("id").get<int>();
        a.healthy = r.at("healthy").get<bool>();
        a.desired_position = to_vec(r.at("rd"));
        a.desired_velocity = to_vec(r.at("vd"));
        a.phi = r.at("phi").get<double>();
        a.psi0 = r.at("psi0").get<double>();
        a.psi = r.at("psi").get<double>();
        a.altitude = r.at("alt").get<double>();
        a.noise_injected = r.at("noise").get<bool>();
        a.projected = r.at("projected").get<bool>();
        if (r.contains("ra")) a.actual_position = to_vec(r.at("ra"));
        if (r.contains("va")) a.actual_velocity = to_vec(r.at("va"));
        rec.agents.push_back(a);
      }
      log.steps.push_back(std::move(rec));
      log.deadline_missed.push_back(false);
    } catch (const json::exception& e) {
      throw ConfigParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  return log;
}

void write_summary_csv(std::ostream& out, const ScenarioLog& log,
                       std::span<const SeparationSample> separations) {
  out << "step,time,cem_active,d_min_cmd,d_min_actual,clearance_cmd,clearance_actual,"
         "delta_phi,v_max,runtime_ns\n";
  for (std::size_t k = 0; k < log.steps.size(); ++k) {
    const StepRecord& rec = log.steps[k];
    const SeparationSample* s = k < separations.size() ? &separations[k] : nullptr;
    out << rec.step << ',' << fmt(rec.time) << ',' << (rec.cem_active ? 1 : 0) << ','
        << (s ? opt(s->d_min_commanded) : "") << ',' << (s ? opt(s->d_min_actual) : "") << ','
        << (s ? opt(s->clearance_commanded) : "") << ','
        << (s ? opt(s->clearance_actual) : "") << ',' << fmt(rec.delta_phi) << ','
        << fmt(rec.v_max) << ',' << (k < log.runtime_ns.size() ? log.runtime_ns[k] : 0) << '\n';
  }
}

}  // namespace streamnav
