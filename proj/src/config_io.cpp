#include "streamnav/config_io.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "streamnav/errors.hpp"

namespace streamnav {

using nlohmann::json;

namespace {

void reject_unknown(const json& obj, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!obj.is_object()) throw ConfigParseError(where + " must be an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, _] : obj.items()) {
    if (!keys.count(key)) throw ConfigParseError("unknown key '" + key + "' in " + where);
  }
}

template <class T>
void read(const json& obj, const char* key, T& out, const std::string& where) {
  if (!obj.contains(key)) return;
  try {
    out = obj.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigParseError(where + "." + key + ": " + e.what());
  }
}

Vec2 read_point(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ConfigParseError(where + " must be [x, y]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

const char* mode_name(TrackingMode m) {
  switch (m) {
    case TrackingMode::Perfect:
      return "perfect";
    case TrackingMode::FirstOrderLag:
      return "first_order_lag";
    case TrackingMode::LagPlusDisturbance:
      return "lag_plus_disturbance";
  }
  return "?";
}

TrackingMode parse_mode(const std::string& s) {
  if (s == "perfect") return TrackingMode::Perfect;
  if (s == "first_order_lag") return TrackingMode::FirstOrderLag;
  if (s == "lag_plus_disturbance") return TrackingMode::LagPlusDisturbance;
  throw ConfigParseError("vehicle.mode must be perfect, first_order_lag or lag_plus_disturbance");
}

}  // namespace

ConfigFile parse_config(const std::string& text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigParseError(std::string("config is not valid JSON: ") + e.what());
  }
  reject_unknown(root,
                 {"name", "seed", "duration", "preroll", "margins", "navigator", "solver",
                  "vehicle", "agents", "failures", "safety"},
                 "config");

  ConfigFile cfg;
  Scenario& s = cfg.scenario;
  s = default_six_agent_scenario();
  s.agents.clear();
  s.failures.clear();

  read(root, "name", s.name, "config");
  read(root, "seed", s.seed, "config");
  read(root, "duration", s.duration, "config");
  read(root, "preroll", s.preroll, "config");

  if (root.contains("margins")) {
    const json& m = root["margins"];
    reject_unknown(m, {"delta", "epsilon"}, "margins");
    read(m, "delta", s.margins.delta, "margins");
    read(m, "epsilon", s.margins.epsilon, "margins");
  }
  if (root.contains("navigator")) {
    const json& n = root["navigator"];
    reject_unknown(n, {"dt", "k_passes", "v_des"}, "navigator");
    read(n, "dt", s.navigator.dt, "navigator");
    read(n, "k_passes", s.navigator.k_passes, "navigator");
    read(n, "v_des", s.navigator.v_des, "navigator");
  }
  if (root.contains("solver")) {
    const json& n = root["solver"];
    reject_unknown(n, {"iterations", "noise_sigma", "saddle_det_threshold"}, "solver");
    read(n, "iterations", s.solver.iterations, "solver");
    read(n, "noise_sigma", s.solver.noise_sigma, "solver");
    read(n, "saddle_det_threshold", s.solver.saddle_det_threshold, "solver");
  }
  s.solver.dt = s.navigator.dt;
  s.solver.rng_seed = s.seed;
  if (root.contains("vehicle")) {
    const json& v = root["vehicle"];
    reject_unknown(v, {"mode", "k_p", "disturbance_amplitude", "disturbance_frequency"}, "vehicle");
    std::string mode = mode_name(s.vehicle.mode);
    read(v, "mode", mode, "vehicle");
    s.vehicle.mode = parse_mode(mode);
    read(v, "k_p", s.vehicle.k_p, "vehicle");
    read(v, "disturbance_amplitude", s.vehicle.disturbance_amplitude, "vehicle");
    read(v, "disturbance_frequency", s.vehicle.disturbance_frequency, "vehicle");
  }
  if (!root.contains("agents") || !root["agents"].is_array()) {
    throw ConfigParseError("config.agents must be an array");
  }
  for (std::size_t i = 0; i < root["agents"].size(); ++i) {
    const json& a = root["agents"][i];
    const std::string where = "agents[" + std::to_string(i) + "]";
    reject_unknown(a, {"id", "position", "altitude"}, where);
    if (!a.contains("id") || !a.contains("position")) {
      throw ConfigParseError(where + " needs id and position");
    }
    AgentSpec spec;
    read(a, "id", spec.id, where);
    spec.position = read_point(a["position"], where + ".position");
    read(a, "altitude", spec.altitude, where);
    s.agents.push_back(spec);
  }
  if (root.contains("failures")) {
    if (!root["failures"].is_array()) throw ConfigParseError("config.failures must be an array");
    for (std::size_t i = 0; i < root["failures"].size(); ++i) {
      const json& f = root["failures"][i];
      const std::string where = "failures[" + std::to_string(i) + "]";
      reject_unknown(f, {"agent", "time"}, where);
      if (!f.contains("agent")) throw ConfigParseError(where + " needs agent");
      FailureSpec spec;
      read(f, "agent", spec.agent_id, where);
      read(f, "time", spec.time, where);
      s.failures.push_back(spec);
    }
  }
  if (root.contains("safety")) {
    const json& c = root["safety"];
    reject_unknown(c, {"lambda_domain", "grid_step"}, "safety");
    read(c, "grid_step", cfg.check.grid_step, "safety");
    if (c.contains("lambda_domain")) {
      const json& b = c["lambda_domain"];
      if (!b.is_array() || b.size() != 4 ||
          !std::all_of(b.begin(), b.end(), [](const json& v) { return v.is_number(); })) {
        throw ConfigParseError("safety.lambda_domain must be [x_min, x_max, y_min, y_max]");
      }
      cfg.check.lambda_domain =
          Box{b[0].get<double>(), b[1].get<double>(), b[2].get<double>(), b[3].get<double>()};
    }
  }
  return cfg;
}

ConfigFile load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigParseError("cannot read config file " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string serialize_config(const ConfigFile& config) {
  const Scenario& s = config.scenario;
  json root;
  root["name"] = s.name;
  root["seed"] = s.seed;
  root["duration"] = s.duration;
  root["preroll"] = s.preroll;
  root["margins"] = {{"delta", s.margins.delta}, {"epsilon", s.margins.epsilon}};
  root["navigator"] = {{"dt", s.navigator.dt},
                       {"k_passes", s.navigator.k_passes},
                       {"v_des", s.navigator.v_des}};
  root["solver"] = {{"iterations", s.solver.iterations},
                    {"noise_sigma", s.solver.noise_sigma},
                    {"saddle_det_threshold", s.solver.saddle_det_threshold}};
  root["vehicle"] = {{"mode", mode_name(s.vehicle.mode)},
                     {"k_p", s.vehicle.k_p},
                     {"disturbance_amplitude", s.vehicle.disturbance_amplitude},
                     {"disturbance_frequency", s.vehicle.disturbance_frequency}};
  json agents = json::array();
  for (const auto& a : s.agents) {
    agents.push_back({{"id", a.id}, {"position", {a.position.x, a.position.y}}, {"altitude", a.altitude}});
  }
  root["agents"] = agents;
  json failures = json::array();
  for (const auto& f : s.failures) failures.push_back({{"agent", f.agent_id}, {"time", f.time}});
  root["failures"] = failures;
  json safety = {{"grid_step", config.check.grid_step}};
  if (const auto& b = config.check.lambda_domain) {
    safety["lambda_domain"] = {b->x_min, b->x_max, b->y_min, b->y_max};
  }
  root["safety"] = safety;
  return root.dump(2) + "\n";
}

void apply_seed_override(ConfigFile& config) {
  const char* env = std::getenv("STREAMNAV_SEED");
  if (!env || !*env) return;
  char* end = nullptr;
  const unsigned long long v = std::strtoull(env, &end, 10);
  if (*end != '\0') throw ConfigParseError(std::string("STREAMNAV_SEED is not an integer: ") + env);
  config.scenario.seed = v;
  config.scenario.solver.rng_seed = v;
}

Box default_lambda_domain(const Scenario& s) {
  if (s.agents.empty()) throw ConfigInvalid("scenario has no agents");
  Box b{s.agents[0].position.x, s.agents[0].position.x, s.agents[0].position.y,
        s.agents[0].position.y};
  for (const auto& a : s.agents) {
    b.x_min = std::min(b.x_min, a.position.x);
    b.x_max = std::max(b.x_max, a.position.x);
    b.y_min = std::min(b.y_min, a.position.y);
    b.y_max = std::max(b.y_max, a.position.y);
  }
  const double pad = 5.0 * Obstacle::failed_agent({}, s.margins).planned_radius();
  return {b.x_min - pad, b.x_max + pad, b.y_min - pad, b.y_max + pad};
}

}  // namespace streamnav
