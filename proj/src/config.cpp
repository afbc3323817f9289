#include "simbiped/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "simbiped/errors.hpp"

namespace simbiped::config {

namespace {

using nlohmann::json;
using scenario::ScenarioConfig;

json gains_json(const control::PdGains& g) { return {{"kp", g.kp}, {"kd", g.kd}}; }

json to_json(const ScenarioConfig& c) {
  json j;
  j["scenario"] = std::string(scenario::to_string(c.scenario));
  j["x_init"] = c.x_init;
  j["theta_d"] = c.theta_d;
  j["gains"] = {{"hip", gains_json(c.gains.hip)},
                {"knee", gains_json(c.gains.knee)},
                {"ankle", gains_json(c.gains.ankle)},
                {"posture", gains_json(c.gains.posture)},
                {"dual_hip", c.gains.dual_hip},
                {"hip_swing", gains_json(c.gains.hip_swing)}};
  j["gait"] = {{"t_step", c.gait.t_step()},
               {"t_m", c.gait.t_m()},
               {"z_fm", c.gait.z_fm()},
               {"v_d", c.gait.v_d()}};
  j["duration"] = c.duration;
  j["dt"] = c.dt;
  j["seed"] = c.seed ? json(*c.seed) : json(nullptr);
  j["jitter"] = c.jitter;
  j["output"] = c.output;
  j["distance_target"] = c.distance_target;
  j["filter_alpha"] = c.filter_alpha;
  j["exchange_window"] = c.exchange_window;
  j["rig"] = {{"amplitude", c.rig.amplitude},
              {"frequency", c.rig.frequency},
              {"settle_time", c.rig.settle_time}};
  return j;
}

std::string join(const std::string& prefix, const std::string& key) {
  return prefix.empty() ? key : prefix + "." + key;
}

const json& object_at(const json& j, const std::string& key) {
  if (!j.is_object()) throw ParseError(key, "expected an object");
  return j;
}

double number(const json& v, const std::string& key) {
  if (!v.is_number()) throw ParseError(key, "expected a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError(key, "expected a finite number");
  return d;
}

bool boolean(const json& v, const std::string& key) {
  if (!v.is_boolean()) throw ParseError(key, "expected true or false");
  return v.get<bool>();
}

std::string text(const json& v, const std::string& key) {
  if (!v.is_string()) throw ParseError(key, "expected a string");
  return v.get<std::string>();
}

void read_gains(const json& j, const std::string& key, control::PdGains& g) {
  for (const auto& [k, v] : object_at(j, key).items()) {
    const std::string path = join(key, k);
    if (k == "kp") {
      g.kp = number(v, path);
    } else if (k == "kd") {
      g.kd = number(v, path);
    } else {
      throw ParseError(path, "unknown key");
    }
  }
}

ScenarioConfig from_json(const json& doc, std::optional<scenario::ScenarioId> forced) {
  if (!doc.is_object()) throw ParseError("<document>", "expected a JSON object");
  scenario::ScenarioId id = scenario::ScenarioId::kWalkFull;
  if (doc.contains("scenario")) {
    const std::string name = text(doc["scenario"], "scenario");
    try {
      id = scenario::scenario_from_string(name);
    } catch (const ParameterError&) {
      throw ParseError("scenario", "unknown scenario id '" + name + "'");
    }
  }
  if (forced) id = *forced;
  ScenarioConfig c = scenario::default_config(id);

  for (const auto& [k, v] : doc.items()) {
    if (k == "scenario") {
      continue;
    } else if (k == "x_init") {
      c.x_init = number(v, k);
    } else if (k == "theta_d") {
      c.theta_d = number(v, k);
    } else if (k == "gains") {
      for (const auto& [gk, gv] : object_at(v, k).items()) {
        const std::string path = join(k, gk);
        if (gk == "hip") {
          read_gains(gv, path, c.gains.hip);
        } else if (gk == "knee") {
          read_gains(gv, path, c.gains.knee);
        } else if (gk == "ankle") {
          read_gains(gv, path, c.gains.ankle);
        } else if (gk == "posture") {
          read_gains(gv, path, c.gains.posture);
        } else if (gk == "hip_swing") {
          read_gains(gv, path, c.gains.hip_swing);
        } else if (gk == "dual_hip") {
          c.gains.dual_hip = boolean(gv, path);
        } else {
          throw ParseError(path, "unknown key");
        }
      }
    } else if (k == "gait") {
      double t_step = c.gait.t_step();
      double t_m = c.gait.t_m();
      double z_fm = c.gait.z_fm();
      double v_d = c.gait.v_d();
      for (const auto& [gk, gv] : object_at(v, k).items()) {
        const std::string path = join(k, gk);
        if (gk == "t_step") {
          t_step = number(gv, path);
        } else if (gk == "t_m") {
          t_m = number(gv, path);
        } else if (gk == "z_fm") {
          z_fm = number(gv, path);
        } else if (gk == "v_d") {
          v_d = number(gv, path);
        } else {
          throw ParseError(path, "unknown key");
        }
      }
      try {
        c.gait = gait::GaitParams(t_step, t_m, z_fm, v_d);
      } catch (const ParameterError& e) {
        throw ParseError(k, e.what());
      }
    } else if (k == "duration") {
      c.duration = number(v, k);
    } else if (k == "dt") {
      c.dt = number(v, k);
    } else if (k == "seed") {
      if (v.is_null()) {
        c.seed.reset();
      } else if (v.is_number_unsigned()) {
        c.seed = v.get<unsigned>();
      } else {
        throw ParseError(k, "expected a non-negative integer or null");
      }
    } else if (k == "jitter") {
      c.jitter = number(v, k);
    } else if (k == "output") {
      c.output = text(v, k);
    } else if (k == "distance_target") {
      c.distance_target = number(v, k);
    } else if (k == "filter_alpha") {
      c.filter_alpha = number(v, k);
    } else if (k == "exchange_window") {
      c.exchange_window = number(v, k);
    } else if (k == "rig") {
      for (const auto& [rk, rv] : object_at(v, k).items()) {
        const std::string path = join(k, rk);
        if (rk == "amplitude") {
          c.rig.amplitude = number(rv, path);
        } else if (rk == "frequency") {
          c.rig.frequency = number(rv, path);
        } else if (rk == "settle_time") {
          c.rig.settle_time = number(rv, path);
        } else {
          throw ParseError(path, "unknown key");
        }
      }
    } else {
      throw ParseError(k, "unknown key");
    }
  }

  try {
    c.validate();
  } catch (const ParameterError& e) {
    // Validation messages lead with the field name.
    const std::string msg = e.what();
    throw ParseError(msg.substr(0, msg.find(' ')), msg);
  }
  return c;
}

json parse_json(std::string_view text_in) {
  try {
    return json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw ParseError("<document>", e.what());
  }
}

}  // namespace

ScenarioConfig parse_config(std::string_view json_text,
                            std::optional<scenario::ScenarioId> scenario) {
  return from_json(parse_json(json_text), scenario);
}

ScenarioConfig load_config(const std::string& path, std::optional<scenario::ScenarioId> scenario) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read config '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), scenario);
}

std::string dump_config(const ScenarioConfig& config) { return to_json(config).dump(2) + "\n"; }

void save_config(const ScenarioConfig& config, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << dump_config(config);
  if (!out) throw IoError("write to '" + path + "' failed");
}

std::string dump_summary(const scenario::Summary& s) {
  json j;
  j["steps"] = s.steps;
  j["distance"] = s.distance;
  j["duration"] = s.duration;
  j["mean_velocity"] = s.mean_velocity;
  j["max_velocity"] = s.max_velocity;
  j["fell"] = s.fell;
  j["fall_step"] = s.fall_step;
  j["instability"] = s.instability;
  j["reached_target"] = s.reached_target;
  j["rms_error"] = s.rms_error;
  j["steady_step"] = s.steady_step;
  j["hip_z_after5"] = {s.min_hip_z_after5, s.max_hip_z_after5};
  j["com_z_after5"] = {s.min_com_z_after5, s.max_com_z_after5};
  j["reach_errors"] = s.reach_errors;
  j["events"] = s.events;
  return j.dump(2) + "\n";
}

ScenarioConfig apply_overrides(const ScenarioConfig& config,
                               const std::vector<std::string>& overrides) {
  json j = to_json(config);
  for (const std::string& o : overrides) {
    const std::size_t eq = o.find('=');
    if (eq == std::string::npos || eq == 0) throw ParseError(o, "override must be key=value");
    const std::string key = o.substr(0, eq);
    const std::string raw = o.substr(eq + 1);
    std::string pointer;
    std::stringstream parts(key);
    for (std::string part; std::getline(parts, part, '.');) pointer += "/" + part;
    const json::json_pointer ptr(pointer);
    if (!j.contains(ptr)) throw ParseError(key, "unknown key");
    json value;
    try {
      value = json::parse(raw);
    } catch (const json::parse_error&) {
      value = raw;
    }
    j[ptr] = value;
  }
  return from_json(j, std::nullopt);
}

std::vector<double> GridAxis::values() const {
  std::vector<double> v;
  if (n == 1) return {lo};
  for (int i = 0; i < n; ++i) v.push_back(lo + (hi - lo) * i / (n - 1));
  return v;
}

GridAxis parse_grid(std::string_view text) {
  std::vector<std::string> parts;
  std::stringstream ss{std::string(text)};
  for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
  if (parts.size() != 4 || parts[0].empty()) {
    throw ParseError(std::string(text), "grid must be key:lo:hi:n");
  }
  GridAxis g;
  g.key = parts[0];
  try {
    std::size_t used = 0;
    g.lo = std::stod(parts[1], &used);
    if (used != parts[1].size()) throw std::invalid_argument("lo");
    g.hi = std::stod(parts[2], &used);
    if (used != parts[2].size()) throw std::invalid_argument("hi");
    g.n = std::stoi(parts[3], &used);
    if (used != parts[3].size()) throw std::invalid_argument("n");
  } catch (const std::exception&) {
    throw ParseError(g.key, "grid bounds must be numbers: '" + std::string(text) + "'");
  }
  if (g.n < 1) throw ParseError(g.key, "grid needs n >= 1");
  return g;
}

}  // namespace simbiped::config
