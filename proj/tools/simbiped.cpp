#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "simbiped/config.hpp"
#include "simbiped/errors.hpp"
#include "simbiped/scenario.hpp"
#include "simbiped/telemetry.hpp"

namespace sc = simbiped::scenario;
namespace cfg = simbiped::config;

namespace {

constexpr int kUsageError = 1;

sc::ScenarioConfig resolve(const std::string& config_path, const std::string& scenario) {
  std::optional<sc::ScenarioId> id;
  if (!scenario.empty()) {
    try {
      id = sc::scenario_from_string(scenario);
    } catch (const simbiped::ParameterError&) {
      throw simbiped::ParseError("scenario", "unknown scenario id '" + scenario + "'");
    }
  }
  if (config_path.empty()) return sc::default_config(id.value_or(sc::ScenarioId::kWalkFull));
  return cfg::load_config(config_path, id);
}

int run(const sc::ScenarioConfig& c) {
  const sc::RunResult r = sc::run_scenario(c);
  if (!c.output.empty()) simbiped::write_telemetry(r.telemetry, c.output);
  std::cout << cfg::dump_summary(r.summary);
  return sc::exit_code(r.summary);
}

// Cartesian product of the grid axes, applied as overrides.
std::vector<std::vector<std::string>> grid_points(const std::vector<cfg::GridAxis>& axes) {
  std::vector<std::vector<std::string>> points{{}};
  for (const cfg::GridAxis& a : axes) {
    std::vector<std::vector<std::string>> next;
    for (const auto& p : points) {
      for (double v : a.values()) {
        auto q = p;
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        q.push_back(a.key + "=" + buf);
        next.push_back(std::move(q));
      }
    }
    points = std::move(next);
  }
  return points;
}

int sweep(const sc::ScenarioConfig& base, const std::vector<std::string>& grids,
          const std::string& out_dir, unsigned jobs) {
  std::vector<cfg::GridAxis> axes;
  for (const std::string& g : grids) axes.push_back(cfg::parse_grid(g));
  const auto points = grid_points(axes);
  std::vector<sc::ScenarioConfig> configs;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sc::ScenarioConfig c = cfg::apply_overrides(base, points[i]);
    c.output = out_dir.empty() ? "" : (std::filesystem::path(out_dir) /
                                       ("run_" + std::to_string(i) + ".csv")).string();
    configs.push_back(std::move(c));
  }
  if (!out_dir.empty()) std::filesystem::create_directories(out_dir);

  std::vector<sc::Summary> results(configs.size());
  std::vector<std::string> errors(configs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < configs.size(); i = next++) {
      try {
        const sc::RunResult r = sc::run_scenario(configs[i]);
        if (!configs[i].output.empty()) simbiped::write_telemetry(r.telemetry, configs[i].output);
        results[i] = r.summary;
      } catch (const std::exception& e) {
        errors[i] = e.what();
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(configs.size())));
  for (unsigned t = 0; t < n; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();

  int status = 0;
  std::cout << "run";
  for (const cfg::GridAxis& a : axes) std::cout << ',' << a.key;
  std::cout << ",steps,distance,mean_velocity,max_velocity,fell,instability,rms_error,error\n";
  for (std::size_t i = 0; i < configs.size(); ++i) {
    std::cout << i;
    char buf[160];
    for (const std::string& p : points[i]) {
      std::snprintf(buf, sizeof buf, ",%.9g", std::stod(p.substr(p.find('=') + 1)));
      std::cout << buf;
    }
    const sc::Summary& s = results[i];
    std::snprintf(buf, sizeof buf, ",%d,%.9g,%.9g,%.9g,%d,%d,%.9g,", s.steps, s.distance,
                  s.mean_velocity, s.max_velocity, int(s.fell), int(s.instability), s.rms_error);
    std::cout << buf << errors[i] << '\n';
    if (!errors[i].empty()) status = kUsageError;
  }
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Planar biped walking simulator"};
  app.require_subcommand(1);

  std::string config_path;
  std::string scenario;
  std::optional<double> duration;
  std::string out;
  std::vector<std::string> overrides;

  CLI::App* run_cmd = app.add_subcommand("run", "Run one scenario");
  run_cmd->add_option("--config", config_path, "JSON config (defaults when omitted)");
  run_cmd->add_option("--scenario", scenario, "Scenario id; replaces the config's id");
  run_cmd->add_option("--duration", duration, "Simulated seconds");
  run_cmd->add_option("--out", out, "Telemetry CSV path");
  run_cmd->add_option("--override", overrides, "key=value, dotted keys (repeatable)");

  std::vector<std::string> grids;
  std::string out_dir;
  unsigned jobs = std::max(1u, std::thread::hardware_concurrency());
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Grid sweep over config keys");
  sweep_cmd->add_option("--config", config_path, "JSON config (defaults when omitted)");
  sweep_cmd->add_option("--scenario", scenario, "Scenario id; replaces the config's id");
  sweep_cmd->add_option("--grid", grids, "key:lo:hi:n (repeatable)")->required();
  sweep_cmd->add_option("--override", overrides, "key=value applied before the grid");
  sweep_cmd->add_option("--out-dir", out_dir, "Directory for per-run CSVs");
  sweep_cmd->add_option("--jobs", jobs, "Parallel runs");

  CLI::App* defaults_cmd = app.add_subcommand("defaults", "Print a scenario's default config");
  defaults_cmd->add_option("--scenario", scenario, "Scenario id");

  CLI11_PARSE(app, argc, argv);

  try {
    sc::ScenarioConfig c = resolve(config_path, scenario);
    if (*defaults_cmd) {
      std::cout << cfg::dump_config(c);
      return 0;
    }
    c = cfg::apply_overrides(c, overrides);
    if (duration) c.duration = *duration;
    if (!out.empty()) c.output = out;
    c.validate();
    if (*run_cmd) return run(c);
    return sweep(c, grids, out_dir, jobs);
  } catch (const simbiped::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  }
}
