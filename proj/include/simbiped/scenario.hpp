#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "simbiped/gait.hpp"
#include "simbiped/telemetry.hpp"
#include "simbiped/walker.hpp"

namespace simbiped::scenario {

enum class ScenarioId {
  kWalkPointFeet,
  kWalkNoAnkle,
  kWalkFull,
  kTuneHipAir,
  kTuneHipGround,
  kTuneKnee,
  kTuneAnkle,
};

std::string_view to_string(ScenarioId id);
// Throws ParameterError for an unknown id.
ScenarioId scenario_from_string(std::string_view name);
bool is_rig(ScenarioId id);

// Sine target used by the tuning rigs.
struct RigParams {
  double amplitude = 0.5;  // rad
  double frequency = 0.5;  // Hz
  double settle_time = 2.5;  // RMS excludes samples before this
};

struct ScenarioConfig {
  ScenarioId scenario = ScenarioId::kWalkFull;
  double x_init = 0.173;
  double theta_d = 0.1;
  walker::WalkerGains gains;
  gait::GaitParams gait;
  double duration = 60.0;
  double dt = 1.0 / 60.0;
  std::optional<unsigned> seed;  // jitters x_init by up to +-jitter
  double jitter = 0.005;
  std::string output;
  double distance_target = 100.0;
  double filter_alpha = control::kDefaultFilterAlpha;
  double exchange_window = 0.8;
  RigParams rig;

  // Throws ParameterError on invalid values.
  void validate() const;
  bool operator==(const ScenarioConfig&) const;
};

// Default settings for each scenario (gains, torso pitch, duration).
ScenarioConfig default_config(ScenarioId id);

// Number of consecutive settled steps that define steady gait.
inline constexpr int kSteadyStreak = 5;

struct Summary {
  // Completed support exchanges.
  int steps = 0;
  double distance = 0.0;       // CoM x travelled (m)
  double duration = 0.0;       // simulated time (s)
  double mean_velocity = 0.0;  // distance / duration
  double max_velocity = 0.0;   // fastest single step, averaged over the step
  bool fell = false;
  int fall_step = -1;
  bool instability = false;
  bool reached_target = false;
  double rms_error = 0.0;  // rad, tracked joints (rigs) or all joints (walks)
  // Step index completing the first run of kSteadyStreak settled steps;
  // -1 if never reached. A settled step keeps the hip within 10% of h_c
  // and torso pitch within 0.25 rad of its reference.
  int steady_step = -1;
  // Ranges after the fifth exchange. The hip carries the LIPM point mass;
  // the whole-body CoM sits lower because of the legs.
  double min_hip_z_after5 = 0.0;
  double max_hip_z_after5 = 0.0;
  double min_com_z_after5 = 0.0;
  double max_com_z_after5 = 0.0;
  int reach_errors = 0;
  std::vector<std::string> events;
};

struct RunResult {
  Telemetry telemetry;
  Summary summary;
};

// Runs a scenario to completion, a fall, or an instability. Telemetry is
// kept in memory; write it with write_telemetry.
RunResult run_scenario(const ScenarioConfig& config);

// Process exit code for a summary: 0 completed, 2 fall, 3 instability.
int exit_code(const Summary& summary);

}  // namespace simbiped::scenario
