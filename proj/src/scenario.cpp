#include "simbiped/scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "simbiped/errors.hpp"
#include "simbiped/robot.hpp"

namespace simbiped::scenario {

namespace {

constexpr double kPi = std::numbers::pi;

struct NamedId {
  std::string_view name;
  ScenarioId id;
};

constexpr std::array<NamedId, 7> kIds{{
    {"walk_point_feet", ScenarioId::kWalkPointFeet},
    {"walk_no_ankle", ScenarioId::kWalkNoAnkle},
    {"walk_full", ScenarioId::kWalkFull},
    {"tune_hip_air", ScenarioId::kTuneHipAir},
    {"tune_hip_ground", ScenarioId::kTuneHipGround},
    {"tune_knee", ScenarioId::kTuneKnee},
    {"tune_ankle", ScenarioId::kTuneAnkle},
}};

bool same_gains(const control::PdGains& a, const control::PdGains& b) {
  return a.kp == b.kp && a.kd == b.kd;
}

std::vector<std::string> joint_names(const robot::Robot& r) {
  std::vector<std::string> names;
  for (int id : r.joint_order()) names.push_back(r.world.joint(id).name);
  return names;
}

TelemetryRecord sample(const robot::Robot& r, double t, const std::vector<double>& desired,
                       int step_index) {
  TelemetryRecord rec;
  rec.t = t;
  const robot::ComState c = robot::com_state(r);
  rec.com_x = c.x;
  rec.com_z = c.z;
  rec.com_vx = c.x_dot;
  rec.com_vz = c.z_dot;
  rec.torso_pitch = -r.world.body(r.torso).pose.angle;
  const std::vector<int> order = r.joint_order();
  for (std::size_t k = 0; k < order.size(); ++k) {
    const physics::JointReadout jr = r.world.joint_readout(order[k]);
    rec.joints.push_back({desired[k], jr.angle, jr.velocity, r.world.applied_torque(order[k])});
  }
  const robot::ContactState cs = robot::contacts(r);
  rec.contact = cs.foot;
  rec.step_index = step_index;
  return rec;
}

// Shifts every body vertically so the lowest corner touches the ground.
void drop_to_ground(robot::Robot& r) {
  double lowest = 1e300;
  for (int i = 0; i < r.world.body_count(); ++i) {
    const physics::Body& b = r.world.body(i);
    for (double sx : {-1.0, 1.0}) {
      for (double sz : {-1.0, 1.0}) {
        lowest = std::min(lowest, b.world_point({sx * b.half_extents.x, sz * b.half_extents.z}).z);
      }
    }
  }
  for (int i = 0; i < r.world.body_count(); ++i) r.world.mutable_body(i).pose.position.z -= lowest;
}

// --- tuning rigs ---------------------------------------------------------

struct Rig {
  robot::Robot robot;
  std::vector<control::PdController> pds;  // joint_order()
  std::vector<double> center;              // hold or sine centre per joint
  std::vector<bool> tracked;
};

Rig build_rig(const ScenarioConfig& cfg) {
  physics::WorldConfig wc;
  wc.dt = cfg.dt;
  robot::BuildOptions opt;
  robot::RobotPose pose;
  kin::RobotGeometry geom = kin::RobotGeometry::point_feet();
  robot::FeetMode feet = robot::FeetMode::kNone;
  const kin::LegAngles straight{0.0, kPi, 0.0};
  pose.legs = {straight, straight};
  pose.hip = {0.0, 2.0};

  switch (cfg.scenario) {
    case ScenarioId::kTuneHipAir:
      wc.gravity = 0.0;
      opt.static_torso = true;
      break;
    case ScenarioId::kTuneHipGround: {
      opt.static_thighs = true;
      opt.static_shins = true;
      const double spread = 0.3;
      pose.legs[0].gamma = spread;
      pose.legs[1].gamma = -spread;
      pose.hip = {0.0, (geom.l_thigh + geom.l_shin) * std::cos(spread)};
      break;
    }
    case ScenarioId::kTuneKnee:
      opt.static_torso = true;
      opt.static_thighs = true;
      pose.legs[0].gamma = pose.legs[1].gamma = kPi / 2.0;
      break;
    case ScenarioId::kTuneAnkle:
      geom = kin::RobotGeometry::with_feet();
      feet = robot::FeetMode::kActuated;
      opt.static_torso = true;
      opt.static_thighs = true;
      opt.static_shins = true;
      pose.torso_angle = kPi;
      pose.hip = {0.0, 0.5};
      break;
    default:
      throw ParameterError("not a tuning rig: " + std::string(to_string(cfg.scenario)));
  }
  opt.world = wc;

  Rig rig{robot::build_robot(geom, feet, pose, opt), {}, {}, {}};
  if (cfg.scenario == ScenarioId::kTuneHipAir) {
    // Knees pinned straight so the hips swing rigid legs.
    for (const robot::LegIds& ids : rig.robot.legs) {
      physics::JointDef& kn = rig.robot.world.mutable_joint(ids.knee);
      kn.limit_enabled = true;
      kn.lower = kn.upper = kPi;
    }
  }
  const double alpha = cfg.filter_alpha;
  const walker::WalkerGains& g = cfg.gains;
  for (std::size_t side = 0; side < 2; ++side) {
    const robot::LegIds& ids = rig.robot.legs[side];
    const kin::LegAngles& a = pose.legs[side];
    rig.pds.emplace_back(g.hip, robot::kTorqueLimit, alpha);
    rig.center.push_back(a.gamma);
    rig.tracked.push_back(cfg.scenario == ScenarioId::kTuneHipAir ||
                          cfg.scenario == ScenarioId::kTuneHipGround);
    rig.pds.emplace_back(g.knee, robot::kTorqueLimit, alpha);
    const bool knee_rig = cfg.scenario == ScenarioId::kTuneKnee;
    rig.center.push_back(knee_rig ? kPi - 0.6 : a.theta);
    rig.tracked.push_back(knee_rig);
    if (ids.ankle >= 0) {
      rig.pds.emplace_back(g.ankle, robot::kTorqueLimit, alpha);
      rig.center.push_back(a.xi);
      rig.tracked.push_back(cfg.scenario == ScenarioId::kTuneAnkle);
    }
  }
  return rig;
}

RunResult run_rig(const ScenarioConfig& cfg) {
  Rig rig = build_rig(cfg);
  robot::Robot& r = rig.robot;
  RunResult out;
  out.telemetry.joint_names = joint_names(r);
  const std::vector<int> order = r.joint_order();
  const long ticks = std::lround(cfg.duration / cfg.dt);
  std::vector<double> desired(order.size(), 0.0);
  std::vector<double> torques(static_cast<std::size_t>(r.world.joint_count()), 0.0);
  double sq = 0.0;
  long n = 0;
  double t = 0.0;
  try {
    for (long k = 0; k < ticks; ++k) {
      t = static_cast<double>(k) * cfg.dt;
      const double s = cfg.rig.amplitude * std::sin(2.0 * kPi * cfg.rig.frequency * t);
      for (std::size_t j = 0; j < order.size(); ++j) {
        desired[j] = rig.center[j] + (rig.tracked[j] ? s : 0.0);
        rig.pds[j].set_target(desired[j]);
        const physics::JointReadout jr = r.world.joint_readout(order[j]);
        torques[static_cast<std::size_t>(order[j])] = rig.pds[j].torque(jr.angle, jr.velocity);
        if (rig.tracked[j] && t >= cfg.rig.settle_time) {
          const double e = jr.angle - desired[j];
          sq += e * e;
          ++n;
        }
      }
      r.world.step(torques);
      out.telemetry.records.push_back(sample(r, t + cfg.dt, desired, 0));
    }
    t = static_cast<double>(ticks) * cfg.dt;
  } catch (const InstabilityError& e) {
    out.summary.instability = true;
    out.summary.events.push_back(std::string("instability: ") + e.what());
  }
  out.summary.duration = t;
  out.summary.rms_error = n > 0 ? std::sqrt(sq / static_cast<double>(n)) : 0.0;
  return out;
}

// --- walking -------------------------------------------------------------

struct Walk {
  robot::Robot robot;
  walker::WalkerConfig wcfg;
};

Walk build_walk(const ScenarioConfig& cfg, double x_init) {
  robot::BuildOptions opt;
  opt.world.dt = cfg.dt;
  walker::WalkerConfig w;
  w.gait = cfg.gait;
  w.gains = cfg.gains;
  w.theta_d = cfg.theta_d;
  w.dt = cfg.dt;
  w.filter_alpha = cfg.filter_alpha;
  w.exchange_window = cfg.exchange_window;
  robot::FeetMode feet = robot::FeetMode::kActuated;
  w.geom = kin::RobotGeometry::with_feet();
  if (cfg.scenario == ScenarioId::kWalkPointFeet) {
    w.geom = kin::RobotGeometry::point_feet();
    feet = robot::FeetMode::kNone;
  } else if (cfg.scenario == ScenarioId::kWalkNoAnkle) {
    feet = robot::FeetMode::kPassive;
    opt.lock_ankle = true;
    w.fixed_ankle = true;
    opt.locked_ankle_angle = w.fixed_ankle_angle;
  }
  robot::RobotPose pose = robot::standing_pose(w.geom, x_init);
  if (opt.lock_ankle) {
    for (kin::LegAngles& a : pose.legs) a.xi = opt.locked_ankle_angle;
  }
  Walk walk{robot::build_robot(w.geom, feet, pose, opt), w};
  if (opt.lock_ankle) drop_to_ground(walk.robot);
  return walk;
}

RunResult run_walk(const ScenarioConfig& cfg) {
  double x_init = cfg.x_init;
  if (cfg.seed) {
    std::mt19937 rng(*cfg.seed);
    std::uniform_real_distribution<double> u(-cfg.jitter, cfg.jitter);
    x_init += u(rng);
  }
  Walk walk = build_walk(cfg, x_init);
  robot::Robot& r = walk.robot;
  const walker::WalkerConfig& wc = walk.wcfg;
  walker::WalkerState state = walker::make_walker(wc, r);

  RunResult out;
  Summary& sm = out.summary;
  out.telemetry.joint_names = joint_names(r);
  const long ticks = std::lround(cfg.duration / cfg.dt);
  const double x0 = robot::com_state(r).x;
  const double h_c = wc.geom.h_c;

  double step_start_x = x0;
  double step_start_t = 0.0;
  bool step_settled = true;
  int streak = 0;
  double t = 0.0;
  double sq = 0.0;
  long n = 0;
  sm.min_hip_z_after5 = sm.min_com_z_after5 = 1e300;
  sm.max_hip_z_after5 = sm.max_com_z_after5 = -1e300;

  try {
    for (long k = 0; k < ticks; ++k) {
      const std::vector<double> torques = walker::walker_tick(state, wc, r);
      r.world.step(torques);
      t = static_cast<double>(k + 1) * cfg.dt;
      const int step_before = state.step_index;
      TelemetryRecord rec = sample(r, t, state.desired, step_before);
      for (const JointSample& j : rec.joints) {
        sq += (j.desired - j.actual) * (j.desired - j.actual);
        ++n;
      }
      const double hip_z = r.world.body(r.torso).pose.position.z;
      if (std::abs(hip_z - h_c) > 0.1 * h_c || std::abs(rec.torso_pitch - cfg.theta_d) > 0.25) {
        step_settled = false;
      }
      if (state.step_index >= 5) {
        sm.min_hip_z_after5 = std::min(sm.min_hip_z_after5, hip_z);
        sm.max_hip_z_after5 = std::max(sm.max_hip_z_after5, hip_z);
        sm.min_com_z_after5 = std::min(sm.min_com_z_after5, rec.com_z);
        sm.max_com_z_after5 = std::max(sm.max_com_z_after5, rec.com_z);
      }

      if (walker::walker_advance(state, wc, r)) {
        const double v = (rec.com_x - step_start_x) / (t - step_start_t);
        sm.max_velocity = std::max(sm.max_velocity, v);
        step_start_x = rec.com_x;
        step_start_t = t;
        streak = step_settled ? streak + 1 : 0;
        if (streak >= kSteadyStreak && sm.steady_step < 0) sm.steady_step = state.step_index;
        step_settled = true;
      }
      rec.step_index = state.step_index;
      out.telemetry.records.push_back(std::move(rec));

      if (walker::detect_fall(r)) {
        sm.fell = true;
        sm.fall_step = state.step_index;
        sm.events.push_back("fall at t=" + std::to_string(t) + " during step " +
                            std::to_string(state.step_index));
        break;
      }
      if (robot::com_state(r).x - x0 >= cfg.distance_target) {
        sm.reached_target = true;
        break;
      }
    }
  } catch (const InstabilityError& e) {
    sm.instability = true;
    sm.events.push_back(std::string("instability: ") + e.what());
  }

  sm.steps = state.step_index;
  sm.duration = t;
  sm.distance = robot::com_state(r).x - x0;
  sm.mean_velocity = t > 0.0 ? sm.distance / t : 0.0;
  sm.rms_error = n > 0 ? std::sqrt(sq / static_cast<double>(n)) : 0.0;
  sm.reach_errors = state.reach_errors;
  if (sm.min_hip_z_after5 > sm.max_hip_z_after5) {
    sm.min_hip_z_after5 = sm.max_hip_z_after5 = 0.0;
    sm.min_com_z_after5 = sm.max_com_z_after5 = 0.0;
  }
  sm.events.insert(sm.events.begin(), state.events.begin(), state.events.end());
  return out;
}

}  // namespace

std::string_view to_string(ScenarioId id) {
  for (const NamedId& n : kIds) {
    if (n.id == id) return n.name;
  }
  return "unknown";
}

ScenarioId scenario_from_string(std::string_view name) {
  for (const NamedId& n : kIds) {
    if (n.name == name) return n.id;
  }
  throw ParameterError("unknown scenario id '" + std::string(name) + "'");
}

bool is_rig(ScenarioId id) {
  return id == ScenarioId::kTuneHipAir || id == ScenarioId::kTuneHipGround ||
         id == ScenarioId::kTuneKnee || id == ScenarioId::kTuneAnkle;
}

void ScenarioConfig::validate() const {
  if (!(duration > 0.0) || !std::isfinite(duration)) throw ParameterError("duration must be > 0");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ParameterError("dt must be > 0");
  if (!std::isfinite(x_init)) throw ParameterError("x_init must be finite");
  if (!std::isfinite(theta_d)) throw ParameterError("theta_d must be finite");
  if (!(jitter >= 0.0)) throw ParameterError("jitter must be >= 0");
  if (!(distance_target > 0.0)) throw ParameterError("distance_target must be > 0");
  if (!(filter_alpha > 0.0 && filter_alpha <= 1.0)) {
    throw ParameterError("filter_alpha must lie in (0, 1]");
  }
  if (!(exchange_window > 0.0 && exchange_window <= 1.0)) {
    throw ParameterError("exchange_window must lie in (0, 1]");
  }
  if (!(rig.frequency > 0.0) || !(rig.amplitude >= 0.0) || !(rig.settle_time >= 0.0)) {
    throw ParameterError("rig parameters out of range");
  }
}

bool ScenarioConfig::operator==(const ScenarioConfig& o) const {
  return scenario == o.scenario && x_init == o.x_init && theta_d == o.theta_d &&
         same_gains(gains.hip, o.gains.hip) && same_gains(gains.knee, o.gains.knee) &&
         same_gains(gains.ankle, o.gains.ankle) && same_gains(gains.posture, o.gains.posture) &&
         gains.dual_hip == o.gains.dual_hip && same_gains(gains.hip_swing, o.gains.hip_swing) &&
         gait.t_step() == o.gait.t_step() && gait.t_m() == o.gait.t_m() &&
         gait.z_fm() == o.gait.z_fm() && gait.v_d() == o.gait.v_d() && duration == o.duration &&
         dt == o.dt && seed == o.seed && jitter == o.jitter && output == o.output &&
         distance_target == o.distance_target && filter_alpha == o.filter_alpha &&
         exchange_window == o.exchange_window && rig.amplitude == o.rig.amplitude &&
         rig.frequency == o.rig.frequency && rig.settle_time == o.rig.settle_time;
}

ScenarioConfig default_config(ScenarioId id) {
  ScenarioConfig c;
  c.scenario = id;
  switch (id) {
    case ScenarioId::kWalkFull:
      break;
    case ScenarioId::kWalkNoAnkle:
      c.theta_d = 0.2;
      c.gains.hip = {45.5, 0.85};
      break;
    case ScenarioId::kWalkPointFeet:
      c.theta_d = 0.3;
      c.gains.hip = {100.5, 0.85};
      break;
    case ScenarioId::kTuneHipAir:
      c.gains.hip = {100.5, 5.0};
      break;
    case ScenarioId::kTuneHipGround:
      c.gains.hip = {22.5, 0.85};
      break;
    case ScenarioId::kTuneKnee:
    case ScenarioId::kTuneAnkle:
      break;
  }
  if (is_rig(id)) c.duration = c.rig.settle_time + 10.0;
  return c;
}

RunResult run_scenario(const ScenarioConfig& config) {
  config.validate();
  return is_rig(config.scenario) ? run_rig(config) : run_walk(config);
}

int exit_code(const Summary& summary) {
  if (summary.instability) return 3;
  if (summary.fell) return 2;
  return 0;
}

}  // namespace simbiped::scenario
