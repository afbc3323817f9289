#include "simbiped/walker.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simbiped/errors.hpp"

namespace simbiped::walker {

namespace {

lipm::LipmParams lipm_params(const WalkerConfig& cfg) { return lipm::LipmParams(cfg.geom.h_c); }

double ankle_x(const robot::Robot& robot, int leg) {
  const robot::LegIds& ids = robot.legs[static_cast<std::size_t>(leg)];
  if (ids.foot >= 0) {
    const physics::Body& f = robot.world.body(ids.foot);
    return f.world_point({0.0, f.half_extents.z}).x;
  }
  const physics::Body& s = robot.world.body(ids.shin);
  return s.world_point({0.0, -s.half_extents.z}).x;
}

// Pulls an out-of-reach target back onto the workspace boundary.
kin::LegAngles reach_clamped(double dx, double sole_z, const kin::RobotGeometry& geom,
                             int& reach_errors) {
  const double depth = geom.h_c - geom.h_f - sole_z;
  const double reach = geom.reach() * (1.0 - 1e-9);
  double lv = std::hypot(dx, depth);
  if (lv > reach) {
    ++reach_errors;
    dx *= reach / lv;
    sole_z = geom.h_c - geom.h_f - depth * reach / lv;
  }
  return kin::ik_swing(0.0, {dx, sole_z}, geom);
}

gait::StepPlan plan_next(WalkerState& s, const WalkerConfig& cfg, const robot::Robot& robot) {
  const lipm::LipmParams params = lipm_params(cfg);
  gait::StepContext ctx;
  ctx.support_x = s.support_x;
  ctx.swing_x = ankle_x(robot, 1 - s.support);
  ctx.ground_z = 0.0;
  ctx.hip_height = cfg.geom.h_c - cfg.geom.h_f;
  ctx.reach = cfg.geom.reach();
  ctx.step_index = s.step_index;
  try {
    return gait::plan_step(s.step_start, params, cfg.gait, ctx);
  } catch (const ReachError& e) {
    ++s.reach_errors;
    s.events.push_back("step " + std::to_string(s.step_index) + ": " + e.what());
  }
  gait::StepPlan plan;
  plan.step_index = ctx.step_index;
  plan.xdot_s_next = gait::propagate_step_velocity(s.step_start, params, cfg.gait);
  plan.xdot_e_next = cfg.gait.v_d();
  const double p_max = std::sqrt(ctx.reach * ctx.reach - ctx.hip_height * ctx.hip_height);
  const double p_want =
      gait::foot_placement(plan.xdot_s_next, plan.xdot_e_next, params, cfg.gait);
  plan.p_n = std::clamp(p_want, -p_max, p_max) * (1.0 - 1e-9);
  plan.x_fs = ctx.swing_x;
  plan.x_fe = ctx.support_x + lipm::evolve(s.step_start, params, cfg.gait.t_step()).x + plan.p_n;
  plan.z_fs = ctx.ground_z;
  plan.z_fe = ctx.ground_z;
  plan.z_fm = cfg.gait.z_fm() + ctx.ground_z;
  return plan;
}

}  // namespace

bool detect_exchange(double time_in_step, bool swing_contact, const gait::GaitParams& gait,
                     double window) {
  const double eps = 1e-9;
  if (time_in_step >= gait.t_step() - eps) return true;
  return swing_contact && time_in_step >= window * gait.t_step() - eps;
}

bool is_fallen(double com_z, double h_c, bool torso_contact) {
  return torso_contact || com_z < 0.5 * h_c;
}

bool detect_fall(const robot::Robot& robot) {
  const robot::ContactState c = robot::contacts(robot);
  return is_fallen(robot::com_state(robot).z, robot.geom.h_c, c.torso);
}

lipm::LipmState reference_state(const WalkerState& state, const WalkerConfig& cfg) {
  const double t = std::clamp(state.time_in_step, 0.0, cfg.gait.t_step());
  return lipm::evolve(state.step_start, lipm_params(cfg), t);
}

WalkerState make_walker(const WalkerConfig& cfg, const robot::Robot& robot) {
  WalkerState s;
  s.posture = control::PostureController(cfg.gains.posture, cfg.theta_d, cfg.dt);
  for (const robot::LegIds& leg : robot.legs) {
    s.pds.emplace_back(cfg.gains.hip, robot::kTorqueLimit, cfg.filter_alpha);
    s.pds.emplace_back(cfg.gains.knee, robot::kTorqueLimit, cfg.filter_alpha);
    if (leg.ankle >= 0) s.pds.emplace_back(cfg.gains.ankle, robot::kTorqueLimit, cfg.filter_alpha);
  }
  s.desired.assign(s.pds.size(), 0.0);
  s.support_x = ankle_x(robot, 0);
  const double hip_x = robot.world.body(robot.torso).pose.position.x;
  s.step_start = {hip_x - s.support_x, 0.0};
  s.plan = plan_next(s, cfg, robot);
  return s;
}

std::vector<double> walker_tick(WalkerState& s, const WalkerConfig& cfg,
                                const robot::Robot& robot) {
  const kin::RobotGeometry& g = cfg.geom;
  const double t = std::clamp(s.time_in_step, 0.0, cfg.gait.t_step());
  const double x_t = reference_state(s, cfg).x;

  JointTargets targets;
  kin::LegAngles& sup = targets.legs[static_cast<std::size_t>(s.support)];
  kin::LegAngles& sw = targets.legs[static_cast<std::size_t>(1 - s.support)];
  sup = reach_clamped(-x_t, 0.0, g, s.reach_errors);
  const double fx = gait::foot_x(t, s.plan, cfg.gait) - s.support_x;
  const double fz = gait::foot_z(t, s.plan, cfg.gait);
  sw = reach_clamped(fx - x_t, fz, g, s.reach_errors);

  const physics::Body& torso = robot.world.body(robot.torso);
  const double phi = -torso.pose.angle;
  const double phi_dot = -torso.velocity.angular;
  sup.gamma = s.posture.adjust(phi, phi_dot, sup.gamma);

  if (cfg.fixed_ankle) {
    sup.xi = cfg.fixed_ankle_angle;
    sw.xi = cfg.fixed_ankle_angle;
  }

  const kin::JointLimits limits;
  std::vector<double> torques(static_cast<std::size_t>(robot.world.joint_count()), 0.0);
  std::size_t k = 0;
  for (int leg = 0; leg < 2; ++leg) {
    const robot::LegIds& ids = robot.legs[static_cast<std::size_t>(leg)];
    const kin::LegAngles a =
        kin::clamp_joint_limits(targets.legs[static_cast<std::size_t>(leg)], limits);
    const int joints[3] = {ids.hip, ids.knee, ids.ankle};
    const double values[3] = {a.gamma, a.theta, a.xi};
    for (int j = 0; j < 3; ++j) {
      if (joints[j] < 0) continue;
      control::PdController& pd = s.pds[k];
      if (j == 0 && cfg.gains.dual_hip) {
        pd.set_gains(leg == s.support ? cfg.gains.hip : cfg.gains.hip_swing);
      }
      pd.set_target(values[j]);
      s.desired[k] = values[j];
      const physics::JointReadout r = robot.world.joint_readout(joints[j]);
      torques[static_cast<std::size_t>(joints[j])] = pd.torque(r.angle, r.velocity);
      ++k;
    }
  }
  return torques;
}

bool walker_advance(WalkerState& s, const WalkerConfig& cfg, const robot::Robot& robot) {
  s.time_in_step += cfg.dt;
  const robot::ContactState c = robot::contacts(robot);
  const bool swing_contact = c.foot[static_cast<std::size_t>(1 - s.support)];
  if (!detect_exchange(s.time_in_step, swing_contact, cfg.gait, cfg.exchange_window)) {
    if (swing_contact && s.time_in_step > 0.25 * cfg.gait.t_step()) {
      const std::string tag = "step " + std::to_string(s.step_index) + ": early swing contact";
      if (s.events.empty() || s.events.back().rfind(tag, 0) != 0) {
        s.events.push_back(tag + " at t=" + std::to_string(s.time_in_step));
      }
    }
    return false;
  }
  // The model state carries over ideally: the CoM starts the new step at
  // -p relative to the new support foot with the planned velocity.
  s.step_start = {-s.plan.p_n, s.plan.xdot_s_next};
  s.support = 1 - s.support;
  s.support_x = ankle_x(robot, s.support);
  s.time_in_step = 0.0;
  ++s.step_index;
  s.posture.reset_on_exchange();
  s.plan = plan_next(s, cfg, robot);
  return true;
}

}  // namespace simbiped::walker
