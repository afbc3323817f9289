#include "simbiped/robot.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "simbiped/errors.hpp"

namespace simbiped::robot {

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 down_dir(double angle) { return {std::sin(angle), -std::cos(angle)}; }

}  // namespace

std::vector<int> Robot::joint_order() const {
  std::vector<int> ids;
  for (const LegIds& leg : legs) {
    ids.push_back(leg.hip);
    ids.push_back(leg.knee);
    if (leg.ankle >= 0) ids.push_back(leg.ankle);
  }
  return ids;
}

double Robot::total_mass() const {
  double m = 0.0;
  for (int i = 0; i < world.body_count(); ++i) m += world.body(i).mass;
  return m;
}

RobotPose standing_pose(const kin::RobotGeometry& geom, double x_offset) {
  RobotPose pose;
  pose.hip = {x_offset, geom.h_c};
  const kin::LegAngles a = kin::ik_support(x_offset, geom);
  pose.legs = {a, a};
  return pose;
}

Robot build_robot(const kin::RobotGeometry& geom, FeetMode feet, const RobotPose& pose,
                  const BuildOptions& options) {
  geom.validate();
  if ((feet == FeetMode::kNone) == geom.has_feet) {
    throw ParameterError("feet mode does not match the robot geometry");
  }

  Robot r{physics::World(options.world), geom, feet, -1, {}};
  physics::World& w = r.world;
  const kin::JointLimits& lim = options.limits;

  physics::BodyDef torso;
  torso.name = "torso";
  torso.pose = {pose.hip, pose.torso_angle};
  torso.mass = geom.torso_mass;
  torso.half_extents = {geom.torso_width / 2.0, geom.torso_height / 2.0};
  torso.friction = geom.part_friction;
  torso.is_static = options.static_torso;
  r.torso = w.add_body(torso);

  for (int side = 0; side < 2; ++side) {
    const std::string tag = side == 0 ? "left" : "right";
    const kin::LegAngles& a = pose.legs[static_cast<std::size_t>(side)];
    LegIds& ids = r.legs[static_cast<std::size_t>(side)];

    const double thigh_angle = pose.torso_angle + a.gamma;
    const double shin_angle = thigh_angle - (kPi - a.theta);
    const double foot_angle = shin_angle + a.xi;
    const Vec2 knee = pose.hip + geom.l_thigh * down_dir(thigh_angle);
    const Vec2 ankle = knee + geom.l_shin * down_dir(shin_angle);

    physics::BodyDef thigh;
    thigh.name = tag + "_thigh";
    thigh.pose = {pose.hip + 0.5 * geom.l_thigh * down_dir(thigh_angle), thigh_angle};
    thigh.mass = geom.thigh_mass;
    thigh.half_extents = {geom.thigh_width / 2.0, geom.l_thigh / 2.0};
    thigh.friction = geom.part_friction;
    thigh.is_static = options.static_thighs;
    ids.thigh = w.add_body(thigh);

    physics::BodyDef shin;
    shin.name = tag + "_shin";
    shin.pose = {knee + 0.5 * geom.l_shin * down_dir(shin_angle), shin_angle};
    shin.mass = geom.shin_mass;
    shin.half_extents = {geom.shin_width / 2.0, geom.l_shin / 2.0};
    shin.friction = geom.part_friction;
    shin.is_static = options.static_shins;
    ids.shin = w.add_body(shin);

    physics::JointDef hip;
    hip.name = tag + "_hip";
    hip.parent = r.torso;
    hip.child = ids.thigh;
    hip.anchor_parent = {0.0, 0.0};
    hip.anchor_child = {0.0, geom.l_thigh / 2.0};
    hip.torque_limit = kTorqueLimit;
    hip.speed_limit = kHipSpeedLimit;
    hip.limit_enabled = options.enable_joint_limits;
    hip.lower = lim.hip_min;
    hip.upper = lim.hip_max;
    ids.hip = w.add_joint(hip);

    physics::JointDef kn;
    kn.name = tag + "_knee";
    kn.parent = ids.thigh;
    kn.child = ids.shin;
    kn.anchor_parent = {0.0, -geom.l_thigh / 2.0};
    kn.anchor_child = {0.0, geom.l_shin / 2.0};
    kn.angle_offset = kPi;
    kn.torque_limit = kTorqueLimit;
    kn.speed_limit = kKneeSpeedLimit;
    kn.limit_enabled = options.enable_joint_limits;
    kn.lower = lim.knee_min;
    kn.upper = lim.knee_max;
    ids.knee = w.add_joint(kn);

    if (feet == FeetMode::kNone) continue;

    physics::BodyDef foot;
    foot.name = tag + "_foot";
    foot.pose = {ankle + 0.5 * geom.h_f * down_dir(foot_angle), foot_angle};
    foot.mass = geom.foot_mass;
    foot.half_extents = {geom.foot_length / 2.0, geom.h_f / 2.0};
    foot.friction = geom.part_friction;
    ids.foot = w.add_body(foot);

    physics::JointDef an;
    an.name = tag + "_ankle";
    an.parent = ids.shin;
    an.child = ids.foot;
    an.anchor_parent = {0.0, -geom.l_shin / 2.0};
    an.anchor_child = {0.0, geom.h_f / 2.0};
    an.torque_limit = feet == FeetMode::kActuated ? kTorqueLimit : 0.0;
    an.speed_limit = kAnkleSpeedLimit;
    if (options.lock_ankle) {
      an.limit_enabled = true;
      an.lower = options.locked_ankle_angle;
      an.upper = options.locked_ankle_angle;
    } else {
      an.limit_enabled = options.enable_joint_limits;
      an.lower = lim.ankle_min;
      an.upper = lim.ankle_max;
    }
    ids.ankle = w.add_joint(an);
  }
  return r;
}

ComState com_state(const Robot& robot) {
  ComState c;
  double m = 0.0;
  const physics::World& w = robot.world;
  for (int i = 0; i < w.body_count(); ++i) {
    const physics::Body& b = w.body(i);
    m += b.mass;
    c.x += b.mass * b.pose.position.x;
    c.z += b.mass * b.pose.position.z;
    c.x_dot += b.mass * b.velocity.linear.x;
    c.z_dot += b.mass * b.velocity.linear.z;
  }
  if (m > 0.0) {
    c.x /= m;
    c.z /= m;
    c.x_dot /= m;
    c.z_dot /= m;
  }
  return c;
}

ContactState contacts(const Robot& robot) {
  ContactState s;
  s.points = robot.world.contacts();
  for (const physics::ContactPoint& cp : s.points) {
    s.total_normal_impulse += cp.normal_impulse;
    // Speculative points that carried no load are not touching.
    if (cp.normal_impulse <= 0.0) continue;
    if (cp.body == robot.torso) s.torso = true;
    for (std::size_t side = 0; side < 2; ++side) {
      const LegIds& leg = robot.legs[side];
      const int tip = leg.foot >= 0 ? leg.foot : leg.shin;
      if (cp.body == tip) s.foot[side] = true;
    }
  }
  return s;
}

}  // namespace simbiped::robot
