#include "simbiped/kinematics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simbiped/errors.hpp"

namespace simbiped::kin {

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 down_dir(double angle) { return {std::sin(angle), -std::cos(angle)}; }

// Isosceles two-link solve: knee interior angle for a virtual leg of length
// `lv`, and the hip angle for a target at horizontal offset `dx` (forward
// positive) and depth `depth` below the hip.
LegAngles solve_leg(double dx, double depth, const RobotGeometry& geom) {
  if (!(depth > 0.0)) {
    throw GeometryError("target must lie below the hip, depth " +
                        std::to_string(depth));
  }
  const double l = geom.leg_length();
  const double lv = std::hypot(dx, depth);
  if (lv > geom.reach()) {
    throw ReachError("virtual leg " + std::to_string(lv) + " m exceeds reach " +
                     std::to_string(geom.reach()) + " m");
  }
  LegAngles a;
  a.theta = std::acos((2.0 * l * l - lv * lv) / (2.0 * l * l));
  a.gamma = 0.5 * (kPi - a.theta) + std::atan(dx / depth);
  a.xi = (kPi - a.theta) - a.gamma;
  return a;
}

}  // namespace

double RobotGeometry::reach() const {
  return 2.0 * leg_length() * (1.0 - kReachMargin);
}

RobotGeometry RobotGeometry::with_feet() { return RobotGeometry{}; }

RobotGeometry RobotGeometry::point_feet() {
  RobotGeometry g;
  g.has_feet = false;
  g.h_f = 0.0;
  g.foot_mass = 0.0;
  g.h_c = 0.9 * (g.l_thigh + g.l_shin);
  return g;
}

void RobotGeometry::validate() const {
  const auto positive = [](double v, const char* name) {
    if (!(v > 0.0)) throw ParameterError(std::string(name) + " must be > 0");
  };
  positive(l_thigh, "l_thigh");
  positive(l_shin, "l_shin");
  positive(thigh_width, "thigh_width");
  positive(shin_width, "shin_width");
  positive(torso_width, "torso_width");
  positive(torso_height, "torso_height");
  positive(torso_mass, "torso_mass");
  positive(thigh_mass, "thigh_mass");
  positive(shin_mass, "shin_mass");
  positive(h_c, "h_c");
  if (std::abs(l_thigh - l_shin) > 1e-12) {
    throw ParameterError("thigh and shin must have equal length");
  }
  if (has_feet) {
    positive(h_f, "h_f");
    positive(foot_length, "foot_length");
    positive(foot_mass, "foot_mass");
  } else if (h_f < 0.0) {
    throw ParameterError("h_f must be >= 0");
  }
  if (!(h_c < l_thigh + l_shin + h_f)) {
    throw ParameterError("h_c must be below the fully extended leg length");
  }
  if (!(h_c > h_f)) throw ParameterError("h_c must exceed h_f");
}

LegAngles ik_support(double x_t, const RobotGeometry& geom) {
  // The support ankle sits -x_t behind the hip.
  return solve_leg(-x_t, geom.h_c - geom.h_f, geom);
}

LegAngles ik_swing(double x_t, Vec2 foot, const RobotGeometry& geom) {
  return solve_leg(foot.x - x_t, geom.h_c - foot.z - geom.h_f, geom);
}

LegPoints fk_leg(const LegAngles& angles, const RobotGeometry& geom, Vec2 hip,
                 double torso_angle) {
  const double thigh = torso_angle + angles.gamma;
  const double shin = thigh - (kPi - angles.theta);
  const double foot = shin + angles.xi;
  LegPoints p;
  p.hip = hip;
  const Vec2 t = down_dir(thigh);
  p.knee = {hip.x + geom.l_thigh * t.x, hip.z + geom.l_thigh * t.z};
  const Vec2 s = down_dir(shin);
  p.ankle = {p.knee.x + geom.l_shin * s.x, p.knee.z + geom.l_shin * s.z};
  const Vec2 f = down_dir(foot);
  p.sole = {p.ankle.x + geom.h_f * f.x, p.ankle.z + geom.h_f * f.z};
  return p;
}

LegAngles clamp_joint_limits(const LegAngles& angles, const JointLimits& limits) {
  return {std::clamp(angles.gamma, limits.hip_min, limits.hip_max),
          std::clamp(angles.theta, limits.knee_min, limits.knee_max),
          std::clamp(angles.xi, limits.ankle_min, limits.ankle_max)};
}

namespace printed {

double support_ankle(double theta, double gamma) {
  return kPi / 2.0 - (kPi / 2.0 - (kPi - theta) - gamma);
}

double swing_ankle(double theta, double h_c, double z_ft, double h_ft, double l_v2) {
  const double arg = (h_c - z_ft - h_ft) / l_v2;
  if (!(arg >= -1.0 && arg <= 1.0)) {
    throw GeometryError("arcsin argument " + std::to_string(arg) +
                        " outside [-1, 1]");
  }
  return kPi / 2.0 -
         (kPi - ((kPi - theta) / 2.0 + (kPi / 2.0 - std::asin(arg))));
}

}  // namespace printed

}  // namespace simbiped::kin
