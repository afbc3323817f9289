#pragma once

#include <numbers>

#include "simbiped/vec2.hpp"

// Planar leg kinematics.
//
// Frame: x forward, z up, body angles counterclockwise. With an upright torso:
//   gamma  hip angle; the thigh points along (sin gamma, -cos gamma), so
//          positive gamma swings the thigh forward.
//   theta  interior knee angle between thigh and shin; pi is a straight leg.
//          The knee bends forward: shin angle = gamma - (pi - theta).
//   xi     ankle angle, foot rotation relative to the shin; the foot is flat
//          (sole horizontal) when xi = (pi - theta) - gamma.

namespace simbiped::kin {

using simbiped::Vec2;

struct RobotGeometry {
  double l_thigh = 0.57;
  double l_shin = 0.57;
  double thigh_width = 0.09;
  double shin_width = 0.07;
  // Sole-to-ankle height; chosen so that h_c = 0.9 (thigh + shin + foot).
  double h_f = 1.11 / 0.9 - 1.14;
  double foot_length = 0.38;
  double torso_width = 0.29;
  double torso_height = 0.29;
  double torso_mass = 0.42;
  double thigh_mass = 0.05;
  double shin_mass = 0.04;
  double foot_mass = 0.038;
  double part_friction = 0.1;
  double h_c = 1.11;
  bool has_feet = true;

  double leg_length() const { return l_thigh; }
  double reach() const;  // 2L (1 - kReachMargin)

  // Six-joint robot with feet.
  static RobotGeometry with_feet();
  // Four-joint robot; the shin tip is the contact point, h_f = 0 and
  // h_c = 0.9 (thigh + shin).
  static RobotGeometry point_feet();

  // Throws ParameterError when an invariant is violated.
  void validate() const;
};

inline constexpr double kReachMargin = 0.02;

struct LegAngles {
  double gamma = 0.0;
  double theta = std::numbers::pi;
  double xi = 0.0;
};

struct JointLimits {
  double hip_min = -1.6;
  double hip_max = 1.6;
  double knee_min = 0.7;
  double knee_max = std::numbers::pi;  // knee cap
  double ankle_min = -1.3;
  double ankle_max = 1.3;
};

struct LegPoints {
  Vec2 hip;
  Vec2 knee;
  Vec2 ankle;
  Vec2 sole;  // point on the sole directly below the ankle
};

// Support leg with the sole flat on the ground; `x_t` is the CoM (hip) x
// relative to the support ankle. Throws ReachError / GeometryError.
LegAngles ik_support(double x_t, const RobotGeometry& geom);

// Swing leg reaching a sole point `foot` (world) from a hip at (x_t, h_c),
// with the foot kept flat. Throws ReachError / GeometryError.
LegAngles ik_swing(double x_t, Vec2 foot, const RobotGeometry& geom);

// Chain hip -> knee -> ankle -> sole. `torso_angle` is the torso body angle
// (counterclockwise) the hip angle is measured from.
LegPoints fk_leg(const LegAngles& angles, const RobotGeometry& geom, Vec2 hip,
                 double torso_angle = 0.0);

LegAngles clamp_joint_limits(const LegAngles& angles, const JointLimits& limits);

// Ankle expressions exactly as printed in the source derivation. They are not
// used by the solvers above: the support form equals (pi - theta) + gamma and
// the swing form drops the sign of the foot offset, so neither keeps the foot
// flat. Kept for comparison in tests.
namespace printed {
double support_ankle(double theta, double gamma);
// Throws GeometryError when the arcsin argument is outside [-1, 1].
double swing_ankle(double theta, double h_c, double z_ft, double h_ft, double l_v2);
}  // namespace printed

}  // namespace simbiped::kin
