#pragma once

#include <array>
#include <vector>

#include "simbiped/kinematics.hpp"
#include "simbiped/physics.hpp"

namespace simbiped::robot {

enum class FeetMode { kNone, kPassive, kActuated };

struct LegIds {
  int thigh = -1;
  int shin = -1;
  int foot = -1;  // -1 without feet
  int hip = -1;
  int knee = -1;
  int ankle = -1;  // -1 without feet
};

struct Robot {
  physics::World world;
  kin::RobotGeometry geom;
  FeetMode feet = FeetMode::kActuated;
  int torso = -1;
  std::array<LegIds, 2> legs;

  // Joint ids in telemetry order: hip, knee[, ankle] for leg 0 then leg 1.
  std::vector<int> joint_order() const;
  double total_mass() const;
};

struct RobotPose {
  Vec2 hip{0.0, 1.11};
  double torso_angle = 0.0;  // counterclockwise
  std::array<kin::LegAngles, 2> legs;
};

struct BuildOptions {
  physics::WorldConfig world;
  bool static_torso = false;
  bool static_thighs = false;
  bool static_shins = false;
  // Ankle locked at this angle (joint limit with lower = upper) when set.
  bool lock_ankle = false;
  double locked_ankle_angle = 0.71;
  bool enable_joint_limits = true;
  kin::JointLimits limits;
};

inline constexpr double kHipSpeedLimit = 4.0;
inline constexpr double kKneeSpeedLimit = 6.0;
inline constexpr double kAnkleSpeedLimit = 4.0;
inline constexpr double kTorqueLimit = 100.0;

// Standing pose: hip at height geom.h_c, `x_offset` ahead of both ankles,
// feet flat on the ground.
RobotPose standing_pose(const kin::RobotGeometry& geom, double x_offset);

// FeetMode::kNone requires geom.has_feet == false and vice versa.
// Throws ParameterError on invalid geometry or a mismatched feet mode.
Robot build_robot(const kin::RobotGeometry& geom, FeetMode feet, const RobotPose& pose,
                  const BuildOptions& options = {});

struct ComState {
  double x = 0.0;
  double z = 0.0;
  double x_dot = 0.0;
  double z_dot = 0.0;
};

ComState com_state(const Robot& robot);

struct ContactState {
  std::array<bool, 2> foot{false, false};
  bool torso = false;
  std::vector<physics::ContactPoint> points;
  double total_normal_impulse = 0.0;
};

// A leg's ground-contact flag covers its foot (or shin tip without feet).
ContactState contacts(const Robot& robot);

}  // namespace simbiped::robot
