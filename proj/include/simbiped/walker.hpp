#pragma once

#include <string>
#include <vector>

#include "simbiped/control.hpp"
#include "simbiped/gait.hpp"
#include "simbiped/kinematics.hpp"
#include "simbiped/robot.hpp"

namespace simbiped::walker {

struct WalkerGains {
  control::PdGains hip{48.5, 0.85};
  control::PdGains knee{200.0, 4.0};
  control::PdGains ankle{20.0, 1.2};
  control::PdGains posture{1.5, 0.1};
  // Separate swing-leg hip gains; `hip` then drives the support hip only.
  bool dual_hip = false;
  control::PdGains hip_swing{22.5, 0.85};
};

struct WalkerConfig {
  kin::RobotGeometry geom;
  gait::GaitParams gait;
  WalkerGains gains;
  double theta_d = 0.1;  // torso pitch reference, forward positive
  double dt = 1.0 / 60.0;
  double filter_alpha = control::kDefaultFilterAlpha;
  // Ankle targets held at this value instead of the flat-foot IK when set.
  bool fixed_ankle = false;
  double fixed_ankle_angle = 0.71;
  double exchange_window = 0.8;  // fraction of T_step after which contact exchanges
};

// Desired joint angles for both legs.
struct JointTargets {
  std::array<kin::LegAngles, 2> legs;
};

struct WalkerState {
  int support = 0;  // leg index bearing the robot
  int step_index = 0;
  double time_in_step = 0.0;
  gait::StepPlan plan;
  lipm::LipmState step_start;  // CoM relative to the support ankle
  double support_x = 0.0;      // support ankle x (world)
  control::PostureController posture{{}, 0.0, 1.0 / 60.0};
  std::vector<control::PdController> pds;  // Robot::joint_order()
  std::vector<double> desired;             // last targets, joint_order()
  int reach_errors = 0;
  std::vector<std::string> events;  // reach failures and early contacts
};

// Fresh walker with leg 0 as support, CoM `x_offset` ahead of both ankles
// at rest. The robot must already be built in the matching pose.
WalkerState make_walker(const WalkerConfig& cfg, const robot::Robot& robot);

// Computes targets for the current instant and returns one torque command
// per joint id. Reach failures are clamped and counted.
std::vector<double> walker_tick(WalkerState& state, const WalkerConfig& cfg,
                                const robot::Robot& robot);

// Advances the step clock after a physics step and performs the support
// exchange when due. Returns true on exchange.
bool walker_advance(WalkerState& state, const WalkerConfig& cfg, const robot::Robot& robot);

// Timer authority at T_step; swing contact exchanges early once
// t >= window * T_step.
bool detect_exchange(double time_in_step, bool swing_contact, const gait::GaitParams& gait,
                     double window = 0.8);

bool detect_fall(const robot::Robot& robot);
// Threshold rule behind detect_fall.
bool is_fallen(double com_z, double h_c, bool torso_contact);

// Current LIPM reference (CoM relative to the support ankle).
lipm::LipmState reference_state(const WalkerState& state, const WalkerConfig& cfg);

}  // namespace simbiped::walker
