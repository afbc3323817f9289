#pragma once

#include "simbiped/lipm.hpp"

namespace simbiped::gait {

// Timing and target speed of a stride.
class GaitParams {
 public:
  // Defaults: T_step = 0.4 s, T_m = T_step / 2, z_fm = h_c / 5, v_d = 0.6.
  GaitParams(double t_step = 0.4, double t_m = 0.2, double z_fm = 0.222,
             double v_d = 0.6);

  double t_step() const { return t_step_; }
  double t_m() const { return t_m_; }
  double z_fm() const { return z_fm_; }
  double v_d() const { return v_d_; }
  // Normalised step time T_step / T_c.
  double tau_s(const lipm::LipmParams& params) const;

  GaitParams with_v_d(double v_d) const { return {t_step_, t_m_, z_fm_, v_d}; }

 private:
  double t_step_;
  double t_m_;
  double z_fm_;
  double v_d_;
};

struct StepPlan {
  double x_fs = 0.0;  // swing foot start x (world)
  double x_fe = 0.0;  // swing foot end x (world)
  double z_fs = 0.0;
  double z_fe = 0.0;
  double z_fm = 0.0;  // apex height
  double p_n = 0.0;   // placement relative to the CoM at touchdown
  double xdot_s_next = 0.0;
  double xdot_e_next = 0.0;
  int step_index = 0;
};

// Where the feet are when a step is planned.
struct StepContext {
  double support_x = 0.0;  // support ankle x (world); the LIPM origin
  double swing_x = 0.0;    // swing foot x (world) at the start of the step
  double ground_z = 0.0;
  double hip_height = 1.0;  // hip above the ankle at touchdown
  double reach = 1.0;       // maximum hip-to-ankle distance
  int step_index = 0;
};

struct FootVelocity {
  double x_dot = 0.0;
  double z_dot = 0.0;
};

// End-of-step CoM velocity, which is also the next step's start velocity.
double propagate_step_velocity(const lipm::LipmState& state,
                               const lipm::LipmParams& params,
                               const GaitParams& gait);

// Placement p relative to the CoM so that a step starting at x = -p with
// `xdot_s_next` ends with `xdot_e_target`.
double foot_placement(double xdot_s_next, double xdot_e_target,
                      const lipm::LipmParams& params, const GaitParams& gait);

// Throws ReachError when the touchdown target is beyond `ctx.reach`.
StepPlan plan_step(const lipm::LipmState& state, const lipm::LipmParams& params,
                   const GaitParams& gait, const StepContext& ctx);

// Swing-foot trajectory; t is the time since the support exchange.
// Throws RangeError outside [0, T_step].
double foot_x(double t, const StepPlan& plan, const GaitParams& gait);
double foot_z(double t, const StepPlan& plan, const GaitParams& gait);
FootVelocity foot_velocity(double t, const StepPlan& plan, const GaitParams& gait);

}  // namespace simbiped::gait
