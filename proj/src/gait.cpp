#include "simbiped/gait.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "simbiped/errors.hpp"

namespace simbiped::gait {

namespace {

// Cubic blend 3s^2 - 2s^3 and its derivative with respect to s.
double blend(double s) { return s * s * (3.0 - 2.0 * s); }
double blend_rate(double s) { return 6.0 * s * (1.0 - s); }

void check_phase(double t, const GaitParams& gait) {
  if (!(t >= 0.0 && t <= gait.t_step())) {
    throw RangeError("step time " + std::to_string(t) + " outside [0, " +
                     std::to_string(gait.t_step()) + "]");
  }
}

}  // namespace

GaitParams::GaitParams(double t_step, double t_m, double z_fm, double v_d)
    : t_step_(t_step), t_m_(t_m), z_fm_(z_fm), v_d_(v_d) {
  if (!(t_step > 0.0)) throw ParameterError("t_step must be > 0");
  if (!(t_m > 0.0 && t_m < t_step)) {
    throw ParameterError("t_m must satisfy 0 < t_m < t_step");
  }
  if (!(z_fm > 0.0)) throw ParameterError("z_fm must be > 0");
  if (!std::isfinite(v_d)) throw ParameterError("v_d must be finite");
}

double GaitParams::tau_s(const lipm::LipmParams& params) const {
  return t_step_ / params.time_constant();
}

double propagate_step_velocity(const lipm::LipmState& state,
                               const lipm::LipmParams& params,
                               const GaitParams& gait) {
  const double tc = params.time_constant();
  const double tau = gait.tau_s(params);
  return state.x / tc * std::sinh(tau) + state.x_dot * std::cosh(tau);
}

double foot_placement(double xdot_s_next, double xdot_e_target,
                      const lipm::LipmParams& params, const GaitParams& gait) {
  const double tau = gait.tau_s(params);
  if (!(tau > 0.0)) throw ParameterError("normalised step time must be > 0");
  const double tc = params.time_constant();
  return tc * xdot_s_next / std::tanh(tau) - tc * xdot_e_target / std::sinh(tau);
}

StepPlan plan_step(const lipm::LipmState& state, const lipm::LipmParams& params,
                   const GaitParams& gait, const StepContext& ctx) {
  StepPlan plan;
  plan.step_index = ctx.step_index;
  plan.xdot_s_next = propagate_step_velocity(state, params, gait);
  plan.xdot_e_next = gait.v_d();
  plan.p_n = foot_placement(plan.xdot_s_next, plan.xdot_e_next, params, gait);

  const double reach = std::hypot(plan.p_n, ctx.hip_height);
  if (reach > ctx.reach) {
    throw ReachError("placement " + std::to_string(plan.p_n) +
                     " m needs leg length " + std::to_string(reach) +
                     " m, workspace is " + std::to_string(ctx.reach) + " m");
  }

  const double com_end = lipm::evolve(state, params, gait.t_step()).x;
  plan.x_fs = ctx.swing_x;
  plan.x_fe = ctx.support_x + com_end + plan.p_n;
  plan.z_fs = ctx.ground_z;
  plan.z_fe = ctx.ground_z;
  plan.z_fm = std::max({gait.z_fm() + ctx.ground_z, plan.z_fs, plan.z_fe});
  return plan;
}

double foot_x(double t, const StepPlan& plan, const GaitParams& gait) {
  check_phase(t, gait);
  return plan.x_fs + (plan.x_fe - plan.x_fs) * blend(t / gait.t_step());
}

double foot_z(double t, const StepPlan& plan, const GaitParams& gait) {
  check_phase(t, gait);
  const double tm = gait.t_m();
  if (t <= tm) return plan.z_fs + (plan.z_fm - plan.z_fs) * blend(t / tm);
  const double s = (t - tm) / (gait.t_step() - tm);
  return plan.z_fm + (plan.z_fe - plan.z_fm) * blend(s);
}

FootVelocity foot_velocity(double t, const StepPlan& plan, const GaitParams& gait) {
  check_phase(t, gait);
  const double ts = gait.t_step();
  const double tm = gait.t_m();
  FootVelocity v;
  v.x_dot = (plan.x_fe - plan.x_fs) * blend_rate(t / ts) / ts;
  if (t <= tm) {
    v.z_dot = (plan.z_fm - plan.z_fs) * blend_rate(t / tm) / tm;
  } else {
    const double span = ts - tm;
    v.z_dot = (plan.z_fe - plan.z_fm) * blend_rate((t - tm) / span) / span;
  }
  return v;
}

}  // namespace simbiped::gait
