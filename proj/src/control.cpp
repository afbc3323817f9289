#include "simbiped/control.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <tuple>

#include "simbiped/errors.hpp"

namespace simbiped::control {

namespace {

void check_gains(const PdGains& g) {
  if (!(g.kp >= 0.0) || !(g.kd >= 0.0)) {
    throw ParameterError("PD gains must be >= 0");
  }
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) {
    throw ParameterError("filter alpha must be in (0, 1]");
  }
}

}  // namespace

std::pair<LowPassState, double> filter_step(LowPassState state, double sample) {
  state.y_prev = (1.0 - state.alpha) * state.y_prev + state.alpha * sample;
  return {state, state.y_prev};
}

PdController::PdController(PdGains gains, double torque_limit, double filter_alpha)
    : gains_(gains), filter_{filter_alpha, 0.0}, torque_limit_(torque_limit) {
  check_gains(gains);
  check_alpha(filter_alpha);
  if (!(torque_limit > 0.0)) throw ParameterError("torque_limit must be > 0");
}

void PdController::set_gains(PdGains gains) {
  check_gains(gains);
  gains_ = gains;
}

double PdController::torque(double q, double q_dot) {
  double filtered = 0.0;
  std::tie(filter_, filtered) = filter_step(filter_, q_dot);
  const double u = gains_.kp * (target_ - q) - gains_.kd * filtered;
  return std::clamp(u, -torque_limit_, torque_limit_);
}

PostureController::PostureController(PdGains gains, double phi_ref, double dt)
    : gains_(gains), phi_ref_(phi_ref), dt_(dt) {
  check_gains(gains);
  if (!(dt > 0.0)) throw ParameterError("posture dt must be > 0");
}

double PostureController::adjust(double phi, double phi_dot, double q_hip_desired) {
  const double omega_d = gains_.kp * (phi_ref_ - phi) - gains_.kd * phi_dot;
  accumulator_ += omega_d * dt_;
  return q_hip_desired + accumulator_;
}

ZnRule zn_rule_from_string(std::string_view name) {
  if (name == "classic") return ZnRule::kClassic;
  if (name == "piae") return ZnRule::kPessenIntegral;
  if (name == "some_overshoot") return ZnRule::kSomeOvershoot;
  if (name == "no_overshoot") return ZnRule::kNoOvershoot;
  throw ParameterError("unknown Ziegler-Nichols control type '" +
                       std::string(name) + "'");
}

ZnGains zn_gains(double k_u, double t_u, ZnRule rule) {
  if (!(k_u > 0.0) || !(t_u > 0.0)) {
    throw ParameterError("ultimate gain and period must be > 0");
  }
  switch (rule) {
    case ZnRule::kClassic:
      return {0.6 * k_u, t_u / 2.0, t_u / 8.0};
    case ZnRule::kPessenIntegral:
      return {0.7 * k_u, t_u / 2.5, 3.0 * t_u / 20.0};
    case ZnRule::kSomeOvershoot:
      return {0.33 * k_u, t_u / 2.0, t_u / 3.0};
    case ZnRule::kNoOvershoot:
      return {0.2 * k_u, t_u / 2.0, t_u / 3.0};
  }
  throw ParameterError("unknown Ziegler-Nichols control type");
}

}  // namespace simbiped::control
