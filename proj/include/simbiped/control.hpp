#pragma once

#include <string_view>
#include <utility>

namespace simbiped::control {

struct PdGains {
  double kp = 0.0;
  double kd = 0.0;
};

// First-order smoother y <- (1 - alpha) y + alpha * sample, run once per
// control tick. The cutoff therefore depends on the tick rate.
struct LowPassState {
  double alpha = 0.075;
  double y_prev = 0.0;
};

inline constexpr double kDefaultFilterAlpha = 0.075;

// Returns the updated state and the filtered value.
std::pair<LowPassState, double> filter_step(LowPassState state, double sample);

// Joint PD: u = kp (q_d - q) - kd * lowpass(q_dot), clamped to +-torque_limit.
class PdController {
 public:
  PdController(PdGains gains, double torque_limit,
               double filter_alpha = kDefaultFilterAlpha);

  // Advances the velocity filter by one tick.
  double torque(double q, double q_dot);

  void set_target(double q_d) { target_ = q_d; }
  double target() const { return target_; }
  const PdGains& gains() const { return gains_; }
  void set_gains(PdGains gains);
  double torque_limit() const { return torque_limit_; }
  const LowPassState& filter() const { return filter_; }

 private:
  PdGains gains_;
  LowPassState filter_;
  double torque_limit_;
  double target_ = 0.0;
};

// Hip-target adjustment that keeps the torso at `phi_ref`:
//   omega_d = kp (phi_ref - phi) - kd phi_dot;  acc += omega_d dt
// The accumulator belongs to the current support leg.
class PostureController {
 public:
  PostureController(PdGains gains, double phi_ref, double dt);

  // Returns q_hip_desired + accumulated adjustment.
  double adjust(double phi, double phi_dot, double q_hip_desired);
  void reset_on_exchange() { accumulator_ = 0.0; }

  double accumulator() const { return accumulator_; }
  const PdGains& gains() const { return gains_; }
  double phi_ref() const { return phi_ref_; }
  double dt() const { return dt_; }

 private:
  PdGains gains_;
  double phi_ref_;
  double dt_;
  double accumulator_ = 0.0;
};

enum class ZnRule { kClassic, kPessenIntegral, kSomeOvershoot, kNoOvershoot };

// Throws ParameterError for an unknown name. Accepted: classic, piae,
// some_overshoot, no_overshoot.
ZnRule zn_rule_from_string(std::string_view name);

struct ZnGains {
  double kp = 0.0;
  double ti = 0.0;
  double td = 0.0;
  // Standard-form derivative gain kp * td.
  double kd() const { return kp * td; }
};

// Ziegler-Nichols gains from the ultimate gain and oscillation period.
ZnGains zn_gains(double k_u, double t_u, ZnRule rule);

}  // namespace simbiped::control
