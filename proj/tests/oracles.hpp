#pragma once

#include <cmath>
#include <functional>

#include "simbiped/vec2.hpp"

// Reference computations used only by the tests. They share no code with the
// library.
namespace oracle {

struct State1 {
  double x;
  double v;
};

// Fixed-step RK4 on x'' = w2 x.
inline State1 rk4_pendulum(State1 s, double w2, double t, double h = 1e-5) {
  const int n = static_cast<int>(std::ceil(std::abs(t) / h));
  if (n == 0) return s;
  const double dt = t / n;
  for (int i = 0; i < n; ++i) {
    const double k1x = s.v, k1v = w2 * s.x;
    const double k2x = s.v + 0.5 * dt * k1v, k2v = w2 * (s.x + 0.5 * dt * k1x);
    const double k3x = s.v + 0.5 * dt * k2v, k3v = w2 * (s.x + 0.5 * dt * k2x);
    const double k4x = s.v + dt * k3v, k4v = w2 * (s.x + dt * k3x);
    s.x += dt / 6.0 * (k1x + 2 * k2x + 2 * k3x + k4x);
    s.v += dt / 6.0 * (k1v + 2 * k2v + 2 * k3v + k4v);
  }
  return s;
}

// Root of f on [lo, hi] by bisection; f(lo) and f(hi) must differ in sign.
inline double bisect(const std::function<double(double)>& f, double lo, double hi,
                     int iters = 200) {
  double flo = f(lo);
  for (int i = 0; i < iters; ++i) {
    const double mid = 0.5 * (lo + hi);
    const double fm = f(mid);
    if ((fm < 0) == (flo < 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// Placement p such that a pendulum starting at x = -p with speed v_s ends
// the step with speed v_e.
inline double placement_by_bisection(double v_s, double v_e, double w2, double t_step) {
  auto miss = [&](double p) { return rk4_pendulum({-p, v_s}, w2, t_step, 1e-4).v - v_e; };
  return bisect(miss, -2.0, 2.0);
}

// Central difference.
inline double derivative(const std::function<double(double)>& f, double t, double h = 1e-6) {
  return (f(t + h) - f(t - h)) / (2.0 * h);
}

struct LegChain {
  simbiped::Vec2 knee;
  simbiped::Vec2 ankle;
  simbiped::Vec2 sole;
  double foot_angle;  // world angle of the sole; 0 is flat
};

// Hip angle gamma from vertical, forward positive; interior knee angle theta;
// shin direction is gamma - (pi - theta); the foot turns by xi relative to
// the shin and the sole sits h_f below the ankle along the foot's normal.
inline LegChain leg_chain(double gamma, double theta, double xi, double l1, double l2,
                          double h_f, simbiped::Vec2 hip) {
  const double pi = 3.14159265358979323846;
  const double shin = gamma - (pi - theta);
  LegChain c;
  c.knee = {hip.x + l1 * std::sin(gamma), hip.z - l1 * std::cos(gamma)};
  c.ankle = {c.knee.x + l2 * std::sin(shin), c.knee.z - l2 * std::cos(shin)};
  c.foot_angle = shin + xi;
  c.sole = {c.ankle.x + h_f * std::sin(c.foot_angle), c.ankle.z - h_f * std::cos(c.foot_angle)};
  return c;
}

}  // namespace oracle
