#include "simbiped/lipm.hpp"

#include <cmath>
#include <string>

#include "simbiped/errors.hpp"

namespace simbiped::lipm {

namespace {

constexpr double kDegenerateEnergy = 1e-12;

void require_positive(double v, const char* name) {
  if (!(v > 0.0) || !std::isfinite(v)) {
    throw ParameterError(std::string(name) + " must be finite and > 0, got " +
                         std::to_string(v));
  }
}

struct Derivative {
  double dx, dy, dvx, dvy;
};

Derivative pendulum_rates(double x, double y, double vx, double vy,
                          const Lipm3dState& u, double omega_sq, double m_zc) {
  return {vx, vy, omega_sq * x + u.u_y / m_zc, omega_sq * y - u.u_x / m_zc};
}

}  // namespace

LipmParams::LipmParams(double z_c, double g, double mass)
    : z_c_(z_c), g_(g), mass_(mass) {
  require_positive(z_c, "z_c");
  require_positive(g, "g");
  require_positive(mass, "mass");
}

double LipmParams::time_constant() const { return std::sqrt(z_c_ / g_); }

ConstraintLine::ConstraintLine(double k, double y_c) : k_(k), y_c_(y_c) {
  if (!std::isfinite(k)) throw ParameterError("slope k must be finite");
  require_positive(y_c, "y_c");
}

ConstraintPlane::ConstraintPlane(double k_x, double k_y, double z_c)
    : k_x_(k_x), k_y_(k_y), z_c_(z_c) {
  if (!std::isfinite(k_x) || !std::isfinite(k_y)) {
    throw ParameterError("plane slopes must be finite");
  }
  require_positive(z_c, "z_c");
}

double time_constant(const LipmParams& params) { return params.time_constant(); }

LipmState evolve(const LipmState& state, const LipmParams& params, double t) {
  const double tc = params.time_constant();
  const double c = std::cosh(t / tc);
  const double s = std::sinh(t / tc);
  return {state.x * c + tc * state.x_dot * s, state.x / tc * s + state.x_dot * c};
}

double orbital_energy(const LipmState& state, const LipmParams& params) {
  return -0.5 * params.omega_sq() * state.x * state.x +
         0.5 * state.x_dot * state.x_dot;
}

OrbitalEnergyPair orbital_energy_rotated(const Lipm3dState& state,
                                         const ConstraintPlane& plane,
                                         double theta, double g) {
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const double k = g / (2.0 * plane.z_c());
  const double px = c * state.x + s * state.y;
  const double vx = c * state.x_dot + s * state.y_dot;
  const double py = -s * state.x + c * state.y;
  const double vy = -s * state.x_dot + c * state.y_dot;
  return {-k * px * px + 0.5 * vx * vx, -k * py * py + 0.5 * vy * vy, theta};
}

double principal_axis_angle(const Lipm3dState& state,
                            const ConstraintPlane& plane, double g) {
  // Conserved symmetric tensor Q = v v^T - (g/z_c) p p^T; the principal frame
  // diagonalises it.
  const double w2 = g / plane.z_c();
  const double qxx = state.x_dot * state.x_dot - w2 * state.x * state.x;
  const double qyy = state.y_dot * state.y_dot - w2 * state.y * state.y;
  const double qxy = state.x_dot * state.y_dot - w2 * state.x * state.y;
  return 0.5 * std::atan2(2.0 * qxy, qxx - qyy);
}

double hyperbola_residual(double x, double y, const OrbitalEnergyPair& energies,
                          const ConstraintPlane& plane, double g) {
  if (std::abs(energies.e_x) < kDegenerateEnergy ||
      std::abs(energies.e_y) < kDegenerateEnergy) {
    throw DegenerateOrbitError("orbital energy is zero; orbit is degenerate");
  }
  const double k = g / (2.0 * plane.z_c());
  return k / energies.e_x * x * x + k / energies.e_y * y * y + 1.0;
}

Lipm3dState evolve_3d(const Lipm3dState& state, const ConstraintPlane& plane,
                      const LipmParams& params, double dt) {
  if (!(dt > 0.0)) throw ParameterError("evolve_3d requires dt > 0");
  const double w2 = params.g() / plane.z_c();
  const double m_zc = params.mass() * plane.z_c();

  const auto f = [&](double x, double y, double vx, double vy) {
    return pendulum_rates(x, y, vx, vy, state, w2, m_zc);
  };
  const Derivative k1 = f(state.x, state.y, state.x_dot, state.y_dot);
  const double h2 = 0.5 * dt;
  const Derivative k2 = f(state.x + h2 * k1.dx, state.y + h2 * k1.dy,
                          state.x_dot + h2 * k1.dvx, state.y_dot + h2 * k1.dvy);
  const Derivative k3 = f(state.x + h2 * k2.dx, state.y + h2 * k2.dy,
                          state.x_dot + h2 * k2.dvx, state.y_dot + h2 * k2.dvy);
  const Derivative k4 = f(state.x + dt * k3.dx, state.y + dt * k3.dy,
                          state.x_dot + dt * k3.dvx, state.y_dot + dt * k3.dvy);

  Lipm3dState out = state;
  const double w = dt / 6.0;
  out.x += w * (k1.dx + 2.0 * k2.dx + 2.0 * k3.dx + k4.dx);
  out.y += w * (k1.dy + 2.0 * k2.dy + 2.0 * k3.dy + k4.dy);
  out.x_dot += w * (k1.dvx + 2.0 * k2.dvx + 2.0 * k3.dvx + k4.dvx);
  out.y_dot += w * (k1.dvy + 2.0 * k2.dvy + 2.0 * k3.dvy + k4.dvy);
  return out;
}

Zmp zmp_from_torque(double u_x, double u_y, const LipmParams& params) {
  const double mg = params.mass() * params.g();
  return {-u_y / mg, u_x / mg};
}

double zmp_from_trajectory(double x, double x_ddot, const LipmParams& params) {
  return x - params.z_c() / params.g() * x_ddot;
}

double accel_from_zmp(double x, double p, const LipmParams& params) {
  return params.omega_sq() * (x - p);
}

double sloped_dynamics_accel(double x, const ConstraintLine& line, double g) {
  return g / line.y_c() * x;
}

}  // namespace simbiped::lipm
