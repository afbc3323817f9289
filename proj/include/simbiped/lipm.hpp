#pragma once

// Linear inverted pendulum: closed-form planar dynamics, the 3-D variant with
// virtual input torques, orbital energy and the ZMP relations.

namespace simbiped::lipm {

inline constexpr double kGravity = 9.81;

// Point-mass pendulum constrained to a constant height.
class LipmParams {
 public:
  explicit LipmParams(double z_c, double g = kGravity, double mass = 1.0);

  double z_c() const { return z_c_; }
  double g() const { return g_; }
  double mass() const { return mass_; }
  // sqrt(z_c / g)
  double time_constant() const;
  // g / z_c, the squared natural frequency of the unstable mode.
  double omega_sq() const { return g_ / z_c_; }

 private:
  double z_c_;
  double g_;
  double mass_;
};

// Horizontal CoM state relative to the support point.
struct LipmState {
  double x = 0.0;
  double x_dot = 0.0;
};

// CoM constrained to z = k x + y_c.
class ConstraintLine {
 public:
  ConstraintLine(double k, double y_c);
  double k() const { return k_; }
  double y_c() const { return y_c_; }

 private:
  double k_;
  double y_c_;
};

// CoM constrained to z = k_x x + k_y y + z_c.
class ConstraintPlane {
 public:
  ConstraintPlane(double k_x, double k_y, double z_c);
  double k_x() const { return k_x_; }
  double k_y() const { return k_y_; }
  double z_c() const { return z_c_; }

 private:
  double k_x_;
  double k_y_;
  double z_c_;
};

struct Lipm3dState {
  double x = 0.0;
  double y = 0.0;
  double x_dot = 0.0;
  double y_dot = 0.0;
  double u_x = 0.0;  // virtual torque about the x axis
  double u_y = 0.0;  // virtual torque about the y axis
};

struct OrbitalEnergyPair {
  double e_x = 0.0;
  double e_y = 0.0;
  double theta = 0.0;
};

struct Zmp {
  double p_x = 0.0;
  double p_y = 0.0;
};

double time_constant(const LipmParams& params);

// Closed-form state after `t` seconds (t may be negative).
LipmState evolve(const LipmState& state, const LipmParams& params, double t);

// -(g / 2 z_c) x^2 + x_dot^2 / 2, conserved along evolve.
double orbital_energy(const LipmState& state, const LipmParams& params);

// Orbital energies of both axes in a frame rotated by `theta`.
OrbitalEnergyPair orbital_energy_rotated(const Lipm3dState& state,
                                         const ConstraintPlane& plane,
                                         double theta, double g = kGravity);

// Rotation that aligns the frame with the axes of a torque-free trajectory's
// hyperbola. In that frame the cross term x_dot*y_dot - (g/z_c)*x*y, which is
// conserved, vanishes.
double principal_axis_angle(const Lipm3dState& state,
                            const ConstraintPlane& plane, double g = kGravity);

// (g / 2 z_c E_x) x^2 + (g / 2 z_c E_y) y^2 + 1. Zero on the trajectory when
// (x, y) and the energies are expressed in the principal frame.
// Throws DegenerateOrbitError when |E_x| or |E_y| < 1e-12.
double hyperbola_residual(double x, double y, const OrbitalEnergyPair& energies,
                          const ConstraintPlane& plane, double g = kGravity);

// One RK4 step of the 3-D pendulum with constant virtual torques.
// Height comes from the plane; g and mass from `params`.
Lipm3dState evolve_3d(const Lipm3dState& state, const ConstraintPlane& plane,
                      const LipmParams& params, double dt);

// ZMP on a horizontal floor produced by virtual torques.
Zmp zmp_from_torque(double u_x, double u_y, const LipmParams& params);

// p = x - (z_c / g) x_ddot. Same form for the y axis.
double zmp_from_trajectory(double x, double x_ddot, const LipmParams& params);

// x_ddot = (g / z_c) (x - p).
double accel_from_zmp(double x, double p, const LipmParams& params);

// Horizontal acceleration on a sloped constraint line; the slope drops out.
double sloped_dynamics_accel(double x, const ConstraintLine& line,
                             double g = kGravity);

}  // namespace simbiped::lipm
