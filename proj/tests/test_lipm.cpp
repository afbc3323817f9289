#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "simbiped/errors.hpp"
#include "simbiped/lipm.hpp"

using namespace simbiped;
using namespace simbiped::lipm;

namespace {
const LipmParams kParams(1.11);
}

TEST(TimeConstant, MatchesSquareRoot) {
  EXPECT_NEAR(time_constant(kParams), 0.33638, 5e-6);
  EXPECT_NEAR(time_constant(LipmParams(9.81)), 1.0, 1e-15);
  EXPECT_NEAR(time_constant(LipmParams(4 * 9.81)), 2.0, 1e-15);
  EXPECT_DOUBLE_EQ(kParams.time_constant(), time_constant(kParams));
}

TEST(LipmParams, RejectsNonPositive) {
  EXPECT_THROW(LipmParams(0.0), ParameterError);
  EXPECT_THROW(LipmParams(-1.0), ParameterError);
  EXPECT_THROW(LipmParams(1.0, 0.0), ParameterError);
  EXPECT_THROW(LipmParams(1.0, 9.81, 0.0), ParameterError);
}

TEST(Evolve, EquilibriumStaysPut) {
  const LipmState s = evolve({0.0, 0.0}, kParams, 3.7);
  EXPECT_EQ(s.x, 0.0);
  EXPECT_EQ(s.x_dot, 0.0);
}

TEST(Evolve, KnownStateAfterOneStep) {
  const LipmState s = evolve({0.25, 0.0}, kParams, 0.4);
  const oracle::State1 o = oracle::rk4_pendulum({0.25, 0.0}, kParams.omega_sq(), 0.4);
  EXPECT_NEAR(s.x, o.x, 1e-9);
  EXPECT_NEAR(s.x_dot, o.v, 1e-9);
  EXPECT_NEAR(s.x, 0.44859, 5e-6);
  EXPECT_NEAR(s.x_dot, 1.10730, 5e-6);
}

TEST(Evolve, MatchesRk4OnRandomStates) {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pos(-0.3, 0.3), vel(-1.5, 1.5);
  for (int i = 0; i < 100; ++i) {
    const LipmState s0{pos(rng), vel(rng)};
    const LipmState s = evolve(s0, kParams, 1.0);
    const oracle::State1 o = oracle::rk4_pendulum({s0.x, s0.x_dot}, kParams.omega_sq(), 1.0);
    EXPECT_NEAR(s.x, o.x, 1e-6);
    EXPECT_NEAR(s.x_dot, o.v, 1e-6);
  }
}

TEST(Evolve, SemigroupAndTimeReversal) {
  const LipmState s0{0.07, -0.4};
  const LipmState a = evolve(evolve(s0, kParams, 0.3), kParams, 0.45);
  const LipmState b = evolve(s0, kParams, 0.75);
  EXPECT_NEAR(a.x, b.x, 1e-12);
  EXPECT_NEAR(a.x_dot, b.x_dot, 1e-12);
  const LipmState back = evolve(b, kParams, -0.75);
  EXPECT_NEAR(back.x, s0.x, 1e-12);
  EXPECT_NEAR(back.x_dot, s0.x_dot, 1e-12);
}

TEST(OrbitalEnergy, KnownValues) {
  EXPECT_EQ(orbital_energy({0, 0}, kParams), 0.0);
  EXPECT_NEAR(orbital_energy({0.25, 0}, kParams), -0.27618, 5e-6);
  EXPECT_DOUBLE_EQ(orbital_energy({0, 0.8}, kParams), 0.32);
}

TEST(OrbitalEnergy, ConservedAlongEvolve) {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> pos(-0.3, 0.3), vel(-1.5, 1.5), t(-1.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const LipmState s0{pos(rng), vel(rng)};
    const double e0 = orbital_energy(s0, kParams);
    const double e1 = orbital_energy(evolve(s0, kParams, t(rng)), kParams);
    EXPECT_NEAR(e1, e0, 1e-9 * std::max(1.0, std::abs(e0)));
  }
}

TEST(OrbitalEnergyRotated, AxisCases) {
  const ConstraintPlane plane(0, 0, 1.11);
  const Lipm3dState s{0.1, -0.05, 0.4, 0.2, 0, 0};
  const OrbitalEnergyPair e0 = orbital_energy_rotated(s, plane, 0.0);
  EXPECT_NEAR(e0.e_x, orbital_energy({s.x, s.x_dot}, kParams), 1e-15);
  EXPECT_NEAR(e0.e_y, orbital_energy({s.y, s.y_dot}, kParams), 1e-15);
  const OrbitalEnergyPair e90 = orbital_energy_rotated(s, plane, std::numbers::pi / 2);
  EXPECT_NEAR(e90.e_x, orbital_energy({s.y, s.y_dot}, kParams), 1e-15);
  EXPECT_NEAR(e90.e_y, orbital_energy({s.x, s.x_dot}, kParams), 1e-15);
}

TEST(HyperbolaResidual, ZeroOnTorqueFreeTrajectory) {
  const ConstraintPlane plane(0.1, -0.05, 1.11);
  Lipm3dState s{-0.2, 0.05, 0.7, 0.1, 0, 0};
  const double theta = principal_axis_angle(s, plane);
  const OrbitalEnergyPair e = orbital_energy_rotated(s, plane, theta);
  const double c = std::cos(theta), sn = std::sin(theta);
  for (int i = 0; i < 60; ++i) {
    const double px = c * s.x + sn * s.y;
    const double py = -sn * s.x + c * s.y;
    EXPECT_NEAR(hyperbola_residual(px, py, e, plane), 0.0, 1e-6) << "sample " << i;
    s = evolve_3d(s, plane, kParams, 0.01);
  }
}

TEST(HyperbolaResidual, DegenerateEnergyThrows) {
  const ConstraintPlane plane(0, 0, 1.11);
  EXPECT_THROW(hyperbola_residual(0.1, 0.1, {0.0, 1.0, 0.0}, plane), DegenerateOrbitError);
  EXPECT_THROW(hyperbola_residual(0.1, 0.1, {1.0, 0.0, 0.0}, plane), DegenerateOrbitError);
}

TEST(Evolve3d, FixedPointAtOrigin) {
  const ConstraintPlane plane(0.2, 0.1, 1.11);
  const Lipm3dState s = evolve_3d({}, plane, kParams, 0.01);
  EXPECT_EQ(s.x, 0.0);
  EXPECT_EQ(s.y, 0.0);
  EXPECT_EQ(s.x_dot, 0.0);
  EXPECT_EQ(s.y_dot, 0.0);
}

TEST(Evolve3d, TorqueFreeAxesMatchPlanarSolution) {
  const ConstraintPlane plane(0.3, -0.2, 1.11);
  Lipm3dState s{0.1, -0.04, 0.3, 0.5, 0, 0};
  for (int i = 0; i < 100; ++i) s = evolve_3d(s, plane, kParams, 0.001);
  const LipmState ex = evolve({0.1, 0.3}, kParams, 0.1);
  const LipmState ey = evolve({-0.04, 0.5}, kParams, 0.1);
  EXPECT_NEAR(s.x, ex.x, 1e-10);
  EXPECT_NEAR(s.x_dot, ex.x_dot, 1e-10);
  EXPECT_NEAR(s.y, ey.x, 1e-10);
  EXPECT_NEAR(s.y_dot, ey.x_dot, 1e-10);
}

TEST(Evolve3d, ConstantTorqueShiftsEquilibrium) {
  // Resting above the ZMP produced by the torque is an equilibrium.
  const ConstraintPlane plane(0, 0, 1.11);
  const Zmp p = zmp_from_torque(0.3, 0.5, kParams);
  Lipm3dState s{p.p_x, p.p_y, 0, 0, 0.3, 0.5};
  for (int i = 0; i < 100; ++i) s = evolve_3d(s, plane, kParams, 0.01);
  EXPECT_NEAR(s.x, p.p_x, 1e-12);
  EXPECT_NEAR(s.y, p.p_y, 1e-12);
}

TEST(Evolve3d, RejectsNonPositiveStep) {
  EXPECT_THROW(evolve_3d({}, ConstraintPlane(0, 0, 1.0), kParams, 0.0), ParameterError);
}

TEST(Zmp, FromTorque) {
  const Zmp z0 = zmp_from_torque(0, 0, LipmParams(1.0));
  EXPECT_EQ(z0.p_x, 0.0);
  EXPECT_EQ(z0.p_y, 0.0);
  EXPECT_NEAR(zmp_from_torque(0, 9.81, LipmParams(1.0, 9.81, 1.0)).p_x, -1.0, 1e-15);
}

TEST(Zmp, FromTrajectoryAndBack) {
  EXPECT_EQ(zmp_from_trajectory(0.3, 0.0, kParams), 0.3);
  EXPECT_EQ(accel_from_zmp(0.2, 0.2, kParams), 0.0);
  EXPECT_NEAR(accel_from_zmp(0.1, 0.0, kParams), 0.88378, 5e-6);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(rng), p = u(rng);
    const double a = accel_from_zmp(x, p, kParams);
    EXPECT_NEAR(zmp_from_trajectory(x, a, kParams), p, 1e-14);
  }
}

TEST(Zmp, ZeroAlongSupportAnchoredTrajectory) {
  for (double t = 0.0; t <= 1.0; t += 0.05) {
    const LipmState s = evolve({-0.1, 0.6}, kParams, t);
    const double acc = kParams.omega_sq() * s.x;
    EXPECT_NEAR(zmp_from_trajectory(s.x, acc, kParams), 0.0, 1e-9);
  }
}

TEST(SlopedDynamics, SlopeDropsOut) {
  const double a0 = sloped_dynamics_accel(0.12, ConstraintLine(0.0, 1.11));
  const double a1 = sloped_dynamics_accel(0.12, ConstraintLine(0.3, 1.11));
  EXPECT_DOUBLE_EQ(a0, a1);
  EXPECT_NEAR(a0, 9.81 / 1.11 * 0.12, 1e-14);
  EXPECT_EQ(sloped_dynamics_accel(0.0, ConstraintLine(0.3, 1.11)), 0.0);
}
