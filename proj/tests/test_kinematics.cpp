#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "simbiped/errors.hpp"
#include "simbiped/gait.hpp"
#include "simbiped/kinematics.hpp"

using namespace simbiped;
using namespace simbiped::kin;

namespace {

constexpr double kPi = std::numbers::pi;

// Geometry with 1.08 m between hip and sole.
RobotGeometry depth_108() {
  RobotGeometry g;
  g.h_f = g.h_c - 1.08;
  return g;
}

oracle::LegChain chain(const LegAngles& a, const RobotGeometry& g, Vec2 hip) {
  return oracle::leg_chain(a.gamma, a.theta, a.xi, g.l_thigh, g.l_shin, g.h_f, hip);
}

}  // namespace

TEST(Geometry, DefaultsAndVariants) {
  const RobotGeometry g = RobotGeometry::with_feet();
  EXPECT_NO_THROW(g.validate());
  EXPECT_NEAR(g.l_thigh + g.l_shin + g.h_f, g.h_c / 0.9, 1e-12);
  EXPECT_NEAR(g.reach(), 2 * 0.57 * 0.98, 1e-15);
  const RobotGeometry p = RobotGeometry::point_feet();
  EXPECT_NO_THROW(p.validate());
  EXPECT_FALSE(p.has_feet);
  EXPECT_EQ(p.h_f, 0.0);
  EXPECT_NEAR(p.h_c, 0.9 * 1.14, 1e-12);
  RobotGeometry bad = g;
  bad.l_shin = 0.5;
  EXPECT_THROW(bad.validate(), ParameterError);
  bad = g;
  bad.h_c = 2.0;
  EXPECT_THROW(bad.validate(), ParameterError);
}

TEST(IkSupport, HipAboveAnkle) {
  const RobotGeometry g = depth_108();
  const LegAngles a = ik_support(0.0, g);
  EXPECT_NEAR(a.theta, 2.4898, 5e-5);
  EXPECT_NEAR(a.gamma, 0.5 * (kPi - a.theta), 1e-15);
  EXPECT_NEAR(a.gamma, 0.325883, 1e-6);
  // Flat foot: the shin leans back by gamma, so the ankle turns it forward again.
  EXPECT_NEAR(a.xi, a.gamma, 1e-12);
  // The printed ankle expression gives the sum instead.
  EXPECT_NEAR(printed::support_ankle(a.theta, a.gamma), 0.977649, 1e-6);
  EXPECT_NEAR(printed::support_ankle(a.theta, a.gamma), (kPi - a.theta) + a.gamma, 1e-12);
}

TEST(IkSupport, KneeAngleLimits) {
  RobotGeometry g = depth_108();
  g.h_f = g.h_c - 0.57 * std::sqrt(2.0);
  EXPECT_NEAR(ik_support(0.0, g).theta, kPi / 2, 1e-12);
  g.h_f = g.h_c - g.reach();
  EXPECT_NEAR(ik_support(0.0, g).theta, std::acos(1 - 2 * 0.98 * 0.98), 1e-12);
  // The knee opens monotonically as the virtual leg lengthens.
  double prev = 0.0;
  for (double depth = 0.3; depth < g.reach(); depth += 0.01) {
    g.h_f = g.h_c - depth;
    const double theta = ik_support(0.0, g).theta;
    EXPECT_GT(theta, prev);
    EXPECT_LT(theta, kPi);
    prev = theta;
  }
}

TEST(IkSupport, Errors) {
  const RobotGeometry g = RobotGeometry::with_feet();
  EXPECT_THROW(ik_support(0.9, g), ReachError);
  RobotGeometry low = g;
  low.h_c = low.h_f;
  EXPECT_THROW(ik_support(0.0, low), GeometryError);
}

TEST(IkSupport, RoundTripThroughOracle) {
  const RobotGeometry g = RobotGeometry::with_feet();
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  for (int i = 0; i < 1000; ++i) {
    const double x_t = u(rng);
    const LegAngles a = ik_support(x_t, g);
    const Vec2 hip{x_t, g.h_c};
    const oracle::LegChain c = chain(a, g, hip);
    EXPECT_NEAR(c.sole.x, 0.0, 1e-9);
    EXPECT_NEAR(c.sole.z, 0.0, 1e-9);
    EXPECT_NEAR(c.foot_angle, 0.0, 1e-12);
    const LegPoints p = fk_leg(a, g, hip);
    EXPECT_NEAR(p.sole.x, c.sole.x, 1e-12);
    EXPECT_NEAR(p.sole.z, c.sole.z, 1e-12);
    EXPECT_NEAR(p.knee.x, c.knee.x, 1e-12);
    EXPECT_NEAR(p.ankle.z, c.ankle.z, 1e-12);
  }
}

TEST(IkSwing, RoundTripThroughOracle) {
  for (const RobotGeometry& g : {RobotGeometry::with_feet(), RobotGeometry::point_feet()}) {
    std::mt19937 rng(23);
    std::uniform_real_distribution<double> fx(-0.5, 0.5), fz(0.0, 0.3), xt(-0.2, 0.2);
    int checked = 0;
    while (checked < 1000) {
      const double x_t = xt(rng);
      const Vec2 foot{fx(rng), fz(rng)};
      LegAngles a;
      try {
        a = ik_swing(x_t, foot, g);
      } catch (const ReachError&) {
        continue;
      }
      const oracle::LegChain c = chain(a, g, {x_t, g.h_c});
      EXPECT_NEAR(c.sole.x, foot.x, 1e-9);
      EXPECT_NEAR(c.sole.z, foot.z, 1e-9);
      EXPECT_NEAR(c.foot_angle, 0.0, 1e-12);
      ++checked;
    }
  }
}

TEST(IkSwing, AgreesWithSupportUnderHip) {
  const RobotGeometry g = RobotGeometry::with_feet();
  const LegAngles s = ik_support(0.1, g);
  const LegAngles w = ik_swing(0.1, {0.0, 0.0}, g);
  EXPECT_NEAR(s.gamma, w.gamma, 1e-12);
  EXPECT_NEAR(s.theta, w.theta, 1e-12);
}

TEST(IkSwing, SteadyTouchdownTarget) {
  const RobotGeometry g = RobotGeometry::with_feet();
  const lipm::LipmParams lp(g.h_c);
  const gait::GaitParams gp;
  gait::StepContext ctx;
  ctx.swing_x = -0.2;
  ctx.hip_height = g.h_c - g.h_f;
  ctx.reach = g.reach();
  const double p = gait::foot_placement(0.6, 0.6, lp, gp);
  const gait::StepPlan plan = gait::plan_step({-p, 0.6}, lp, gp, ctx);
  const double com_end = lipm::evolve({-p, 0.6}, lp, gp.t_step()).x;
  const LegAngles a = ik_swing(com_end, {plan.x_fe, 0.0}, g);
  const oracle::LegChain c = chain(a, g, {com_end, g.h_c});
  EXPECT_NEAR(c.sole.x, plan.x_fe, 1e-9);
  EXPECT_NEAR(c.sole.z, 0.0, 1e-9);
}

TEST(IkSwing, ApexFlexesKnee) {
  const RobotGeometry g = RobotGeometry::with_feet();
  const LegAngles touchdown = ik_support(0.0, g);
  const LegAngles apex = ik_swing(0.0, {0.0, 0.222}, g);
  EXPECT_LT(apex.theta, touchdown.theta);
}

TEST(IkSwing, Errors) {
  const RobotGeometry g = RobotGeometry::with_feet();
  EXPECT_THROW(ik_swing(0.0, {1.5, 0.0}, g), ReachError);
  EXPECT_THROW(ik_swing(0.0, {0.0, g.h_c}, g), GeometryError);
  EXPECT_THROW(printed::swing_ankle(2.5, 1.11, 0.0, 0.1, 0.5), GeometryError);
  EXPECT_NO_THROW(printed::swing_ankle(2.5, 1.11, 0.0, 0.1, 1.05));
}

TEST(FkLeg, StraightLeg) {
  const RobotGeometry g = RobotGeometry::with_feet();
  const LegPoints p = fk_leg({0.0, kPi, 0.0}, g, {0.3, 2.0});
  EXPECT_NEAR(p.ankle.x, 0.3, 1e-15);
  EXPECT_NEAR(p.ankle.z, 2.0 - 1.14, 1e-12);
  EXPECT_NEAR(p.sole.z, 2.0 - 1.14 - g.h_f, 1e-12);
}

TEST(FkLeg, TorsoAngleRotatesWholeChain) {
  const RobotGeometry g = RobotGeometry::with_feet();
  const LegAngles a{0.2, 2.6, 0.1};
  const Vec2 hip{0.0, 1.0};
  const LegPoints p = fk_leg(a, g, hip, 0.3);
  const oracle::LegChain c = oracle::leg_chain(0.5, a.theta, a.xi, 0.57, 0.57, g.h_f, hip);
  EXPECT_NEAR(p.ankle.x, c.ankle.x, 1e-12);
  EXPECT_NEAR(p.ankle.z, c.ankle.z, 1e-12);
  EXPECT_NEAR(p.sole.x, c.sole.x, 1e-12);
}

TEST(ClampJointLimits, KneeCap) {
  const JointLimits lim;
  EXPECT_EQ(clamp_joint_limits({0, kPi + 0.1, 0}, lim).theta, kPi);
  EXPECT_EQ(clamp_joint_limits({5, 0.1, -5}, lim).gamma, lim.hip_max);
  EXPECT_EQ(clamp_joint_limits({5, 0.1, -5}, lim).theta, lim.knee_min);
  EXPECT_EQ(clamp_joint_limits({5, 0.1, -5}, lim).xi, lim.ankle_min);
  std::mt19937 rng(2);
  std::uniform_real_distribution<double> u(-10, 10);
  for (int i = 0; i < 1000; ++i) {
    EXPECT_LE(clamp_joint_limits({u(rng), u(rng), u(rng)}, lim).theta, kPi);
  }
}
