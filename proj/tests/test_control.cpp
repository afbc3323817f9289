#include <gtest/gtest.h>

#include <cmath>

#include "simbiped/control.hpp"
#include "simbiped/errors.hpp"

using namespace simbiped;
using namespace simbiped::control;

TEST(LowPass, DcGainIsOne) {
  LowPassState s{0.075, 0.7};
  for (int i = 0; i < 200; ++i) {
    double y;
    std::tie(s, y) = filter_step(s, 0.7);
    EXPECT_DOUBLE_EQ(y, 0.7);
  }
}

TEST(LowPass, StepResponseIsGeometricAndMonotone) {
  LowPassState s{0.075, 0.0};
  double prev = 0.0;
  for (int k = 1; k <= 100; ++k) {
    double y;
    std::tie(s, y) = filter_step(s, 1.0);
    EXPECT_NEAR(y, 1.0 - std::pow(0.925, k), 1e-12);
    EXPECT_GT(y, prev);
    EXPECT_LT(y, 1.0);
    prev = y;
    if (k == 10) {
      EXPECT_NEAR(y, 0.541418, 1e-6);
    }
  }
}

TEST(PdController, ZeroErrorZeroTorque) {
  PdController pd({200, 4}, 100);
  pd.set_target(1.3);
  EXPECT_EQ(pd.torque(1.3, 0.0), 0.0);
}

TEST(PdController, KneeHandArithmetic) {
  // alpha = 1 makes the filtered rate equal to the sample.
  PdController pd({200, 4}, 100, 1.0);
  pd.set_target(2.0);
  EXPECT_DOUBLE_EQ(pd.torque(1.9, 0.5), 200 * (2.0 - 1.9) - 4 * 0.5);
  EXPECT_NEAR(pd.torque(1.9, 0.5), 18.0, 1e-12);
}

TEST(PdController, FilteredRateWithSettledFilter) {
  PdController pd({200, 4}, 100);
  pd.set_target(0.1);
  double u = 0.0;
  for (int i = 0; i < 2000; ++i) u = pd.torque(0.0, 0.5);
  EXPECT_NEAR(u, 18.0, 1e-9);
  EXPECT_NEAR(pd.filter().y_prev, 0.5, 1e-12);
}

TEST(PdController, TorqueClamp) {
  PdController pd({200, 4}, 100);
  pd.set_target(1.0);
  EXPECT_EQ(pd.torque(0.0, 0.0), 100.0);
  pd.set_target(-1.0);
  EXPECT_EQ(pd.torque(0.0, 0.0), -100.0);
}

TEST(PdController, RejectsBadParameters) {
  EXPECT_THROW(PdController({-1, 0}, 100), ParameterError);
  EXPECT_THROW(PdController({1, 0}, 0), ParameterError);
  EXPECT_THROW(PdController({1, 0}, 100, 0.0), ParameterError);
  EXPECT_THROW(PdController({1, 0}, 100, 1.5), ParameterError);
  PdController pd({1, 0}, 100);
  EXPECT_THROW(pd.set_gains({1, -2}), ParameterError);
  pd.set_gains({48.5, 0.85});
  EXPECT_EQ(pd.gains().kp, 48.5);
}

TEST(PostureController, OnReferenceLeavesTargetUnchanged) {
  PostureController pc({1.5, 0.1}, 0.1, 1.0 / 60.0);
  EXPECT_EQ(pc.adjust(0.1, 0.0, 0.4), 0.4);
  EXPECT_EQ(pc.accumulator(), 0.0);
}

TEST(PostureController, AccumulatesAndResets) {
  PostureController pc({1.5, 0.1}, 0.1, 1.0 / 60.0);
  EXPECT_NEAR(pc.adjust(0.0, 0.0, 0.0), 0.0025, 1e-15);
  EXPECT_NEAR(pc.accumulator(), 0.0025, 1e-15);
  EXPECT_NEAR(pc.adjust(0.0, 0.0, 0.2), 0.205, 1e-15);
  pc.reset_on_exchange();
  EXPECT_EQ(pc.accumulator(), 0.0);
  // The rate term opposes pitch velocity.
  EXPECT_NEAR(pc.adjust(0.1, 0.6, 0.0), -0.1 * 0.6 / 60.0, 1e-15);
}

TEST(ZieglerNichols, TableRows) {
  const double ku = 10, tu = 1;
  ZnGains g = zn_gains(ku, tu, ZnRule::kClassic);
  EXPECT_DOUBLE_EQ(g.kp, 6);
  EXPECT_DOUBLE_EQ(g.ti, 0.5);
  EXPECT_DOUBLE_EQ(g.td, 0.125);
  EXPECT_DOUBLE_EQ(g.kd(), 0.75);
  g = zn_gains(ku, tu, ZnRule::kPessenIntegral);
  EXPECT_DOUBLE_EQ(g.kp, 7);
  EXPECT_DOUBLE_EQ(g.ti, 0.4);
  EXPECT_DOUBLE_EQ(g.td, 0.15);
  g = zn_gains(ku, tu, ZnRule::kSomeOvershoot);
  EXPECT_DOUBLE_EQ(g.kp, 3.3);
  EXPECT_DOUBLE_EQ(g.ti, 0.5);
  EXPECT_DOUBLE_EQ(g.td, 1.0 / 3.0);
  g = zn_gains(ku, tu, ZnRule::kNoOvershoot);
  EXPECT_DOUBLE_EQ(g.kp, 2);
  EXPECT_DOUBLE_EQ(g.ti, 0.5);
  EXPECT_DOUBLE_EQ(g.td, 1.0 / 3.0);
}

TEST(ZieglerNichols, ScalesWithInputs) {
  const ZnGains g = zn_gains(4.0, 0.8, ZnRule::kPessenIntegral);
  EXPECT_DOUBLE_EQ(g.kp, 0.7 * 4.0);
  EXPECT_DOUBLE_EQ(g.ti, 0.8 / 2.5);
  EXPECT_DOUBLE_EQ(g.td, 3 * 0.8 / 20);
}

TEST(ZieglerNichols, RuleNames) {
  EXPECT_EQ(zn_rule_from_string("classic"), ZnRule::kClassic);
  EXPECT_EQ(zn_rule_from_string("piae"), ZnRule::kPessenIntegral);
  EXPECT_EQ(zn_rule_from_string("some_overshoot"), ZnRule::kSomeOvershoot);
  EXPECT_EQ(zn_rule_from_string("no_overshoot"), ZnRule::kNoOvershoot);
  EXPECT_THROW(zn_rule_from_string("pid"), ParameterError);
  EXPECT_THROW(zn_gains(0, 1, ZnRule::kClassic), ParameterError);
}
