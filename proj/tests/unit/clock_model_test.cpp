#include "twsync/clock_model.hpp"

#include <gtest/gtest.h>

#include <limits>
#include <stdexcept>

#include "test_support.hpp"

namespace twsync {
namespace {

using testing::within_ulps;

TEST(ClockModelTest, IdentityClock) {
  const ClockParams clock = ClockParams::from_ppm(0.0, 0.0);
  EXPECT_EQ(local_from_true(0.0, clock), 0.0);
  EXPECT_EQ(true_from_local(0.123, clock), 0.123);
  EXPECT_EQ(ClockParams(), clock);
}

TEST(ClockModelTest, LocalFromTrueDefaults) {
  const ClockParams clock = ClockParams::from_ppm(20.0, 1e-6);
  EXPECT_TRUE(within_ulps(local_from_true(1.0, clock), 1.000021, 2));
}

TEST(ClockModelTest, TrueFromLocalInvertsExample) {
  const ClockParams clock = ClockParams::from_ppm(20.0, 1e-6);
  EXPECT_TRUE(within_ulps(true_from_local(1.000021, clock), 1.0, 4));
  EXPECT_EQ(true_from_local(clock.gamma(), clock), 0.0);
}

TEST(ClockModelTest, AlphaMatchesPpmExactly) {
  for (double ppm : {-50.0, -1.0, 0.0, 0.5, 20.0, 1e3}) {
    const ClockParams c = ClockParams::from_ppm(ppm, 0.0);
    EXPECT_EQ(c.alpha(), 1.0 + ppm * 1e-6);
    EXPECT_EQ(c.nu_ppm(), ppm);
    EXPECT_EQ(c.nu(), c.alpha() - 1.0);
  }
}

TEST(ClockModelTest, RoundTripWithinFourUlps) {
  testing::SetupGenerator gen(7);
  for (int i = 0; i < 1000; ++i) {
    const ClockParams c = ClockParams::from_ppm(gen.uniform(-100.0, 100.0),
                                                gen.uniform(-1e-5, 1e-5));
    const double t = gen.uniform(1e-3, 10.0);
    EXPECT_TRUE(within_ulps(true_from_local(local_from_true(t, c), c), t, 4))
        << "t=" << t;
  }
}

TEST(ClockModelTest, LocalTimeStrictlyIncreasing) {
  testing::SetupGenerator gen(8);
  for (int i = 0; i < 200; ++i) {
    const ClockParams c = ClockParams::from_ppm(gen.uniform(-1e5, 1e5),
                                                gen.uniform(-1.0, 1.0));
    const double t = gen.uniform(-5.0, 5.0);
    const double later = t + gen.log_uniform(1e-9, 1.0);
    EXPECT_LT(local_from_true(t, c), local_from_true(later, c));
  }
}

TEST(ClockModelTest, RejectsNonPositiveAlpha) {
  EXPECT_THROW(ClockParams::from_ppm(-1e6, 0.0), std::invalid_argument);
  EXPECT_THROW(ClockParams::from_ppm(-2e6, 0.0), std::invalid_argument);
  EXPECT_THROW(ClockParams::from_ppm(std::numeric_limits<double>::quiet_NaN(), 0.0),
               std::invalid_argument);
  EXPECT_THROW(ClockParams::from_ppm(0.0, std::numeric_limits<double>::infinity()),
               std::invalid_argument);
}

TEST(ProtocolConfigTest, ValidatesSchedule) {
  EXPECT_NO_THROW(ProtocolConfig(0.0, {1e-3, 2e-3}, 0.0));
  EXPECT_THROW(ProtocolConfig(0.0, {1e-3}, 1e-7), std::invalid_argument);
  EXPECT_THROW(ProtocolConfig(0.0, {1e-3, 1e-3}, 1e-7), std::invalid_argument);
  EXPECT_THROW(ProtocolConfig(0.0, {2e-3, 1e-3}, 1e-7), std::invalid_argument);
  EXPECT_THROW(ProtocolConfig(0.0, {0.0, 1e-3}, 1e-7), std::invalid_argument);
  EXPECT_THROW(ProtocolConfig(0.0, {1e-3, 2e-3}, -1e-9), std::invalid_argument);
}

TEST(NoiseModelTest, RejectsNegativeSigma) {
  EXPECT_NO_THROW(NoiseModel(0.0, 0.0));
  EXPECT_THROW(NoiseModel(-1e-12, 1e-10), std::invalid_argument);
  EXPECT_THROW(NoiseModel(1e-10, -1e-12), std::invalid_argument);
}

}  // namespace
}  // namespace twsync
