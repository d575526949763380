#include <gtest/gtest.h>

#include "tbl/engine.hpp"
#include "tbl/macros.hpp"

namespace tbl {
namespace {

Network ring_template() {
  Network net;
  const NodeIndex sup = net.add_fixed("SUP", Pressure::from_kpa(145));
  add_ring(net, "r", 3, sup, {"T1", "T2", "T3"}, {});
  return net;
}

CalibrationOptions options() {
  CalibrationOptions opt;
  opt.sim.t_end = 1.0;
  opt.probe = "T1";
  return opt;
}

TEST(Calibrate, RecoversTemplateDefaults) {
  const Network tmpl = ring_template();
  const auto own = measure_oscillation(tmpl, options().sim, "T1");
  ASSERT_TRUE(own.has_value());
  const CalibrationResult r =
      calibrate_oscillator(tmpl, {own->frequency_hz, own->peak_kpa}, {}, options());
  EXPECT_TRUE(r.converged);
  EXPECT_NEAR(r.frequency_hz, own->frequency_hz, 0.02 * own->frequency_hz);
  EXPECT_NEAR(r.peak_kpa, own->peak_kpa, 0.02 * own->peak_kpa);
  // Frequency pins the compliance tightly. The peak barely depends on the
  // valve conductance once it is far above the tube conductances, so that
  // parameter is only recovered up to its effect on the waveform.
  EXPECT_NEAR(r.compliance, BalloonParams{}.compliance, 0.02 * BalloonParams{}.compliance);
}

TEST(Calibrate, HitsFifteenHertzAndThirtyFiveKpa) {
  const Network tmpl = ring_template();
  const CalibrationResult r = calibrate_oscillator(tmpl, {15.0, 35.0}, {}, options());
  EXPECT_TRUE(r.converged);
  const auto again =
      measure_oscillation(with_oscillator_params(tmpl, r.compliance, r.open_conductance), options().sim, "T1");
  ASSERT_TRUE(again.has_value());
  EXPECT_NEAR(again->frequency_hz, 15.0, 0.3);
  EXPECT_NEAR(again->peak_kpa, 35.0, 0.7);
  EXPECT_DOUBLE_EQ(again->frequency_hz, r.frequency_hz);
}

TEST(Calibrate, UnreachableFrequencyFailsWithBestPoint) {
  const Network tmpl = ring_template();
  try {
    calibrate_oscillator(tmpl, {1000.0, 35.0}, {}, options());
    FAIL() << "expected CalibrationFailed";
  } catch (const CalibrationError& e) {
    EXPECT_EQ(e.code(), ErrorCode::CalibrationFailed);
    EXPECT_GT(e.best().frequency_hz, 0.0);
    EXPECT_LT(e.best().frequency_hz, 500.0);
    EXPECT_FALSE(e.best().converged);
  }
}

TEST(Calibrate, RejectsBadTargets) {
  const Network tmpl = ring_template();
  EXPECT_THROW(calibrate_oscillator(tmpl, {-1.0, 35.0}, {}, options()), Error);
  CalibrationOptions opt = options();
  opt.probe = "missing";
  EXPECT_THROW(calibrate_oscillator(tmpl, {15.0, 35.0}, {}, opt), Error);
}

TEST(Calibrate, OverridesEveryBalloonAndValve) {
  const Network net = with_oscillator_params(ring_template(), 7e-11, 3e-6);
  for (const auto& b : net.balloons()) EXPECT_EQ(b.params.compliance, 7e-11);
  for (const auto& v : net.valves()) EXPECT_EQ(v.open_conductance, 3e-6);
}

}  // namespace
}  // namespace tbl
