#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "tbl/engine.hpp"

namespace tbl {
namespace {

struct Signal {
  std::vector<double> t, y;
};

Signal sampled(double rate_hz, double duration, const std::function<double(double)>& f) {
  Signal s;
  const auto n = static_cast<std::size_t>(duration * rate_hz);
  for (std::size_t i = 0; i <= n; ++i) {
    const double t = static_cast<double>(i) / rate_hz;
    s.t.push_back(t);
    s.y.push_back(f(t));
  }
  return s;
}

TEST(AnalyzeWaveform, SinusoidFrequency) {
  const auto s = sampled(1000.0, 2.0, [](double t) { return 50.0 + 30.0 * std::sin(2 * std::numbers::pi * 15.0 * t); });
  const auto rep = analyze_waveform(s.t, s.y);
  EXPECT_NEAR(rep.frequency_hz, 15.0, 0.075);
  EXPECT_NEAR(rep.peak_kpa, 80.0, 0.5);
  EXPECT_NEAR(rep.trough_kpa, 20.0, 0.5);
  EXPECT_NEAR(rep.duty, 0.5, 0.02);
  EXPECT_GE(rep.peak_kpa, rep.trough_kpa);
}

TEST(AnalyzeWaveform, SquareWaveDuty) {
  const auto s = sampled(10000.0, 2.0, [](double t) {
    const double phase = std::fmod(t * 10.0, 1.0);
    return phase < 0.3 ? 100.0 : 0.0;
  });
  const auto rep = analyze_waveform(s.t, s.y);
  EXPECT_NEAR(rep.frequency_hz, 10.0, 0.05);
  EXPECT_NEAR(rep.duty, 0.3, 0.01);
}

TEST(AnalyzeWaveform, ConstantIsNoOscillation) {
  const auto s = sampled(1000.0, 1.0, [](double) { return 42.0; });
  try {
    analyze_waveform(s.t, s.y);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::NoOscillation);
  }
}

TEST(AnalyzeWaveform, SmallRippleIsNoOscillation) {
  const auto s = sampled(1000.0, 1.0, [](double t) { return 10.0 + 0.3 * std::sin(2 * std::numbers::pi * 20 * t); });
  EXPECT_THROW(analyze_waveform(s.t, s.y), Error);
}

TEST(AnalyzeWaveform, TooFewCyclesIsNoOscillation) {
  // One slow cycle inside the analysed 80%.
  const auto s = sampled(1000.0, 1.0, [](double t) { return 50.0 * std::sin(2 * std::numbers::pi * 1.2 * t); });
  EXPECT_THROW(analyze_waveform(s.t, s.y), Error);
}

TEST(AnalyzeWaveform, TransientPrefixDiscarded) {
  // A large spike in the first 20% must not leak into the peak.
  const auto s = sampled(2000.0, 2.0, [](double t) {
    const double base = 40.0 + 10.0 * std::sin(2 * std::numbers::pi * 12.0 * t);
    return t < 0.1 ? base + 200.0 : base;
  });
  const auto rep = analyze_waveform(s.t, s.y);
  EXPECT_NEAR(rep.peak_kpa, 50.0, 0.2);
  EXPECT_NEAR(rep.frequency_hz, 12.0, 0.06);
}

TEST(ExtractFrequency, PhaseOffsetsBetweenProbes) {
  Trace tr;
  tr.probes = {"a", "b", "c"};
  const double f = 15.0;
  for (int i = 0; i <= 4000; ++i) {
    const double t = i * 5e-4;
    tr.time.push_back(t);
    std::vector<double> row;
    for (int k = 0; k < 3; ++k) {
      row.push_back(50.0 + 40.0 * std::sin(2 * std::numbers::pi * (f * t - k / 3.0)));
    }
    tr.pressure_kpa.push_back(row);
  }
  const auto rep = extract_frequency(tr, "a");
  EXPECT_EQ(rep.probe, "a");
  ASSERT_EQ(rep.phases.size(), 2u);
  EXPECT_EQ(rep.phases[0].probe, "b");
  EXPECT_NEAR(*rep.phases[0].degrees, 120.0, 1.0);
  EXPECT_NEAR(*rep.phases[1].degrees, 240.0, 1.0);
}

TEST(ExtractFrequency, FlatSecondProbeHasNoPhase) {
  Trace tr;
  tr.probes = {"a", "flat"};
  for (int i = 0; i <= 2000; ++i) {
    const double t = i * 1e-3;
    tr.time.push_back(t);
    tr.pressure_kpa.push_back({30.0 * std::sin(2 * std::numbers::pi * 8.0 * t), 5.0});
  }
  const auto rep = extract_frequency(tr, "a");
  ASSERT_EQ(rep.phases.size(), 1u);
  EXPECT_FALSE(rep.phases[0].degrees.has_value());
}

TEST(ExtractFrequency, UnknownProbeRejected) {
  Trace tr;
  tr.probes = {"a"};
  tr.time = {0.0, 1.0};
  tr.pressure_kpa = {{0.0}, {1.0}};
  EXPECT_THROW(extract_frequency(tr, "b"), Error);
}

}  // namespace
}  // namespace tbl
