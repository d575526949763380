#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "tbl/engine.hpp"
#include "tbl/macros.hpp"

namespace tbl {
namespace {

constexpr double kSupplyKpa = 100.0;

struct RcBench {
  Network net;
  double r = 0.0;
  double c = 5e-11;

  RcBench() {
    const NodeIndex s = net.add_fixed("S", Pressure::from_kpa(kSupplyKpa));
    const NodeIndex n = net.node("n");
    net.add_tube("t", s, n, 0.075, 1e-3);
    r = net.tubes()[0].resistance;
    Balloon b;
    b.name = "b";
    b.node = n;
    b.params.compliance = c;
    net.add_balloon(b);
  }
  double tau() const { return r * c; }
};

TEST(Simulate, RcChargingMatchesExponential) {
  RcBench rc;
  SimConfig cfg;
  cfg.t_end = 4.0 * rc.tau();
  cfg.sample_interval = rc.tau() / 100.0;
  cfg.probes = {"n"};
  const Trace tr = simulate(rc.net, cfg);
  for (int k : {100, 300}) {
    const auto i = static_cast<std::size_t>(k);
    ASSERT_LT(i, tr.time.size());
    const double want = oracle::rc_charge(kSupplyKpa, rc.r, rc.c, tr.time[i]);
    EXPECT_NEAR(tr.pressure_kpa[i][0], want, 0.01 * want) << "t=" << tr.time[i];
    // The integrator itself is far tighter than the acceptance bound.
    EXPECT_NEAR(tr.pressure_kpa[i][0], want, 1e-4 * want);
  }
}

TEST(Simulate, VolumeMatchesIntegratedInflow) {
  RcBench rc;
  SimConfig cfg;
  cfg.t_end = 3.0 * rc.tau();
  cfg.sample_interval = rc.tau() / 200.0;
  const Trace tr = simulate(rc.net, cfg);
  std::vector<double> q, v;
  for (std::size_t i = 0; i < tr.time.size(); ++i) {
    q.push_back(tr.inflow[i][0]);
    v.push_back(tr.volume[i][0]);
  }
  const double dv = v.back() - v.front();
  const double integral = oracle::trapezoid(tr.time, q);
  EXPECT_NEAR(integral, dv, 0.005 * dv);
}

TEST(Simulate, OscillatorConservesVolumeBetweenEvents) {
  Network net;
  const NodeIndex sup = net.add_fixed("SUP", Pressure::from_kpa(145));
  GateParams p;
  p.balloon.compliance = 8.23e-11;
  add_ring(net, "r", 3, sup, {}, p);
  SimConfig cfg;
  cfg.t_end = 0.3;
  cfg.sample_interval = 1e-6;
  const Trace tr = simulate(net, cfg);
  for (std::size_t b = 0; b < net.balloons().size(); ++b) {
    std::vector<double> q;
    for (const auto& row : tr.inflow) q.push_back(row[b]);
    const double dv = tr.volume.back()[b] - tr.volume.front()[b];
    const double swing = net.balloons()[b].params.compliance * 85e3;
    // Inflow jumps at valve events; with fine samples the quadrature error
    // there stays far below the swing.
    EXPECT_NEAR(oracle::trapezoid(tr.time, q), dv, 0.005 * swing);
  }
}

TEST(Simulate, AllZeroSourcesGiveZeroTrace) {
  Network net;
  const NodeIndex sup = net.add_fixed("SUP", Pressure{});
  add_not_gate(net, "g", net.add_fixed("A", Pressure{}), net.node("Q"), sup, {});
  SimConfig cfg;
  cfg.t_end = 0.05;
  cfg.probes = {"Q", "g.ctl"};
  const Trace tr = simulate(net, cfg);
  for (const auto& row : tr.pressure_kpa) {
    for (double x : row) EXPECT_EQ(x, 0.0);
  }
  EXPECT_TRUE(tr.events.empty());
}

TEST(Simulate, SwitchingEventLocalized) {
  // Input stepped to 145 kPa charges the control balloon through one tube;
  // the valve closes when it reaches 85 kPa.
  Network net;
  const NodeIndex sup = net.add_fixed("SUP", Pressure::from_kpa(145));
  const NodeIndex in = net.add_fixed("A", Pressure::from_kpa(145));
  add_not_gate(net, "g", in, net.node("Q"), sup, {});
  const double r = net.tubes()[1].resistance;
  const double c = net.balloons()[0].params.compliance;
  const double t_star = -r * c * std::log(1.0 - 85.0 / 145.0);
  SimConfig cfg;
  cfg.t_end = 3.0 * t_star;
  cfg.probes = {"Q"};
  const Trace tr = simulate(net, cfg);
  ASSERT_EQ(tr.events.size(), 1u);
  EXPECT_EQ(tr.events[0].state, ValveState::Closed);
  EXPECT_NEAR(tr.events[0].time, t_star, 2.0 * cfg.event_tolerance + 1e-6 * t_star);
  EXPECT_EQ(tr.pressure_kpa.back()[0], 0.0);
}

TEST(Simulate, IdenticalRunsAreBitIdentical) {
  Network net;
  const NodeIndex sup = net.add_fixed("SUP", Pressure::from_kpa(145));
  add_ring(net, "r", 3, sup, {}, {});
  SimConfig cfg;
  cfg.t_end = 0.2;
  cfg.probes = {"r.tap1", "r.tap2"};
  const Trace a = simulate(net, cfg);
  const Trace b = simulate(net, cfg);
  EXPECT_EQ(a.time, b.time);
  EXPECT_EQ(a.pressure_kpa, b.pressure_kpa);
  EXPECT_EQ(a.volume, b.volume);
  ASSERT_EQ(a.events.size(), b.events.size());
  for (std::size_t i = 0; i < a.events.size(); ++i) {
    EXPECT_EQ(a.events[i].time, b.events[i].time);
    EXPECT_EQ(a.events[i].valve, b.events[i].valve);
  }
}

TEST(Simulate, SampleTimesStrictlyIncrease) {
  RcBench rc;
  SimConfig cfg;
  cfg.t_end = 0.01;
  const Trace tr = simulate(rc.net, cfg);
  ASSERT_GE(tr.time.size(), 2u);
  EXPECT_EQ(tr.time.front(), 0.0);
  EXPECT_DOUBLE_EQ(tr.time.back(), cfg.t_end);
  for (std::size_t i = 1; i < tr.time.size(); ++i) EXPECT_GT(tr.time[i], tr.time[i - 1]);
}

TEST(Simulate, ConfigValidated) {
  RcBench rc;
  SimConfig cfg;
  cfg.t_end = 0.0;
  EXPECT_THROW(simulate(rc.net, cfg), Error);
  cfg.t_end = 1.0;
  cfg.rtol = -1.0;
  EXPECT_THROW(simulate(rc.net, cfg), Error);
  cfg.rtol = 1e-6;
  cfg.probes = {"nope"};
  EXPECT_THROW(simulate(rc.net, cfg), Error);
}

TEST(Simulate, BurstPressureWarns) {
  Network net;
  const NodeIndex s = net.add_fixed("S", Pressure::from_kpa(250));
  const NodeIndex n = net.node("n");
  net.add_tube("t", s, n, 0.075, 1e-3);
  Balloon b;
  b.name = "b";
  b.node = n;
  net.add_balloon(b);
  SimConfig cfg;
  cfg.t_end = 0.05;
  const Trace tr = simulate(net, cfg);
  EXPECT_FALSE(tr.warnings.empty());
}

}  // namespace
}  // namespace tbl
