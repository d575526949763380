#include <gtest/gtest.h>

#include "oracles.hpp"
#include "tbl/engine.hpp"
#include "tbl/macros.hpp"

namespace tbl {
namespace {

struct NotFixture {
  Network net;
  NodeIndex in = 0, out = 0;

  explicit NotFixture(Pressure input) {
    const NodeIndex sup = net.add_fixed("SUP", Pressure::from_kpa(145));
    in = net.add_fixed("A", input);
    out = net.node("Q");
    add_not_gate(net, "g", in, out, sup, {});
  }
};

TEST(DcOperatingPoint, NotGateLowInputGivesDividerOutput) {
  NotFixture f(Pressure{});
  const SteadyState dc = dc_operating_point(f.net);
  ASSERT_TRUE(dc.converged);
  EXPECT_EQ(dc.valve_states[0], ValveState::Open);
  const double r = oracle::poiseuille(0.075, 1e-3);
  const double want = oracle::not_gate_high_kpa(145.0, r, 1.0 / GateParams{}.open_conductance, 2.0 * r);
  EXPECT_NEAR(dc.pressure(f.out).kpa(), want, 1e-9 * want);
  EXPECT_NEAR(dc.pressure(f.out).kpa(), 96.7, 0.967);
}

TEST(DcOperatingPoint, NotGateHighInputGivesExactZero) {
  NotFixture f(Pressure::from_kpa(145));
  const SteadyState dc = dc_operating_point(f.net);
  EXPECT_EQ(dc.valve_states[0], ValveState::Closed);
  EXPECT_EQ(dc.pressure(f.out).pa(), 0.0);
}

TEST(DcOperatingPoint, StatesAreSelfConsistent) {
  for (double in_kpa : {0.0, 50.0, 70.0, 90.0, 145.0}) {
    NotFixture f(Pressure::from_kpa(in_kpa));
    const SteadyState dc = dc_operating_point(f.net);
    for (std::size_t i = 0; i < f.net.valves().size(); ++i) {
      const auto& v = f.net.valves()[i];
      EXPECT_EQ(valve_step(dc.valve_states[i], dc.pressure(v.control), v.thresholds), dc.valve_states[i]);
    }
  }
}

TEST(DcOperatingPoint, HysteresisBandKeepsStartingState) {
  // 70 kPa sits inside (60, 85): both states are fixed points.
  NotFixture f(Pressure::from_kpa(70));
  DcOptions opt;
  opt.initial = std::vector<ValveState>{ValveState::Closed};
  EXPECT_EQ(dc_operating_point(f.net, opt).valve_states[0], ValveState::Closed);
  opt.initial = std::vector<ValveState>{ValveState::Open};
  const SteadyState open = dc_operating_point(f.net, opt);
  EXPECT_EQ(open.valve_states[0], ValveState::Open);
  EXPECT_EQ(open.fixed_points.size(), 2u);
}

TEST(DcOperatingPoint, ThreeRingIsAstable) {
  Network net;
  const NodeIndex sup = net.add_fixed("SUP", Pressure::from_kpa(145));
  add_ring(net, "r", 3, sup, {}, {});
  try {
    dc_operating_point(net);
    FAIL() << "expected AstableCircuit";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::AstableCircuit);
  }
}

TEST(DcOperatingPoint, TwoRingLatchesWithTwoFixedPoints) {
  Network net;
  const NodeIndex sup = net.add_fixed("SUP", Pressure::from_kpa(145));
  add_ring(net, "r", 2, sup, {}, {});
  const SteadyState dc = dc_operating_point(net);
  EXPECT_TRUE(dc.converged);
  ASSERT_EQ(dc.fixed_points.size(), 2u);
  EXPECT_NE(dc.valve_states[0], dc.valve_states[1]);
  // Seeded stage 1 closed, so the iteration lands on that latch.
  EXPECT_EQ(dc.valve_states[0], ValveState::Closed);
}

TEST(DcOperatingPoint, LargeAstableRingExceedsEnumeration) {
  Network net;
  const NodeIndex sup = net.add_fixed("SUP", Pressure::from_kpa(145));
  add_ring(net, "r", 17, sup, {}, {});
  try {
    dc_operating_point(net);
    FAIL() << "expected TooManyValves";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::TooManyValves);
  }
}

TEST(DcOperatingPoint, WrongInitialLengthRejected) {
  NotFixture f(Pressure{});
  DcOptions opt;
  opt.initial = std::vector<ValveState>{ValveState::Open, ValveState::Open};
  EXPECT_THROW(dc_operating_point(f.net, opt), Error);
}

}  // namespace
}  // namespace tbl
