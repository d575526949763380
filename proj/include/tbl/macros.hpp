#pragma once

// Gate builders. Every macro expands to kink valves, balloons and tubes with
// names namespaced under the instance id, e.g. NOT gate `g1` yields nodes
// g1.mid and g1.ctl, tubes g1.tsup, g1.tctl, g1.tpd, valve g1.v and balloon
// g1.b.

#include <string>
#include <vector>

#include "tbl/network.hpp"

namespace tbl {

enum class GateType { Not, Nor, Nand, And, Or };

/// Per-device defaults: 7.5 cm supply and control tubes and a 15 cm pull-down,
/// all 1 mm inner diameter.
struct GateParams {
  double supply_len = 0.075;  // m
  double ctl_len = 0.075;     // m
  double pd_len = 0.15;       // m
  double diameter = 1e-3;     // m
  HysteresisThresholds thresholds;
  BalloonParams balloon;
  double open_conductance = 1e-5;  // m^3/(Pa*s)
  double leak_conductance = 0.0;
  ValveState init = ValveState::Open;
  /// Ring taps: distance of the pressure sensor from the vented end of each
  /// stage's pull-down line.
  double tap_len = 0.055;  // m

  void validate() const;
};

struct Defaults {
  double viscosity = kAirViscosity;
  GateParams gate;
};

enum class PulldownMode { PerGate, Central };

/// Ports of a built gate.
struct GateNodes {
  std::vector<NodeIndex> inputs;
  NodeIndex out = 0;
};

void add_not_gate(Network& net, const std::string& id, NodeIndex in, NodeIndex out,
                  NodeIndex supply, const GateParams& p, bool with_pulldown = true);
void add_nor_gate(Network& net, const std::string& id, NodeIndex a, NodeIndex b, NodeIndex out,
                  NodeIndex supply, const GateParams& p);
void add_nand_gate(Network& net, const std::string& id, NodeIndex a, NodeIndex b, NodeIndex out,
                   NodeIndex supply, const GateParams& p);
/// AND = NAND then NOT; OR = NOR then NOT, joined at node "<id>.n".
void add_and_gate(Network& net, const std::string& id, NodeIndex a, NodeIndex b, NodeIndex out,
                  NodeIndex supply, const GateParams& p);
void add_or_gate(Network& net, const std::string& id, NodeIndex a, NodeIndex b, NodeIndex out,
                 NodeIndex supply, const GateParams& p);

/// n NOT stages closed in a cycle (stage k drives stage k+1). Stage 1 starts
/// actuated so the ring leaves the symmetric state. `taps` names one sensor
/// node per stage (defaults to "<id>.tap<k>"). Per-gate mode splits each
/// stage's pull-down at the tap; central mode joins every stage output to a
/// shared vent and the taps are the stage outputs themselves.
std::vector<NodeIndex> add_ring(Network& net, const std::string& id, int n, NodeIndex supply,
                                std::vector<std::string> taps, const GateParams& p,
                                PulldownMode mode = PulldownMode::PerGate);

/// Number of kink valves a macro expands to.
std::size_t devices_per_gate(GateType type);

}  // namespace tbl
