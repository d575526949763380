#include "tbl/macros.hpp"

#include "tbl/error.hpp"

namespace tbl {

void GateParams::validate() const {
  if (!(supply_len >= 0.0 && ctl_len >= 0.0 && pd_len > 0.0)) {
    throw Error(ErrorCode::Domain, "gate tube lengths must be non-negative (pull-down positive)");
  }
  if (!(diameter > 0.0)) throw Error(ErrorCode::Domain, "gate tube diameter must be positive");
  if (!(tap_len >= 0.0 && tap_len <= pd_len)) {
    throw Error(ErrorCode::Domain, "tap position must lie on the pull-down line");
  }
  thresholds.validate();
  balloon.validate();
  if (!(leak_conductance >= 0.0 && open_conductance > leak_conductance)) {
    throw Error(ErrorCode::Domain, "gate needs open_conductance > leak_conductance >= 0");
  }
}

namespace {

// Balloon on a fresh control node fed from `in`, and the valve it squeezes.
void add_device(Network& net, const std::string& prefix, const std::string& suffix, NodeIndex in,
                NodeIndex flow_from, NodeIndex flow_to, const GateParams& p) {
  const NodeIndex ctl = net.node(prefix + ".c" + suffix);
  net.add_tube(prefix + ".tc" + suffix, in, ctl, p.ctl_len, p.diameter);
  Balloon b;
  b.name = prefix + ".b" + suffix;
  b.node = ctl;
  b.params = p.balloon;
  b.initial = p.init == ValveState::Closed ? p.thresholds.inflate : Pressure{};
  net.add_balloon(std::move(b));
  KinkValve v;
  v.name = prefix + ".v" + suffix;
  v.flow_from = flow_from;
  v.flow_to = flow_to;
  v.control = ctl;
  v.thresholds = p.thresholds;
  v.open_conductance = p.open_conductance;
  v.leak_conductance = p.leak_conductance;
  v.initial = p.init;
  net.add_valve(std::move(v));
}

}  // namespace

void add_not_gate(Network& net, const std::string& id, NodeIndex in, NodeIndex out,
                  NodeIndex supply, const GateParams& p, bool with_pulldown) {
  p.validate();
  const NodeIndex mid = net.node(id + ".mid");
  net.add_tube(id + ".tsup", supply, mid, p.supply_len, p.diameter);
  // Single-device names: g.ctl / g.tctl / g.b / g.v.
  const NodeIndex ctl = net.node(id + ".ctl");
  net.add_tube(id + ".tctl", in, ctl, p.ctl_len, p.diameter);
  Balloon b;
  b.name = id + ".b";
  b.node = ctl;
  b.params = p.balloon;
  b.initial = p.init == ValveState::Closed ? p.thresholds.inflate : Pressure{};
  net.add_balloon(std::move(b));
  KinkValve v;
  v.name = id + ".v";
  v.flow_from = mid;
  v.flow_to = out;
  v.control = ctl;
  v.thresholds = p.thresholds;
  v.open_conductance = p.open_conductance;
  v.leak_conductance = p.leak_conductance;
  v.initial = p.init;
  net.add_valve(std::move(v));
  if (with_pulldown) net.add_tube(id + ".tpd", out, net.atmosphere(), p.pd_len, p.diameter);
}

void add_nor_gate(Network& net, const std::string& id, NodeIndex a, NodeIndex b, NodeIndex out,
                  NodeIndex supply, const GateParams& p) {
  p.validate();
  const NodeIndex m1 = net.node(id + ".m1");
  const NodeIndex m2 = net.node(id + ".m2");
  net.add_tube(id + ".tsup", supply, m1, p.supply_len, p.diameter);
  add_device(net, id, "a", a, m1, m2, p);
  add_device(net, id, "b", b, m2, out, p);
  net.add_tube(id + ".tpd", out, net.atmosphere(), p.pd_len, p.diameter);
}

void add_nand_gate(Network& net, const std::string& id, NodeIndex a, NodeIndex b, NodeIndex out,
                   NodeIndex supply, const GateParams& p) {
  p.validate();
  const NodeIndex ma = net.node(id + ".ma");
  const NodeIndex mb = net.node(id + ".mb");
  net.add_tube(id + ".tsa", supply, ma, p.supply_len, p.diameter);
  net.add_tube(id + ".tsb", supply, mb, p.supply_len, p.diameter);
  add_device(net, id, "a", a, ma, out, p);
  add_device(net, id, "b", b, mb, out, p);
  net.add_tube(id + ".tpd", out, net.atmosphere(), p.pd_len, p.diameter);
}

void add_and_gate(Network& net, const std::string& id, NodeIndex a, NodeIndex b, NodeIndex out,
                  NodeIndex supply, const GateParams& p) {
  const NodeIndex n = net.node(id + ".n");
  add_nand_gate(net, id + ".nand", a, b, n, supply, p);
  add_not_gate(net, id + ".not", n, out, supply, p);
}

void add_or_gate(Network& net, const std::string& id, NodeIndex a, NodeIndex b, NodeIndex out,
                 NodeIndex supply, const GateParams& p) {
  const NodeIndex n = net.node(id + ".n");
  add_nor_gate(net, id + ".nor", a, b, n, supply, p);
  add_not_gate(net, id + ".not", n, out, supply, p);
}

std::vector<NodeIndex> add_ring(Network& net, const std::string& id, int n, NodeIndex supply,
                                std::vector<std::string> taps, const GateParams& p,
                                PulldownMode mode) {
  if (n < 2) throw Error(ErrorCode::EvenRing, "ring '" + id + "' needs at least two stages");
  p.validate();
  if (taps.empty()) {
    for (int k = 1; k <= n; ++k) taps.push_back(id + ".tap" + std::to_string(k));
  }
  if (static_cast<int>(taps.size()) != n) {
    throw Error(ErrorCode::UnboundPort, "ring '" + id + "' has " + std::to_string(n) +
                                            " stages but " + std::to_string(taps.size()) + " taps");
  }

  std::vector<NodeIndex> outs;
  for (int k = 1; k <= n; ++k) {
    const std::string stage = id + ".s" + std::to_string(k);
    outs.push_back(mode == PulldownMode::PerGate ? net.node(stage + ".out")
                                                 : net.node(taps[static_cast<std::size_t>(k - 1)]));
  }
  NodeIndex vent = net.atmosphere();
  if (mode == PulldownMode::Central) {
    vent = net.node(id + ".pd");
    net.add_tube(id + ".tvent", vent, net.atmosphere(), p.ctl_len, p.diameter);
  }

  std::vector<NodeIndex> tap_nodes;
  for (int k = 1; k <= n; ++k) {
    const auto idx = static_cast<std::size_t>(k - 1);
    const std::string stage = id + ".s" + std::to_string(k);
    GateParams sp = p;
    sp.init = k == 1 ? ValveState::Closed : ValveState::Open;
    const NodeIndex in = outs[(idx + static_cast<std::size_t>(n) - 1) % static_cast<std::size_t>(n)];
    add_not_gate(net, stage, in, outs[idx], supply, sp, /*with_pulldown=*/false);
    if (mode == PulldownMode::PerGate) {
      const NodeIndex tap = net.node(taps[idx]);
      net.add_tube(stage + ".tpd1", outs[idx], tap, p.pd_len - p.tap_len, p.diameter);
      net.add_tube(stage + ".tpd2", tap, net.atmosphere(), p.tap_len, p.diameter);
      tap_nodes.push_back(tap);
    } else {
      net.add_tube(stage + ".tpd", outs[idx], vent, p.pd_len, p.diameter);
      tap_nodes.push_back(outs[idx]);
    }
  }
  return tap_nodes;
}

std::size_t devices_per_gate(GateType type) {
  switch (type) {
    case GateType::Not: return 1;
    case GateType::Nor:
    case GateType::Nand: return 2;
    case GateType::And:
    case GateType::Or: return 3;
  }
  return 0;
}

}  // namespace tbl
