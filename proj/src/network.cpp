#include "tbl/network.hpp"

#include <cmath>
#include <limits>

#include "tbl/error.hpp"

namespace tbl {

double element_flow(const Tube& tube, Pressure p_from, Pressure p_to) {
  const double dp = p_from.pa() - p_to.pa();
  if (dp == 0.0) return 0.0;
  if (tube.resistance == 0.0) {
    // A short carries whatever the rest of the network dictates.
    return std::numeric_limits<double>::quiet_NaN();
  }
  return dp / tube.resistance;
}

double element_flow(const KinkValve& valve, Pressure p_from, Pressure p_to, ValveState state) {
  const double g = state == ValveState::Open ? valve.open_conductance : valve.leak_conductance;
  return g * (p_from.pa() - p_to.pa());
}

Network::Network(std::string atmosphere_name, double viscosity) : viscosity_(viscosity) {
  if (!(viscosity > 0.0)) throw Error(ErrorCode::Domain, "viscosity must be positive");
  nodes_.push_back(Node{atmosphere_name, NodeKind::Fixed, Pressure{}});
  node_lookup_.emplace(std::move(atmosphere_name), 0);
}

NodeIndex Network::node(std::string_view name) {
  if (auto found = find_node(name)) return *found;
  const NodeIndex idx = nodes_.size();
  nodes_.push_back(Node{std::string(name), NodeKind::Free, Pressure{}});
  node_lookup_.emplace(std::string(name), idx);
  return idx;
}

std::optional<NodeIndex> Network::find_node(std::string_view name) const {
  auto it = node_lookup_.find(std::string(name));
  if (it == node_lookup_.end()) return std::nullopt;
  return it->second;
}

NodeIndex Network::add_fixed(std::string_view name, Pressure p) {
  const NodeIndex n = node(name);
  set_fixed(n, p);
  return n;
}

NodeIndex Network::add_source(std::string_view name, Pressure p, double internal_resistance) {
  require_physical(p, "source '" + std::string(name) + "' pressure");
  if (!(internal_resistance >= 0.0)) {
    throw Error(ErrorCode::Domain, "source internal resistance must be non-negative");
  }
  if (internal_resistance == 0.0) return add_fixed(name, p);
  const std::string emf = std::string(name) + ".emf";
  const NodeIndex inner = add_fixed(emf, p);
  const NodeIndex out = node(name);
  add_resistor(std::string(name) + ".rint", inner, out, internal_resistance);
  return out;
}

void Network::claim_name(std::string_view kind, std::string_view name) {
  std::string key = std::string(kind) + ":" + std::string(name);
  if (!element_names_.emplace(std::move(key), 0).second) {
    throw Error(ErrorCode::InvalidNetwork,
                "duplicate " + std::string(kind) + " name '" + std::string(name) + "'");
  }
}

void Network::check_node(NodeIndex n, std::string_view who) const {
  if (n >= nodes_.size()) {
    throw Error(ErrorCode::InvalidNetwork, std::string(who) + " references a missing node");
  }
}

std::size_t Network::add_tube(std::string_view name, NodeIndex from, NodeIndex to, double length,
                              double diameter) {
  check_node(from, name);
  check_node(to, name);
  const double r = tube_resistance(length, diameter, viscosity_);
  claim_name("tube", name);
  tubes_.push_back(Tube{std::string(name), from, to, length, diameter, r});
  return tubes_.size() - 1;
}

std::size_t Network::add_resistor(std::string_view name, NodeIndex from, NodeIndex to,
                                  double resistance) {
  check_node(from, name);
  check_node(to, name);
  if (!(resistance >= 0.0) || !std::isfinite(resistance)) {
    throw Error(ErrorCode::Domain, "resistance must be finite and non-negative");
  }
  claim_name("tube", name);
  tubes_.push_back(Tube{std::string(name), from, to, 0.0, 0.0, resistance});
  return tubes_.size() - 1;
}

std::size_t Network::add_valve(KinkValve valve) {
  check_node(valve.flow_from, valve.name);
  check_node(valve.flow_to, valve.name);
  check_node(valve.control, valve.name);
  valve.thresholds.validate();
  if (!(valve.leak_conductance >= 0.0 && valve.open_conductance > valve.leak_conductance) ||
      !std::isfinite(valve.open_conductance)) {
    throw Error(ErrorCode::Domain, "valve '" + valve.name +
                                       "' needs open_conductance > leak_conductance >= 0");
  }
  claim_name("valve", valve.name);
  valves_.push_back(std::move(valve));
  return valves_.size() - 1;
}

std::size_t Network::add_balloon(Balloon balloon) {
  check_node(balloon.node, balloon.name);
  balloon.params.validate();
  if (balloon.initial.pa() < 0.0) {
    throw Error(ErrorCode::Domain, "balloon '" + balloon.name + "' initial pressure is negative");
  }
  claim_name("balloon", balloon.name);
  balloons_.push_back(std::move(balloon));
  return balloons_.size() - 1;
}

void Network::set_fixed(NodeIndex n, Pressure p) {
  check_node(n, "set_fixed");
  require_physical(p, "node '" + nodes_[n].name + "' pressure");
  if (n == atmosphere() && p.pa() != 0.0) {
    throw Error(ErrorCode::InvalidNetwork, "the atmosphere node is pinned at 0 kPa");
  }
  nodes_[n].kind = NodeKind::Fixed;
  nodes_[n].fixed = p;
}

void Network::set_free(NodeIndex n) {
  check_node(n, "set_free");
  if (n == atmosphere()) throw Error(ErrorCode::InvalidNetwork, "the atmosphere node is fixed");
  nodes_[n].kind = NodeKind::Free;
  nodes_[n].fixed = Pressure{};
}

std::optional<std::size_t> Network::find_valve(std::string_view name) const {
  for (std::size_t i = 0; i < valves_.size(); ++i) {
    if (valves_[i].name == name) return i;
  }
  return std::nullopt;
}

std::optional<std::size_t> Network::find_balloon_at(NodeIndex n) const {
  for (std::size_t i = 0; i < balloons_.size(); ++i) {
    if (balloons_[i].node == n) return i;
  }
  return std::nullopt;
}

void Network::validate() const {
  std::vector<int> balloon_count(nodes_.size(), 0);
  for (const auto& b : balloons_) {
    if (nodes_[b.node].kind == NodeKind::Fixed) {
      throw Error(ErrorCode::InvalidNetwork,
                  "balloon '" + b.name + "' sits on fixed node '" + nodes_[b.node].name + "'");
    }
    if (++balloon_count[b.node] > 1) {
      throw Error(ErrorCode::InvalidNetwork,
                  "more than one balloon on node '" + nodes_[b.node].name + "'");
    }
  }
  for (const auto& v : valves_) v.thresholds.validate();
  // Zero-resistance paths between two fixed nodes at different pressures are
  // shorts; the flow solver detects them while merging nodes.
}

}  // namespace tbl
