#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "tbl/netdom.hpp"

namespace tbl {

using NodeIndex = std::size_t;

enum class NodeKind { Free, Fixed };

struct Node {
  std::string name;
  NodeKind kind = NodeKind::Free;
  Pressure fixed;  // meaningful for Fixed nodes only
};

struct Tube {
  std::string name;
  NodeIndex from = 0;
  NodeIndex to = 0;
  double length = 0.0;    // m; 0 for lumped resistors without geometry
  double diameter = 0.0;  // m; 0 for lumped resistors without geometry
  double resistance = 0.0;  // Pa*s/m^3
};

/// Kink valve: a conductance between flow_from and flow_to that is switched by
/// the pressure at `control` (the balloon side).
struct KinkValve {
  std::string name;
  NodeIndex flow_from = 0;
  NodeIndex flow_to = 0;
  NodeIndex control = 0;
  HysteresisThresholds thresholds;
  double open_conductance = 1.0e-5;  // m^3/(Pa*s)
  double leak_conductance = 0.0;     // m^3/(Pa*s)
  ValveState initial = ValveState::Open;
};

/// A balloon is a compliance hung on a node. Its volume is the continuous
/// state of the transient model.
struct Balloon {
  std::string name;
  NodeIndex node = 0;
  BalloonParams params;
  Pressure initial;  // initial gauge pressure; 0 means slack at rest volume
};

double element_flow(const Tube& tube, Pressure p_from, Pressure p_to);
double element_flow(const KinkValve& valve, Pressure p_from, Pressure p_to, ValveState state);

class Network {
 public:
  explicit Network(std::string atmosphere_name = "ATM", double viscosity = kAirViscosity);

  NodeIndex atmosphere() const { return 0; }
  double viscosity() const { return viscosity_; }

  /// Returns the existing node of that name or creates a free one.
  NodeIndex node(std::string_view name);
  std::optional<NodeIndex> find_node(std::string_view name) const;

  /// Pins a node to a fixed gauge pressure (creating it if needed).
  NodeIndex add_fixed(std::string_view name, Pressure p);
  /// A pressure source. With a non-zero internal resistance the named node is
  /// free and fed from a hidden fixed node "<name>.emf".
  NodeIndex add_source(std::string_view name, Pressure p, double internal_resistance = 0.0);

  std::size_t add_tube(std::string_view name, NodeIndex from, NodeIndex to, double length,
                       double diameter);
  std::size_t add_resistor(std::string_view name, NodeIndex from, NodeIndex to,
                           double resistance);
  std::size_t add_valve(KinkValve valve);
  std::size_t add_balloon(Balloon balloon);

  void set_fixed(NodeIndex n, Pressure p);
  void set_free(NodeIndex n);

  const std::vector<Node>& nodes() const { return nodes_; }
  const std::vector<Tube>& tubes() const { return tubes_; }
  const std::vector<KinkValve>& valves() const { return valves_; }
  const std::vector<Balloon>& balloons() const { return balloons_; }
  std::vector<Tube>& tubes() { return tubes_; }
  std::vector<KinkValve>& valves() { return valves_; }
  std::vector<Balloon>& balloons() { return balloons_; }

  std::optional<std::size_t> find_valve(std::string_view name) const;
  std::optional<std::size_t> find_balloon_at(NodeIndex n) const;

  /// Checks every structural invariant; throws InvalidNetwork or Domain.
  void validate() const;

 private:
  void check_node(NodeIndex n, std::string_view who) const;
  void claim_name(std::string_view kind, std::string_view name);

  double viscosity_;
  std::vector<Node> nodes_;
  std::unordered_map<std::string, NodeIndex> node_lookup_;
  std::unordered_map<std::string, std::size_t> element_names_;
  std::vector<Tube> tubes_;
  std::vector<KinkValve> valves_;
  std::vector<Balloon> balloons_;
};

}  // namespace tbl
