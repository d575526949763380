#include <set>

#include "tbl/netlist.hpp"

namespace tbl {

namespace {

constexpr double kComplianceScale = 1e-9;   // mL/kPa -> m^3/Pa
constexpr double kConductanceScale = 1e-9;  // mL/(s*kPa) -> m^3/(Pa*s)
constexpr double kResistanceScale = 1e9;    // kPa*s/mL -> Pa*s/m^3

class Expander {
 public:
  Expander(const CircuitAst& ast, const Defaults& defaults) : ast_(ast), defaults_(defaults) {}

  Network run() {
    std::string atm = "ATM";
    for (const auto& st : ast_.statements) {
      if (st.kind == StatementKind::Atm) atm = st.id;
    }
    Network net(atm, defaults_.viscosity);
    for (const auto& st : ast_.statements) {
      if (st.kind != StatementKind::Source) continue;
      guarded(st, [&] {
        const double rint = number(st, "rint").value_or(0.0) * kResistanceScale;
        net.add_source(st.id, Pressure::from_pa(*number(st, "pressure")), rint);
        sources_.insert(st.id);
      });
    }
    for (const auto& st : ast_.statements) {
      guarded(st, [&] { add(net, st); });
    }
    return net;
  }

 private:
  template <class Fn>
  void guarded(const Statement& st, Fn&& fn) {
    try {
      fn();
    } catch (const Error& e) {
      if (e.where()) throw;
      throw Error(e.code(), std::string(keyword(st.kind)) + " '" + st.id + "': " + e.detail(), st.where);
    }
  }

  static std::optional<double> number(const Statement& st, const std::string& key) {
    const Value* v = st.find(key);
    if (!v) return std::nullopt;
    return std::get<Quantity>(*v).si();
  }

  static const IdentList* idents(const Statement& st, const std::string& key) {
    const Value* v = st.find(key);
    return v ? &std::get<IdentList>(*v) : nullptr;
  }

  static std::string port(const Statement& st, const std::string& key) {
    const IdentList* ids = idents(st, key);
    if (!ids) {
      throw Error(ErrorCode::UnboundPort, std::string(keyword(st.kind)) + " '" + st.id +
                                              "' has no '" + key + "' port", st.where);
    }
    return ids->front();
  }

  NodeIndex supply(Network& net, const Statement& st) const {
    const IdentList* ids = idents(st, "supply");
    if (!ids) {
      throw Error(ErrorCode::SupplyMissing, std::string(keyword(st.kind)) + " '" + st.id +
                                                "' has no supply", st.where);
    }
    if (!sources_.count(ids->front())) {
      throw Error(ErrorCode::SupplyMissing,
                  "supply '" + ids->front() + "' of '" + st.id + "' is not a declared source", st.where);
    }
    return net.node(ids->front());
  }

  GateParams gate_params(const Statement& st) const {
    GateParams p = defaults_.gate;
    if (auto v = number(st, "supply_len")) p.supply_len = *v;
    if (auto v = number(st, "ctl_len")) p.ctl_len = *v;
    if (auto v = number(st, "pd_len")) p.pd_len = *v;
    if (auto v = number(st, "tap_len")) p.tap_len = *v;
    if (auto v = number(st, "id")) p.diameter = *v;
    if (auto v = number(st, "inflate")) p.thresholds.inflate = Pressure::from_pa(*v);
    if (auto v = number(st, "deflate")) p.thresholds.deflate = Pressure::from_pa(*v);
    if (auto v = number(st, "burst")) p.balloon.burst = Pressure::from_pa(*v);
    if (auto v = number(st, "v0")) p.balloon.rest_volume = *v;
    if (auto v = number(st, "compliance")) p.balloon.compliance = *v * kComplianceScale;
    if (auto v = number(st, "g_open")) p.open_conductance = *v * kConductanceScale;
    if (auto v = number(st, "g_leak")) p.leak_conductance = *v * kConductanceScale;
    if (const IdentList* init = idents(st, "init")) {
      p.init = init->front() == "closed" ? ValveState::Closed : ValveState::Open;
    }
    return p;
  }

  void add(Network& net, const Statement& st) {
    switch (st.kind) {
      case StatementKind::Source:
      case StatementKind::Atm:
        return;
      case StatementKind::Tube: {
        const NodeIndex from = net.node(port(st, "from"));
        const NodeIndex to = net.node(port(st, "to"));
        net.add_tube(st.id, from, to, *number(st, "length"), *number(st, "id"));
        return;
      }
      case StatementKind::Balloon: {
        Balloon b;
        b.name = st.id;
        b.node = net.node(port(st, "at"));
        b.params = defaults_.gate.balloon;
        if (auto v = number(st, "v0")) b.params.rest_volume = *v;
        if (auto v = number(st, "compliance")) b.params.compliance = *v * kComplianceScale;
        if (auto v = number(st, "burst")) b.params.burst = Pressure::from_pa(*v);
        if (auto v = number(st, "p0")) b.initial = Pressure::from_pa(*v);
        net.add_balloon(std::move(b));
        return;
      }
      case StatementKind::Valve: {
        KinkValve v;
        v.name = st.id;
        v.flow_from = net.node(port(st, "from"));
        v.flow_to = net.node(port(st, "to"));
        v.control = net.node(port(st, "control"));
        const GateParams p = gate_params(st);
        v.thresholds = p.thresholds;
        v.open_conductance = p.open_conductance;
        v.leak_conductance = p.leak_conductance;
        v.initial = p.init;
        net.add_valve(std::move(v));
        return;
      }
      case StatementKind::Gate: {
        const GateType type = *st.gate;
        const IdentList* in = idents(st, "in");
        const std::size_t arity = type == GateType::Not ? 1 : 2;
        if (!in || in->size() != arity) {
          throw Error(ErrorCode::UnboundPort,
                      std::string(keyword(type)) + " gate '" + st.id + "' needs " +
                          std::to_string(arity) + " input" + (arity > 1 ? "s" : "") + " in 'in='",
                      st.where);
        }
        const NodeIndex out = net.node(port(st, "out"));
        const NodeIndex sup = supply(net, st);
        const GateParams p = gate_params(st);
        std::vector<NodeIndex> ins;
        for (const auto& name : *in) ins.push_back(net.node(name));
        switch (type) {
          case GateType::Not: add_not_gate(net, st.id, ins[0], out, sup, p); break;
          case GateType::Nor: add_nor_gate(net, st.id, ins[0], ins[1], out, sup, p); break;
          case GateType::Nand: add_nand_gate(net, st.id, ins[0], ins[1], out, sup, p); break;
          case GateType::And: add_and_gate(net, st.id, ins[0], ins[1], out, sup, p); break;
          case GateType::Or: add_or_gate(net, st.id, ins[0], ins[1], out, sup, p); break;
        }
        return;
      }
      case StatementKind::Ring: {
        const Decimal n = std::get<Quantity>(*st.find("n")).value;
        const double stages = n.to_double();
        if (stages < 3 || static_cast<long>(stages) % 2 == 0) {
          throw Error(ErrorCode::EvenRing,
                      "ring '" + st.id + "' has n=" + n.to_string() +
                          "; a ring oscillator needs an odd number of stages >= 3",
                      st.where);
        }
        const NodeIndex sup = supply(net, st);
        std::vector<std::string> taps;
        if (const IdentList* t = idents(st, "taps")) taps = *t;
        PulldownMode mode = PulldownMode::PerGate;
        if (const IdentList* m = idents(st, "pulldown"); m && m->front() == "central") {
          mode = PulldownMode::Central;
        }
        add_ring(net, st.id, static_cast<int>(stages), sup, taps, gate_params(st), mode);
        return;
      }
      case StatementKind::Probe:
        if (!net.find_node(st.id)) {
          throw Error(ErrorCode::UnboundPort, "probe '" + st.id + "' names a node nothing connects to",
                      st.where);
        }
        return;
    }
  }

  const CircuitAst& ast_;
  const Defaults& defaults_;
  std::set<std::string> sources_;
};

}  // namespace

Network expand(const CircuitAst& ast, const Defaults& defaults) {
  Network net = Expander(ast, defaults).run();
  net.validate();
  return net;
}

std::vector<std::string> declared_probes(const CircuitAst& ast) {
  std::vector<std::string> out;
  for (const auto& st : ast.statements) {
    if (st.kind == StatementKind::Probe) out.push_back(st.id);
  }
  return out;
}

}  // namespace tbl
