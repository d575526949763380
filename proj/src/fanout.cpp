#include <algorithm>
#include <map>

#include "tbl/verify.hpp"

namespace tbl {

Network fanout_network(const GateParams& gate, const FanoutSource& source, std::size_t loads,
                       double viscosity) {
  Network net("ATM", viscosity);
  const NodeIndex sup = net.add_source("SUP", source.pressure, source.internal_resistance);
  const NodeIndex in = net.add_fixed("drv.in", Pressure{});
  const NodeIndex drv = net.node("drv.out");
  add_not_gate(net, "drv", in, drv, sup, gate);
  for (std::size_t k = 1; k <= loads; ++k) {
    const std::string id = "load" + std::to_string(k);
    add_not_gate(net, id, drv, net.node(id + ".q"), sup, gate);
  }
  return net;
}

double fanout_control_kpa(const GateParams& gate, const FanoutSource& source, std::size_t loads,
                          double viscosity) {
  const Network net = fanout_network(gate, source, loads, viscosity);
  const std::vector<ValveState> open(net.valves().size(), ValveState::Open);
  const auto pa = steady_pressures(net, open);
  const auto ctl = net.find_node(loads ? "load1.ctl" : "drv.out");
  return pa.at(*ctl) * 1e-3;
}

FanoutReport fanout_limit(const GateParams& gate, const FanoutSource& source,
                          const LogicLevels& levels, std::size_t cap, Execution exec,
                          double viscosity) {
  if (!(source.pressure > Pressure{})) throw Error(ErrorCode::Domain, "source pressure must be positive");
  if (!(source.internal_resistance >= 0.0)) {
    throw Error(ErrorCode::Domain, "source internal resistance must be non-negative");
  }
  if (cap < 1) throw Error(ErrorCode::Domain, "fan-out cap must be at least 1");
  levels.validate();

  std::map<std::size_t, double> probed;
  auto evaluate = [&](const std::vector<std::size_t>& ns) {
    const auto kpa = map_indices<double>(
        ns.size(), [&](std::size_t i) { return fanout_control_kpa(gate, source, ns[i], viscosity); },
        exec);
    for (std::size_t i = 0; i < ns.size(); ++i) probed[ns[i]] = kpa[i];
  };
  const double threshold = levels.read_high_min.kpa();

  // Doubling sweep, all points at once.
  std::vector<std::size_t> sweep;
  for (std::size_t n = 1; n < cap; n *= 2) sweep.push_back(n);
  sweep.push_back(cap);
  evaluate(sweep);

  FanoutReport report;
  report.cap = cap;
  std::size_t good = 0, bad = 0;
  for (std::size_t n : sweep) {
    if (probed[n] >= threshold) {
      good = n;
    } else {
      bad = n;
      break;
    }
  }
  if (bad == 0) {
    report.unbounded = true;
    report.max_gates = cap;
  } else {
    while (bad - good > 1) {
      const std::size_t mid = good + (bad - good) / 2;
      evaluate({mid});
      (probed[mid] >= threshold ? good : bad) = mid;
    }
    report.max_gates = good;
  }
  for (const auto& [n, kpa] : probed) report.points.push_back({n, kpa, kpa >= threshold});
  return report;
}

}  // namespace tbl
