#include <algorithm>
#include <cstdint>
#include <set>

#include "tbl/engine.hpp"
#include "tbl/flow_solver.hpp"

namespace tbl {

namespace {

std::vector<ValveState> step_all(const Network& net, std::span<const ValveState> states,
                                 std::span<const double> node_pa) {
  std::vector<ValveState> next(states.begin(), states.end());
  for (std::size_t i = 0; i < next.size(); ++i) {
    const auto& v = net.valves()[i];
    next[i] = valve_step(states[i], Pressure::from_pa(node_pa[v.control]), v.thresholds);
  }
  return next;
}

std::vector<ValveState> from_mask(std::size_t n, std::uint64_t mask) {
  std::vector<ValveState> s(n, ValveState::Open);
  for (std::size_t i = 0; i < n; ++i) {
    if (mask & (std::uint64_t{1} << i)) s[i] = ValveState::Closed;
  }
  return s;
}

void collect_warnings(const Network& net, SteadyState& out) {
  for (const auto& b : net.balloons()) {
    if (Pressure::from_pa(out.node_pa[b.node]) > b.params.burst) {
      out.warnings.push_back("balloon '" + b.name + "' above burst pressure (" +
                             diag_number(out.node_pa[b.node] * 1e-3) + " kPa)");
    }
  }
}

}  // namespace

std::vector<double> steady_pressures(const Network& net, std::span<const ValveState> states) {
  FlowSolver solver(net, SolveMode::SteadyState);
  solver.configure(states);
  return solver.solve();
}

SteadyState dc_operating_point(const Network& net, const DcOptions& options) {
  FlowSolver solver(net, SolveMode::SteadyState);
  const std::size_t n = net.valves().size();

  std::vector<ValveState> states;
  if (options.initial) {
    if (options.initial->size() != n) {
      throw Error(ErrorCode::InvalidNetwork, "initial valve state vector has the wrong length");
    }
    states = *options.initial;
  } else {
    for (const auto& v : net.valves()) states.push_back(v.initial);
  }

  SteadyState result;
  std::vector<double> node_pa;

  // Synchronous re-evaluation from the given start.
  std::set<std::vector<ValveState>> visited;
  for (int it = 0; it < options.max_iterations; ++it) {
    solver.configure(states);
    solver.solve({}, node_pa);
    auto next = step_all(net, states, node_pa);
    if (next == states) {
      result.valve_states = states;
      result.node_pa = node_pa;
      result.converged = true;
      result.reached_by_iteration = true;
      break;
    }
    if (!visited.insert(states).second) break;  // cycling
    states = std::move(next);
  }

  const bool enumerate =
      (!result.converged && n <= options.enumeration_limit) ||
      (result.converged && n <= options.list_all_limit);
  if (!result.converged && n > options.enumeration_limit) {
    throw Error(ErrorCode::TooManyValves,
                "synchronous iteration did not settle and " + std::to_string(n) +
                    " valves exceed the enumeration limit of " +
                    std::to_string(options.enumeration_limit));
  }
  if (enumerate) {
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      auto candidate = from_mask(n, mask);
      solver.configure(candidate);
      solver.solve({}, node_pa);
      if (step_all(net, candidate, node_pa) != candidate) continue;
      if (!result.converged) {
        result.valve_states = candidate;
        result.node_pa = node_pa;
        result.converged = true;
      }
      result.fixed_points.push_back(std::move(candidate));
    }
  }
  if (!result.converged) {
    throw Error(ErrorCode::AstableCircuit,
                "no self-consistent valve assignment exists among " +
                    std::to_string(std::uint64_t{1} << n) + " candidates");
  }
  collect_warnings(net, result);
  return result;
}

}  // namespace tbl
