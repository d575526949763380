#include "tbl/flow_solver.hpp"

#include <numeric>
#include <queue>

#include "tbl/error.hpp"

namespace tbl {

namespace {

struct DisjointSets {
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent[std::max(a, b)] = std::min(a, b);
  }
  std::vector<std::size_t> parent;
};

constexpr long kImposed = -1;
constexpr long kIsolated = -2;

}  // namespace

FlowSolver::FlowSolver(const Network& net, SolveMode mode) : net_(&net), mode_(mode) {
  net.validate();
  const auto& nodes = net.nodes();
  DisjointSets sets(nodes.size());
  for (const auto& t : net.tubes()) {
    if (t.resistance == 0.0) sets.unite(t.from, t.to);
  }

  // Dense supernode numbering in node order keeps everything deterministic.
  super_of_.assign(nodes.size(), 0);
  std::vector<long> root_to_super(nodes.size(), -1);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const std::size_t root = sets.find(n);
    if (root_to_super[root] < 0) root_to_super[root] = static_cast<long>(super_count_++);
    super_of_[n] = static_cast<std::size_t>(root_to_super[root]);
  }

  super_fixed_.assign(super_count_, -1);
  super_balloon_.assign(super_count_, -1);
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    if (nodes[n].kind != NodeKind::Fixed) continue;
    int& rep = super_fixed_[super_of_[n]];
    if (rep >= 0 && nodes[static_cast<std::size_t>(rep)].fixed != nodes[n].fixed) {
      throw Error(ErrorCode::InvalidNetwork,
                  "fixed nodes '" + nodes[static_cast<std::size_t>(rep)].name + "' and '" +
                      nodes[n].name + "' are shorted by a zero-resistance path");
    }
    if (rep < 0) rep = static_cast<int>(n);
  }
  if (mode_ == SolveMode::Transient) {
    const auto& balloons = net.balloons();
    for (std::size_t b = 0; b < balloons.size(); ++b) {
      const std::size_t s = super_of_[balloons[b].node];
      if (super_fixed_[s] >= 0) {
        throw Error(ErrorCode::InvalidNetwork,
                    "balloon '" + balloons[b].name + "' is shorted to a fixed node");
      }
      if (super_balloon_[s] >= 0) {
        throw Error(ErrorCode::InvalidNetwork,
                    "balloon '" + balloons[b].name + "' is shorted to another balloon");
      }
      super_balloon_[s] = static_cast<int>(b);
    }
  }

  for (std::size_t i = 0; i < net.tubes().size(); ++i) {
    const auto& t = net.tubes()[i];
    const std::size_t a = super_of_[t.from], b = super_of_[t.to];
    if (t.resistance > 0.0 && a != b) edges_.push_back(Edge{a, b, false, i});
  }
  for (std::size_t i = 0; i < net.valves().size(); ++i) {
    const auto& v = net.valves()[i];
    const std::size_t a = super_of_[v.flow_from], b = super_of_[v.flow_to];
    if (a != b) edges_.push_back(Edge{a, b, true, i});
  }

  balloon_edges_.resize(net.balloons().size());
  for (std::size_t bi = 0; bi < net.balloons().size(); ++bi) {
    const std::size_t s = super_of_[net.balloons()[bi].node];
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      if (edges_[e].a == s) balloon_edges_[bi].emplace_back(e, +1);
      if (edges_[e].b == s) balloon_edges_[bi].emplace_back(e, -1);
    }
  }

  std::vector<ValveState> initial;
  initial.reserve(net.valves().size());
  for (const auto& v : net.valves()) initial.push_back(v.initial);
  configure(initial);
}

double FlowSolver::edge_conductance(const Edge& e) const {
  if (!e.is_valve) return 1.0 / net_->tubes()[e.element].resistance;
  const auto& v = net_->valves()[e.element];
  return states_[e.element] == ValveState::Open ? v.open_conductance : v.leak_conductance;
}

void FlowSolver::configure(std::span<const ValveState> states) {
  if (states.size() != net_->valves().size()) {
    throw Error(ErrorCode::InvalidNetwork, "valve state vector has the wrong length");
  }
  states_.assign(states.begin(), states.end());

  // Reachability from imposed supernodes through conducting edges.
  std::vector<std::vector<std::pair<std::size_t, double>>> adjacency(super_count_);
  for (const auto& e : edges_) {
    const double g = edge_conductance(e);
    if (g <= 0.0) continue;
    adjacency[e.a].emplace_back(e.b, g);
    adjacency[e.b].emplace_back(e.a, g);
  }
  unknown_of_.assign(super_count_, kIsolated);
  std::queue<std::size_t> frontier;
  for (std::size_t s = 0; s < super_count_; ++s) {
    if (super_fixed_[s] >= 0 || super_balloon_[s] >= 0) {
      unknown_of_[s] = kImposed;
      frontier.push(s);
    }
  }
  std::vector<bool> seen(super_count_, false);
  while (!frontier.empty()) {
    const std::size_t s = frontier.front();
    frontier.pop();
    if (seen[s]) continue;
    seen[s] = true;
    for (const auto& [t, g] : adjacency[s]) {
      if (!seen[t]) frontier.push(t);
    }
  }
  unknown_count_ = 0;
  for (std::size_t s = 0; s < super_count_; ++s) {
    if (unknown_of_[s] == kIsolated && seen[s]) unknown_of_[s] = static_cast<long>(unknown_count_++);
  }

  boundary_.clear();
  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& e : edges_) {
    const double g = edge_conductance(e);
    if (g <= 0.0) continue;
    const long ua = unknown_of_[e.a], ub = unknown_of_[e.b];
    if (ua >= 0) triplets.emplace_back(ua, ua, g);
    if (ub >= 0) triplets.emplace_back(ub, ub, g);
    if (ua >= 0 && ub >= 0) {
      triplets.emplace_back(ua, ub, -g);
      triplets.emplace_back(ub, ua, -g);
    } else if (ua >= 0 && ub == kImposed) {
      boundary_.push_back(Boundary{static_cast<std::size_t>(ua), e.b, g});
    } else if (ub >= 0 && ua == kImposed) {
      boundary_.push_back(Boundary{static_cast<std::size_t>(ub), e.a, g});
    }
  }

  const auto n = static_cast<Eigen::Index>(unknown_count_);
  rhs_.resize(n);
  x_.resize(n);
  if (n == 0) return;
  Eigen::SparseMatrix<double> g_matrix(n, n);
  g_matrix.setFromTriplets(triplets.begin(), triplets.end());
  ldlt_.compute(g_matrix);
  if (ldlt_.info() != Eigen::Success) {
    throw Error(ErrorCode::Singular, "conductance matrix could not be factorized");
  }
}

double FlowSolver::imposed_pressure(std::size_t super, std::span<const double> balloon_pa) const {
  if (super_fixed_[super] >= 0) {
    return net_->nodes()[static_cast<std::size_t>(super_fixed_[super])].fixed.pa();
  }
  return balloon_pa[static_cast<std::size_t>(super_balloon_[super])];
}

void FlowSolver::solve(std::span<const double> balloon_pa, std::vector<double>& node_pa) const {
  if (mode_ == SolveMode::Transient && balloon_pa.size() != net_->balloons().size()) {
    throw Error(ErrorCode::InvalidNetwork, "balloon pressure vector has the wrong length");
  }
  if (unknown_count_ > 0) {
    rhs_.setZero();
    for (const auto& b : boundary_) {
      rhs_[static_cast<Eigen::Index>(b.unknown)] += b.conductance * imposed_pressure(b.super, balloon_pa);
    }
    x_ = ldlt_.solve(rhs_);
    if (!x_.allFinite()) throw Error(ErrorCode::Singular, "flow-balance solve produced non-finite pressures");
  }
  const std::size_t count = net_->nodes().size();
  node_pa.resize(count);
  for (std::size_t node = 0; node < count; ++node) {
    const std::size_t s = super_of_[node];
    const long u = unknown_of_[s];
    if (u >= 0) {
      node_pa[node] = x_[u];
    } else if (u == kImposed) {
      node_pa[node] = imposed_pressure(s, balloon_pa);
    } else {
      node_pa[node] = 0.0;
    }
  }
}

std::vector<double> FlowSolver::solve(std::span<const double> balloon_pa) const {
  std::vector<double> out;
  solve(balloon_pa, out);
  return out;
}

void FlowSolver::balloon_inflows(std::span<const double> node_pa, std::vector<double>& inflow) const {
  const auto& balloons = net_->balloons();
  inflow.assign(balloons.size(), 0.0);
  // Pressures per supernode are read from any member node.
  std::vector<double> super_pa(super_count_, 0.0);
  for (std::size_t n = 0; n < node_pa.size(); ++n) super_pa[super_of_[n]] = node_pa[n];
  for (std::size_t b = 0; b < balloons.size(); ++b) {
    double q = 0.0;
    for (const auto& [e, sign] : balloon_edges_[b]) {
      const Edge& edge = edges_[e];
      const double g = edge_conductance(edge);
      // flow from b-side into a-side is g*(pb - pa)
      q += sign * g * (super_pa[edge.b] - super_pa[edge.a]);
    }
    inflow[b] = q;
  }
}

bool FlowSolver::is_isolated(NodeIndex n) const { return unknown_of_[super_of_[n]] == kIsolated; }

}  // namespace tbl
