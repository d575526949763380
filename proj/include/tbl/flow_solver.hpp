#pragma once

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <cstddef>
#include <span>
#include <vector>

#include "tbl/network.hpp"

namespace tbl {

/// How balloons enter the algebraic solve. In SteadyState they are ordinary
/// free nodes (no flow at DC); in Transient their pressure is imposed from the
/// current volume and the remaining nodes are solved around them.
enum class SolveMode { SteadyState, Transient };

/// Linear resistive solve for node pressures at a fixed valve configuration.
///
/// Zero-resistance tubes merge their endpoints into one supernode. Free
/// supernodes with no conducting path to any imposed pressure are isolated
/// pockets; they are reported at 0 Pa and carry no flow. The factorization is
/// reused across right-hand sides until the next configure(). Instances keep
/// scratch buffers and must not be shared between threads.
class FlowSolver {
 public:
  FlowSolver(const Network& net, SolveMode mode);

  /// Refactorizes for the given valve states. Throws Singular if the
  /// reduced conductance matrix cannot be factorized.
  void configure(std::span<const ValveState> states);

  /// Node pressures (Pa) for the current configuration. `balloon_pa` holds one
  /// pressure per balloon and is ignored in SteadyState mode.
  void solve(std::span<const double> balloon_pa, std::vector<double>& node_pa) const;
  std::vector<double> solve(std::span<const double> balloon_pa = {}) const;

  /// Net volumetric inflow (m^3/s) into each balloon's node.
  void balloon_inflows(std::span<const double> node_pa, std::vector<double>& inflow) const;

  const Network& network() const { return *net_; }
  std::span<const ValveState> states() const { return states_; }
  bool is_isolated(NodeIndex n) const;

 private:
  struct Edge {
    std::size_t a;  // supernode ids
    std::size_t b;
    bool is_valve;
    std::size_t element;
  };
  struct Boundary {
    std::size_t unknown;
    std::size_t super;
    double conductance;
  };

  double edge_conductance(const Edge& e) const;
  double imposed_pressure(std::size_t super, std::span<const double> balloon_pa) const;

  const Network* net_;
  SolveMode mode_;
  std::vector<std::size_t> super_of_;       // node -> supernode
  std::size_t super_count_ = 0;
  std::vector<int> super_fixed_;            // supernode -> representative fixed node or -1
  std::vector<int> super_balloon_;          // supernode -> balloon index or -1 (Transient)
  std::vector<Edge> edges_;
  std::vector<ValveState> states_;

  std::vector<long> unknown_of_;            // supernode -> unknown index, -1 imposed, -2 isolated
  std::size_t unknown_count_ = 0;
  std::vector<Boundary> boundary_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt_;
  mutable Eigen::VectorXd rhs_;
  mutable Eigen::VectorXd x_;

  // per balloon: (edge index, +1 if the balloon sits on edge.a else -1)
  std::vector<std::vector<std::pair<std::size_t, int>>> balloon_edges_;
};

}  // namespace tbl
