#pragma once

// Reference computations used by the tests. None of these call into the
// solver paths they are compared against.

#include <span>
#include <string>
#include <vector>

#include "tbl/network.hpp"
#include "tbl/netlist.hpp"

namespace tbl::oracle {

/// Hagen-Poiseuille, written out independently of netdom.
double poiseuille(double length, double diameter, double viscosity = 1.81e-5);

/// Output of a NOT gate whose valve is open: supply tube, valve and pull-down
/// in series, output taken across the pull-down.
double not_gate_high_kpa(double supply_kpa, double r_supply, double r_valve, double r_pulldown);

/// Source resistance that puts the one-load fan-out control node at
/// `target_kpa`. Driver and load have identical branches R + r_v + 2R.
double fanout_rint_for(double target_kpa, double supply_kpa, double r_tube, double r_valve);

/// Dense nodal analysis by Gaussian elimination with partial pivoting.
/// Balloons carry no flow; all tubes must have positive resistance. Nodes with
/// no path to a fixed node come back as 0.
std::vector<double> dense_nodal(const Network& net, std::span<const ValveState> states);

/// First-order charge of a balloon through resistance R from a fixed source.
double rc_charge(double p_source, double r, double c, double t);

double trapezoid(std::span<const double> t, std::span<const double> y);

std::string read_file(const std::string& path);
CircuitAst load_circuit(const std::string& name);  // from the circuits/ directory

}  // namespace tbl::oracle
