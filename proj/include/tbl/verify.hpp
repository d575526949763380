#pragma once

// Logic-level checks on expanded networks: truth tables at DC, comparison
// against a Boolean formula, and the pull-down fan-out budget.

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "tbl/engine.hpp"
#include "tbl/macros.hpp"
#include "tbl/netlist.hpp"

namespace tbl {

struct LogicLevels {
  Pressure drive_high = Pressure::from_kpa(145.0);
  Pressure drive_low;
  Pressure read_high_min = Pressure::from_kpa(85.0);
  Pressure read_low_max = Pressure::from_kpa(60.0);

  /// Read thresholds follow the valve thresholds, drive high the supply.
  static LogicLevels from(const HysteresisThresholds& th, Pressure supply);

  void validate() const;
};

struct TruthRow {
  std::vector<bool> inputs;
  std::vector<bool> outputs;
  std::vector<double> output_kpa;
};

/// Rows in ascending binary order of the inputs, first input most significant.
struct TruthTable {
  std::vector<std::string> inputs;
  std::vector<std::string> outputs;
  std::vector<TruthRow> rows;
};

/// Pins every input node to drive_high/drive_low and classifies the outputs
/// of the DC operating point. With no inputs the table has a single row. Throws IndeterminateLevel (naming the row and
/// pressure), UnboundPort for unknown nodes, and whatever the DC solver throws.
TruthTable truth_table(const Network& net, const std::vector<std::string>& inputs,
                       const std::vector<std::string>& outputs, const LogicLevels& levels = {},
                       Execution exec = Execution::Parallel);

// ---------------------------------------------------------------------------
// Boolean formulas

/// `!`/`~` not, `&`/`*` and, `^` xor, `|`/`+` or (in increasing order of
/// looseness), parentheses, constants 0 and 1, identifiers as variables.
class BoolExpr {
 public:
  /// Throws SyntaxError with the column of the offending character.
  static BoolExpr parse(std::string_view text);

  bool evaluate(const std::map<std::string, bool>& env) const;
  /// Distinct variables, sorted.
  std::vector<std::string> variables() const;
  const std::string& text() const { return text_; }

  struct Node;

 private:
  std::string text_;
  std::shared_ptr<const Node> root_;
};

struct MatchReport {
  bool pass = true;
  std::string output;
  std::vector<std::size_t> mismatched_rows;  // indices into table.rows
  std::vector<bool> expected;                // one per row
};

/// Throws UnknownVariable if the formula names something that is not a
/// table input.
MatchReport check_against_boolean(const TruthTable& table, const BoolExpr& expr,
                                  std::size_t output = 0);

// ---------------------------------------------------------------------------
// Fan-out

struct FanoutSource {
  Pressure pressure = Pressure::from_kpa(145.0);
  double internal_resistance = 0.0;  // Pa*s/m^3
};

struct FanoutPoint {
  std::size_t gates = 0;
  double control_kpa = 0.0;
  bool drivable = false;
};

struct FanoutReport {
  /// Greatest N whose control pressure clears read_high_min; equals `cap`
  /// when `unbounded`.
  std::size_t max_gates = 0;
  bool unbounded = false;
  std::size_t cap = 1024;
  std::vector<FanoutPoint> points;  // ascending N
};

/// One NOT gate with its input held low drives the control inputs of `loads`
/// NOT gates. Every gate hangs off the same source. Node "drv.out" is the
/// driver output and "load<k>.ctl" the k-th load's balloon node.
Network fanout_network(const GateParams& gate, const FanoutSource& source, std::size_t loads,
                       double viscosity = kAirViscosity);

/// DC control pressure at the loads with every valve still open, i.e. before
/// any load has switched. This is the worst case for the driver.
double fanout_control_kpa(const GateParams& gate, const FanoutSource& source, std::size_t loads,
                          double viscosity = kAirViscosity);

FanoutReport fanout_limit(const GateParams& gate, const FanoutSource& source,
                          const LogicLevels& levels, std::size_t cap = 1024,
                          Execution exec = Execution::Parallel, double viscosity = kAirViscosity);

}  // namespace tbl
