#include <cstdio>

#include "tbl/verify.hpp"

namespace tbl {

LogicLevels LogicLevels::from(const HysteresisThresholds& th, Pressure supply) {
  LogicLevels l;
  l.drive_high = supply;
  l.read_high_min = th.inflate;
  l.read_low_max = th.deflate;
  return l;
}

void LogicLevels::validate() const {
  if (!(drive_low < read_low_max && read_low_max < read_high_min && read_high_min <= drive_high)) {
    throw Error(ErrorCode::Domain,
                "logic levels need drive_low < read_low_max < read_high_min <= drive_high");
  }
}

namespace {

NodeIndex require_node(const Network& net, const std::string& name, const char* role) {
  auto n = net.find_node(name);
  if (!n) throw Error(ErrorCode::UnboundPort, std::string(role) + " '" + name + "' is not a node of the circuit");
  return *n;
}

std::string describe_row(const std::vector<std::string>& names, const std::vector<bool>& bits) {
  std::string s;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) s += ",";
    s += names[i] + "=" + (bits[i] ? "1" : "0");
  }
  return s;
}

}  // namespace

TruthTable truth_table(const Network& net, const std::vector<std::string>& inputs,
                       const std::vector<std::string>& outputs, const LogicLevels& levels,
                       Execution exec) {
  levels.validate();
  if (outputs.empty()) throw Error(ErrorCode::UnboundPort, "a truth table needs at least one output");
  if (inputs.size() > 16) throw Error(ErrorCode::Domain, "at most 16 inputs are supported");
  std::vector<NodeIndex> in_nodes, out_nodes;
  for (const auto& name : inputs) in_nodes.push_back(require_node(net, name, "input"));
  for (const auto& name : outputs) out_nodes.push_back(require_node(net, name, "output"));

  const std::size_t n = inputs.size();
  const std::size_t rows = std::size_t{1} << n;
  TruthTable table;
  table.inputs = inputs;
  table.outputs = outputs;
  table.rows = map_indices<TruthRow>(
      rows,
      [&](std::size_t r) {
        TruthRow row;
        Network pinned = net;
        for (std::size_t j = 0; j < n; ++j) {
          const bool bit = (r >> (n - 1 - j)) & 1U;
          row.inputs.push_back(bit);
          pinned.set_fixed(in_nodes[j], bit ? levels.drive_high : levels.drive_low);
        }
        const SteadyState dc = dc_operating_point(pinned);
        for (std::size_t k = 0; k < out_nodes.size(); ++k) {
          const Pressure p = dc.pressure(out_nodes[k]);
          if (p >= levels.read_high_min) {
            row.outputs.push_back(true);
          } else if (p <= levels.read_low_max) {
            row.outputs.push_back(false);
          } else {
            char buf[160];
            std::snprintf(buf, sizeof buf, "output %s at %.3f kPa lies between %.3f and %.3f kPa",
                          outputs[k].c_str(), p.kpa(), levels.read_low_max.kpa(),
                          levels.read_high_min.kpa());
            throw Error(ErrorCode::IndeterminateLevel,
                        "row " + describe_row(inputs, row.inputs) + ": " + buf);
          }
          row.output_kpa.push_back(p.kpa());
        }
        return row;
      },
      exec);
  return table;
}

MatchReport check_against_boolean(const TruthTable& table, const BoolExpr& expr,
                                  std::size_t output) {
  if (output >= table.outputs.size()) throw Error(ErrorCode::UnboundPort, "no such output column");
  for (const auto& v : expr.variables()) {
    bool known = false;
    for (const auto& in : table.inputs) known = known || in == v;
    if (!known) {
      throw Error(ErrorCode::UnknownVariable,
                  "formula variable '" + v + "' is not an input of the truth table");
    }
  }
  MatchReport report;
  report.output = table.outputs[output];
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    std::map<std::string, bool> env;
    for (std::size_t j = 0; j < table.inputs.size(); ++j) env[table.inputs[j]] = table.rows[r].inputs[j];
    const bool want = expr.evaluate(env);
    report.expected.push_back(want);
    if (want != table.rows[r].outputs[output]) {
      report.pass = false;
      report.mismatched_rows.push_back(r);
    }
  }
  return report;
}

}  // namespace tbl
