#include "tbl/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "tbl/defaults.hpp"
#include "tbl/engine.hpp"
#include "tbl/netlist_keys.hpp"
#include "tbl/trace_io.hpp"
#include "tbl/verify.hpp"

namespace tbl {

void apply_override(CircuitAst& ast, std::string_view assignment) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string_view::npos || dot == std::string_view::npos || dot > eq) {
    throw Error(ErrorCode::SyntaxError,
                "override '" + std::string(assignment) + "' is not of the form <id>.<key>=<value>");
  }
  const std::string id(assignment.substr(0, dot));
  const std::string key(assignment.substr(dot + 1, eq - dot - 1));
  const std::string_view text = assignment.substr(eq + 1);

  bool matched_id = false, applied = false;
  for (auto& st : ast.statements) {
    const bool wildcard = id == "*";
    if (wildcard ? !(st.kind == StatementKind::Gate || st.kind == StatementKind::Ring) : st.id != id) {
      continue;
    }
    matched_id = true;
    if (!find_key(st.kind, key)) continue;
    st.params[key] = parse_value(st.kind, key, text);
    applied = true;
  }
  if (!matched_id) throw Error(ErrorCode::UnboundPort, "override names unknown instance '" + id + "'");
  if (!applied) throw Error(ErrorCode::UnknownKeyword, "'" + id + "' has no parameter '" + key + "'");
}

namespace {

// Unwinds a command with its exit code after the diagnostic is printed.
struct Exit {
  int code;
};

std::string diagnostic(const std::string& file, const Error& e) {
  std::string s = file;
  if (e.where()) s += ":" + std::to_string(e.where()->line) + ":" + std::to_string(e.where()->column);
  return s + ": " + std::string(to_string(e.code())) + ": " + e.detail();
}

std::string fmt(double x, int digits = 3) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  return buf;
}

enum class Format { Text, Csv, JsonLines };

struct Session {
  std::ostream& out;
  std::ostream& err;
  Format format = Format::Text;
  std::vector<std::string> overrides;
  std::string file;

  [[noreturn]] void fail(int code, const std::string& message) {
    err << message << '\n';
    throw Exit{code};
  }

  template <class Fn>
  auto guard(int code, Fn&& fn) -> decltype(fn()) {
    try {
      return fn();
    } catch (const Error& e) {
      fail(code, diagnostic(file, e));
    }
  }

  CircuitAst load_ast() {
    std::ifstream in(file, std::ios::binary);
    if (!in) fail(kExitUsage, file + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    CircuitAst ast = guard(kExitStatic, [&] { return parse(ss.str()); });
    for (const auto& o : overrides) {
      try {
        apply_override(ast, o);
      } catch (const Error& e) {
        fail(kExitUsage, "--set " + o + ": " + std::string(to_string(e.code())) + ": " + e.detail());
      }
    }
    return ast;
  }

  Defaults defaults() {
    try {
      return defaults_from_env();
    } catch (const Error& e) {
      fail(kExitUsage, "TBL_DEFAULTS: " + e.detail());
    }
  }

  Network build(const CircuitAst& ast, const Defaults& d) {
    return guard(kExitStatic, [&] { return expand(ast, d); });
  }

  std::vector<std::string> probes_or_declared(const std::vector<std::string>& given,
                                              const CircuitAst& ast, const Network& net) {
    std::vector<std::string> probes = given.empty() ? declared_probes(ast) : given;
    if (probes.empty()) fail(kExitUsage, file + ": no probes; add probe statements or pass --probe");
    for (const auto& p : probes) {
      if (!net.find_node(p)) fail(kExitUsage, "--probe " + p + ": not a node of the circuit");
    }
    return probes;
  }
};

Pressure supply_pressure(const CircuitAst& ast) {
  for (const auto& st : ast.statements) {
    if (st.kind != StatementKind::Source) continue;
    if (const Value* v = st.find("pressure")) return Pressure::from_pa(std::get<Quantity>(*v).si());
  }
  return Pressure::from_kpa(145.0);
}

int cmd_sim(Session& s, double t_end, const std::vector<std::string>& probe_flags,
            const std::string& out_path, const std::string& svg_path) {
  const CircuitAst ast = s.load_ast();
  const Defaults d = s.defaults();
  const Network net = s.build(ast, d);
  SimConfig cfg;
  cfg.t_end = t_end;
  cfg.probes = s.probes_or_declared(probe_flags, ast, net);
  const Trace trace = s.guard(kExitAnalysis, [&] { return simulate(net, cfg); });
  for (const auto& w : trace.warnings) s.err << s.file << ": warning: " << w << '\n';

  std::ofstream file_out;
  if (!out_path.empty()) {
    file_out.open(out_path, std::ios::binary);
    if (!file_out) s.fail(kExitUsage, out_path + ": cannot write");
  }
  std::ostream& sink = out_path.empty() ? s.out : file_out;
  if (s.format == Format::JsonLines) {
    for (std::size_t i = 0; i < trace.time.size(); ++i) {
      nlohmann::ordered_json row;
      row["time_s"] = trace.time[i];
      for (std::size_t p = 0; p < trace.probes.size(); ++p) {
        row[trace.probes[p] + "_kPa"] = trace.pressure_kpa[i][p];
      }
      sink << row.dump() << '\n';
    }
  } else {
    write_csv(sink, trace);
  }
  if (!svg_path.empty()) {
    std::ofstream svg(svg_path, std::ios::binary);
    if (!svg) s.fail(kExitUsage, svg_path + ": cannot write");
    write_svg(svg, trace, s.file);
  }
  return kExitOk;
}

int cmd_truth(Session& s, const std::vector<std::string>& inputs,
              const std::vector<std::string>& output_flags, const std::string& expect) {
  const CircuitAst ast = s.load_ast();
  const Defaults d = s.defaults();
  const Network net = s.build(ast, d);
  const std::vector<std::string> outputs = output_flags.empty() ? declared_probes(ast) : output_flags;
  if (outputs.empty()) s.fail(kExitUsage, s.file + ": no outputs; pass --outputs or declare probes");
  for (const auto& name : inputs) {
    if (!net.find_node(name)) s.fail(kExitUsage, "--inputs " + name + ": not a node of the circuit");
  }
  for (const auto& name : outputs) {
    if (!net.find_node(name)) s.fail(kExitUsage, "--outputs " + name + ": not a node of the circuit");
  }

  std::optional<BoolExpr> formula;
  if (!expect.empty()) {
    try {
      formula = BoolExpr::parse(expect);
      for (const auto& v : formula->variables()) {
        if (std::find(inputs.begin(), inputs.end(), v) == inputs.end()) {
          throw Error(ErrorCode::UnknownVariable, "'" + v + "' is not one of --inputs");
        }
      }
    } catch (const Error& e) {
      s.fail(kExitUsage, "--expect: " + std::string(to_string(e.code())) + ": " + e.detail());
    }
  }

  const LogicLevels levels = LogicLevels::from(d.gate.thresholds, supply_pressure(ast));
  const TruthTable table = s.guard(kExitAnalysis, [&] { return truth_table(net, inputs, outputs, levels); });
  std::optional<MatchReport> match;
  if (formula) match = check_against_boolean(table, *formula);

  auto row_label = [&](std::size_t r) {
    std::string l;
    for (std::size_t j = 0; j < table.inputs.size(); ++j) {
      l += (j ? "," : "") + table.inputs[j] + "=" + (table.rows[r].inputs[j] ? "1" : "0");
    }
    return l.empty() ? std::string("(no inputs)") : l;
  };

  switch (s.format) {
    case Format::Text: {
      std::string head;
      for (const auto& in : table.inputs) head += in + " ";
      head += "|";
      for (const auto& o : table.outputs) head += " " + o;
      head += " |";
      for (const auto& o : table.outputs) head += " " + o + "[kPa]";
      s.out << head << '\n';
      for (const auto& row : table.rows) {
        std::string line;
        for (std::size_t j = 0; j < row.inputs.size(); ++j) {
          line += std::string(row.inputs[j] ? "1" : "0") + std::string(table.inputs[j].size(), ' ');
        }
        line += "|";
        for (std::size_t k = 0; k < row.outputs.size(); ++k) {
          line += " " + std::string(row.outputs[k] ? "1" : "0") +
                  std::string(table.outputs[k].size() - 1, ' ');
        }
        line += " |";
        for (double p : row.output_kpa) line += " " + fmt(p);
        s.out << line << '\n';
      }
      break;
    }
    case Format::Csv: {
      std::string head;
      for (const auto& in : table.inputs) head += in + ",";
      for (const auto& o : table.outputs) head += o + ",";
      for (std::size_t k = 0; k < table.outputs.size(); ++k) {
        head += table.outputs[k] + "_kPa" + (k + 1 < table.outputs.size() ? "," : "");
      }
      s.out << head << '\n';
      for (const auto& row : table.rows) {
        std::string line;
        for (bool b : row.inputs) line += b ? "1," : "0,";
        for (bool b : row.outputs) line += b ? "1," : "0,";
        for (std::size_t k = 0; k < row.output_kpa.size(); ++k) {
          line += format_number(row.output_kpa[k]) + (k + 1 < row.output_kpa.size() ? "," : "");
        }
        s.out << line << '\n';
      }
      break;
    }
    case Format::JsonLines:
      for (const auto& row : table.rows) {
        nlohmann::ordered_json j;
        for (std::size_t k = 0; k < table.inputs.size(); ++k) j["inputs"][table.inputs[k]] = row.inputs[k] ? 1 : 0;
        for (std::size_t k = 0; k < table.outputs.size(); ++k) {
          j["outputs"][table.outputs[k]] = row.outputs[k] ? 1 : 0;
          j["pressure_kPa"][table.outputs[k]] = row.output_kpa[k];
        }
        s.out << j.dump() << '\n';
      }
      break;
  }

  if (!match) return kExitOk;
  if (s.format == Format::JsonLines) {
    nlohmann::ordered_json j;
    j["expect"] = formula->text();
    j["output"] = match->output;
    j["pass"] = match->pass;
    j["mismatched_rows"] = match->mismatched_rows;
    s.out << j.dump() << '\n';
  } else {
    s.out << "expect " << match->output << " = " << formula->text() << ": "
          << (match->pass ? "PASS" : "FAIL") << '\n';
    for (std::size_t r : match->mismatched_rows) {
      s.out << "mismatch " << row_label(r) << ": " << match->output << "="
            << (table.rows[r].outputs[0] ? 1 : 0) << " expected " << (match->expected[r] ? 1 : 0)
            << '\n';
    }
  }
  return match->pass ? kExitOk : kExitMismatch;
}

int cmd_freq(Session& s, double t_end, const std::vector<std::string>& probe_flags) {
  const CircuitAst ast = s.load_ast();
  const Defaults d = s.defaults();
  const Network net = s.build(ast, d);
  SimConfig cfg;
  cfg.t_end = t_end;
  cfg.probes = s.probes_or_declared(probe_flags, ast, net);
  const Trace trace = s.guard(kExitAnalysis, [&] { return simulate(net, cfg); });
  const OscillationReport rep = s.guard(kExitAnalysis, [&] { return extract_frequency(trace, cfg.probes.front()); });

  switch (s.format) {
    case Format::Text:
      s.out << "probe " << rep.probe << '\n'
            << "frequency_hz " << fmt(rep.frequency_hz) << '\n'
            << "period_s " << fmt(rep.period_s, 5) << '\n'
            << "peak_kpa " << fmt(rep.peak_kpa) << '\n'
            << "trough_kpa " << fmt(rep.trough_kpa) << '\n'
            << "duty " << fmt(rep.duty) << '\n'
            << "cycles " << rep.cycles << '\n';
      for (const auto& ph : rep.phases) {
        s.out << "phase " << ph.probe << ' ' << (ph.degrees ? fmt(*ph.degrees, 1) + " deg" : "none")
              << '\n';
      }
      break;
    case Format::Csv:
      s.out << "probe,frequency_hz,period_s,peak_kpa,trough_kpa,duty,cycles";
      for (const auto& ph : rep.phases) s.out << ",phase_" << ph.probe << "_deg";
      s.out << '\n'
            << rep.probe << ',' << format_number(rep.frequency_hz) << ',' << format_number(rep.period_s)
            << ',' << format_number(rep.peak_kpa) << ',' << format_number(rep.trough_kpa) << ','
            << format_number(rep.duty) << ',' << rep.cycles;
      for (const auto& ph : rep.phases) s.out << ',' << (ph.degrees ? format_number(*ph.degrees) : "");
      s.out << '\n';
      break;
    case Format::JsonLines: {
      nlohmann::ordered_json j;
      j["probe"] = rep.probe;
      j["frequency_hz"] = rep.frequency_hz;
      j["period_s"] = rep.period_s;
      j["peak_kpa"] = rep.peak_kpa;
      j["trough_kpa"] = rep.trough_kpa;
      j["duty"] = rep.duty;
      j["cycles"] = rep.cycles;
      j["phases_deg"] = nlohmann::ordered_json::object();
      for (const auto& ph : rep.phases) {
        j["phases_deg"][ph.probe] = ph.degrees ? nlohmann::ordered_json(*ph.degrees) : nlohmann::ordered_json();
      }
      s.out << j.dump() << '\n';
      break;
    }
  }
  return kExitOk;
}

int cmd_bom(Session& s) {
  const CircuitAst ast = s.load_ast();
  const Defaults d = s.defaults();
  const BillOfMaterials b = s.guard(kExitStatic, [&] { return bom(ast, d); });
  const std::string devices =
      std::to_string(b.device_count) + (b.device_count == 1 ? " device" : " devices");
  switch (s.format) {
    case Format::Text:
      s.out << devices << '\n';
      for (const auto& l : b.lines) {
        s.out << "  " << l.item << " (" << l.supplier << ")  " << fmt(l.quantity, 0) << ' ' << l.unit
              << "  " << format_usd(l.cost_cents) << '\n';
      }
      s.out << "total " << format_usd(b.total_cents) << " (" << devices << " x "
            << format_usd(kDeviceCostCents) << ")\n"
            << "note: 30 cm tubing per device covers two 7.5 cm device tubes and a 15 cm pull-down\n";
      break;
    case Format::Csv:
      s.out << "item,supplier,quantity,unit,cost_usd\n";
      for (const auto& l : b.lines) {
        s.out << '"' << l.item << "\"," << l.supplier << ',' << format_number(l.quantity) << ','
              << l.unit << ',' << format_usd(l.cost_cents).substr(1) << '\n';
      }
      s.out << "total,,,," << format_usd(b.total_cents).substr(1) << '\n';
      break;
    case Format::JsonLines:
      for (const auto& l : b.lines) {
        nlohmann::ordered_json j;
        j["item"] = l.item;
        j["supplier"] = l.supplier;
        j["quantity"] = l.quantity;
        j["unit"] = l.unit;
        j["cost_usd"] = static_cast<double>(l.cost_cents) / 100.0;
        s.out << j.dump() << '\n';
      }
      nlohmann::ordered_json t;
      t["device_count"] = b.device_count;
      t["total_usd"] = static_cast<double>(b.total_cents) / 100.0;
      s.out << t.dump() << '\n';
      break;
  }
  return kExitOk;
}

int cmd_check(Session& s) {
  const CircuitAst ast = s.load_ast();
  const Defaults d = s.defaults();
  const Network net = s.build(ast, d);
  s.out << s.file << ": ok (" << net.nodes().size() << " nodes, " << net.tubes().size() << " tubes, "
        << net.valves().size() << " valves, " << net.balloons().size() << " balloons)\n";
  return kExitOk;
}

int cmd_calibrate(Session& s, double t_end, const std::vector<std::string>& probe_flags,
                  double freq, double peak) {
  const CircuitAst ast = s.load_ast();
  const Defaults d = s.defaults();
  const Network net = s.build(ast, d);
  CalibrationOptions opt;
  opt.sim.t_end = t_end;
  opt.probe = s.probes_or_declared(probe_flags, ast, net).front();
  CalibrationTargets targets{freq, peak};
  try {
    const CalibrationResult r = calibrate_oscillator(net, targets, {}, opt);
    s.out << "compliance " << format_number(r.compliance * 1e9) << " mL/kPa\n"
          << "g_open " << format_number(r.open_conductance * 1e9) << " mL/(s*kPa)\n"
          << "frequency_hz " << fmt(r.frequency_hz) << '\n'
          << "peak_kpa " << fmt(r.peak_kpa) << '\n'
          << "simulations " << r.simulations << '\n'
          << "apply with: --set '*.compliance=" << format_number(r.compliance * 1e9)
          << "' --set '*.g_open=" << format_number(r.open_conductance * 1e9) << "'\n";
  } catch (const Error& e) {
    s.fail(kExitAnalysis, diagnostic(s.file, e));
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tube-balloon logic circuit simulator", "tbl"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "text";
  std::vector<std::string> overrides;
  long seed = 0;
  app.add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "csv", "json-lines"}));
  app.add_option("--set", overrides, "Parameter override <id>.<key>=<value> (repeatable)")
      ->expected(1)
      ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  app.add_option("--seed", seed, "Reserved; the engine is deterministic");

  std::string file;
  auto add_file = [&](CLI::App* sub) {
    sub->add_option("file", file, "Netlist (.tbl)")->required();
  };
  auto add_probes = [](CLI::App* sub, std::vector<std::string>& probes) {
    sub->add_option("--probe", probes, "Node to record (repeatable or comma-separated)")
        ->delimiter(',')
        ->expected(1)
        ->multi_option_policy(CLI::MultiOptionPolicy::TakeAll);
  };

  double sim_t_end = 1.0;
  std::vector<std::string> sim_probes;
  std::string sim_out, sim_svg;
  CLI::App* sim = app.add_subcommand("sim", "Transient simulation to a CSV trace");
  add_file(sim);
  sim->add_option("--t-end", sim_t_end, "End time [s]")->check(CLI::PositiveNumber);
  add_probes(sim, sim_probes);
  sim->add_option("--out", sim_out, "Write the trace here instead of stdout");
  sim->add_option("--svg", sim_svg, "Also render a pressure-vs-time SVG");

  std::vector<std::string> truth_in, truth_out;
  std::string truth_expect;
  CLI::App* truth = app.add_subcommand("truth", "DC truth table");
  add_file(truth);
  truth->add_option("--inputs", truth_in, "Input nodes, most significant first")->delimiter(',');
  truth->add_option("--outputs", truth_out, "Output nodes (default: declared probes)")->delimiter(',');
  truth->add_option("--expect", truth_expect, "Boolean formula for the first output");

  double freq_t_end = 2.0;
  std::vector<std::string> freq_probes;
  CLI::App* freq = app.add_subcommand("freq", "Oscillation frequency, amplitude and phase");
  add_file(freq);
  freq->add_option("--t-end", freq_t_end, "End time [s]")->check(CLI::PositiveNumber);
  add_probes(freq, freq_probes);

  CLI::App* bom_cmd = app.add_subcommand("bom", "Bill of materials");
  add_file(bom_cmd);

  CLI::App* check = app.add_subcommand("check", "Parse, expand and validate only");
  add_file(check);

  double cal_t_end = 1.0, cal_freq = 15.0, cal_peak = 35.0;
  std::vector<std::string> cal_probes;
  CLI::App* cal = app.add_subcommand("calibrate", "Fit compliance and valve conductance to targets");
  add_file(cal);
  cal->add_option("--t-end", cal_t_end, "Simulated time per probe run [s]")->check(CLI::PositiveNumber);
  add_probes(cal, cal_probes);
  cal->add_option("--freq", cal_freq, "Target frequency [Hz]")->check(CLI::PositiveNumber);
  cal->add_option("--peak", cal_peak, "Target peak pressure [kPa]")->check(CLI::PositiveNumber);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const Format fmt_flag =
      format == "csv" ? Format::Csv : format == "json-lines" ? Format::JsonLines : Format::Text;
  Session s{out, err, fmt_flag, overrides, file};
  try {
    if (*sim) return cmd_sim(s, sim_t_end, sim_probes, sim_out, sim_svg);
    if (*truth) return cmd_truth(s, truth_in, truth_out, truth_expect);
    if (*freq) return cmd_freq(s, freq_t_end, freq_probes);
    if (*bom_cmd) return cmd_bom(s);
    if (*check) return cmd_check(s);
    if (*cal) return cmd_calibrate(s, cal_t_end, cal_probes, cal_freq, cal_peak);
  } catch (const Exit& e) {
    return e.code;
  }
  return kExitUsage;
}

}  // namespace tbl
