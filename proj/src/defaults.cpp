#include "tbl/defaults.hpp"

#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tbl/error.hpp"

namespace tbl {

Defaults defaults_from_json(std::string_view text, Defaults base) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(ErrorCode::Domain, std::string("defaults file: ") + e.what());
  }
  if (!doc.is_object()) throw Error(ErrorCode::Domain, "defaults file must hold a JSON object");

  GateParams& g = base.gate;
  const std::map<std::string, std::function<void(double)>> setters = {
      {"viscosity_pa_s", [&](double v) { base.viscosity = v; }},
      {"inflate_kpa", [&](double v) { g.thresholds.inflate = Pressure::from_kpa(v); }},
      {"deflate_kpa", [&](double v) { g.thresholds.deflate = Pressure::from_kpa(v); }},
      {"burst_kpa", [&](double v) { g.balloon.burst = Pressure::from_kpa(v); }},
      {"supply_len_cm", [&](double v) { g.supply_len = v * 1e-2; }},
      {"ctl_len_cm", [&](double v) { g.ctl_len = v * 1e-2; }},
      {"pd_len_cm", [&](double v) { g.pd_len = v * 1e-2; }},
      {"tap_len_cm", [&](double v) { g.tap_len = v * 1e-2; }},
      {"diameter_mm", [&](double v) { g.diameter = v * 1e-3; }},
      {"rest_volume_ml", [&](double v) { g.balloon.rest_volume = v * 1e-6; }},
      {"compliance_ml_per_kpa", [&](double v) { g.balloon.compliance = v * 1e-9; }},
      {"g_open_ml_per_s_kpa", [&](double v) { g.open_conductance = v * 1e-9; }},
      {"g_leak_ml_per_s_kpa", [&](double v) { g.leak_conductance = v * 1e-9; }},
  };
  for (const auto& [key, value] : doc.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw Error(ErrorCode::Domain, "defaults file: unknown key '" + key + "'");
    if (!value.is_number()) throw Error(ErrorCode::Domain, "defaults file: '" + key + "' must be a number");
    it->second(value.get<double>());
  }
  if (!(base.viscosity > 0.0)) throw Error(ErrorCode::Domain, "defaults file: viscosity must be positive");
  g.validate();
  return base;
}

Defaults defaults_from_env() {
  const char* path = std::getenv("TBL_DEFAULTS");
  if (!path || !*path) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Domain, std::string("cannot read TBL_DEFAULTS file '") + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return defaults_from_json(ss.str());
}

}  // namespace tbl
