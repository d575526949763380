#pragma once

// Default physical parameters, optionally overridden by a JSON file named in
// the TBL_DEFAULTS environment variable. Keys (all optional, display units):
//
//   viscosity_pa_s, inflate_kpa, deflate_kpa, burst_kpa, supply_len_cm,
//   ctl_len_cm, pd_len_cm, tap_len_cm, diameter_mm, rest_volume_ml,
//   compliance_ml_per_kpa, g_open_ml_per_s_kpa, g_leak_ml_per_s_kpa

#include <string_view>

#include "tbl/macros.hpp"

namespace tbl {

/// Throws Domain on malformed JSON, unknown keys or non-numeric values.
Defaults defaults_from_json(std::string_view text, Defaults base = {});

/// Built-in defaults unless TBL_DEFAULTS names a readable file.
Defaults defaults_from_env();

}  // namespace tbl
