#include "tbl/netlist_keys.hpp"

#include <algorithm>

namespace tbl {

namespace {

using enum ValueShape;

// Plain-number keys use fixed external units: compliance in mL/kPa,
// conductances in mL/(s*kPa), resistances in kPa*s/mL.
#define TBL_GATE_OVERRIDES                                                  \
  KeySpec{"supply_len", Number, Dimension::Length, false, false, true},     \
      KeySpec{"ctl_len", Number, Dimension::Length, false, false, true},    \
      KeySpec{"pd_len", Number, Dimension::Length, false, false, true},     \
      KeySpec{"id", Number, Dimension::Length, false, false, true},         \
      KeySpec{"inflate", Number, Dimension::Pressure},                      \
      KeySpec{"deflate", Number, Dimension::Pressure},                      \
      KeySpec{"burst", Number, Dimension::Pressure},                        \
      KeySpec{"v0", Number, Dimension::Volume, false, false, true},         \
      KeySpec{"compliance", Number, Dimension::None, false, false, true},   \
      KeySpec{"g_open", Number, Dimension::None, false, false, true},       \
      KeySpec{"g_leak", Number, Dimension::None, false, false, true}

const std::vector<KeySpec> kSource{
    {"pressure", Number, Dimension::Pressure, true},
    {"rint", Number, Dimension::None, false, false, true},
};
const std::vector<KeySpec> kAtm{};
const std::vector<KeySpec> kTube{
    {"from", Ident},
    {"to", Ident},
    {"length", Number, Dimension::Length, true, false, true},
    {"id", Number, Dimension::Length, true, false, true},
};
const std::vector<KeySpec> kBalloon{
    {"at", Ident},
    {"v0", Number, Dimension::Volume, false, false, true},
    {"compliance", Number, Dimension::None, false, false, true},
    {"burst", Number, Dimension::Pressure},
    {"p0", Number, Dimension::Pressure, false, false, true},
};
const std::vector<KeySpec> kValve{
    {"from", Ident},
    {"to", Ident},
    {"control", Ident},
    {"inflate", Number, Dimension::Pressure},
    {"deflate", Number, Dimension::Pressure},
    {"g_open", Number, Dimension::None, false, false, true},
    {"g_leak", Number, Dimension::None, false, false, true},
    {"init", Ident, Dimension::None, false, false, false, {"open", "closed"}},
};
const std::vector<KeySpec> kGate{
    {"in", IdentList},
    {"out", Ident},
    {"supply", Ident},
    {"init", Ident, Dimension::None, false, false, false, {"open", "closed"}},
    TBL_GATE_OVERRIDES,
};
const std::vector<KeySpec> kRing{
    {"n", Number, Dimension::None, true, true, true},
    {"supply", Ident},
    {"taps", IdentList},
    {"pulldown", Ident, Dimension::None, false, false, false, {"per-gate", "central"}},
    {"tap_len", Number, Dimension::Length, false, false, true},
    TBL_GATE_OVERRIDES,
};
const std::vector<KeySpec> kProbe{};

#undef TBL_GATE_OVERRIDES

}  // namespace

std::span<const KeySpec> keys_for(StatementKind kind) {
  switch (kind) {
    case StatementKind::Source: return kSource;
    case StatementKind::Atm: return kAtm;
    case StatementKind::Tube: return kTube;
    case StatementKind::Balloon: return kBalloon;
    case StatementKind::Valve: return kValve;
    case StatementKind::Gate: return kGate;
    case StatementKind::Ring: return kRing;
    case StatementKind::Probe: return kProbe;
  }
  return {};
}

const KeySpec* find_key(StatementKind kind, std::string_view key) {
  const auto keys = keys_for(kind);
  auto it = std::find_if(keys.begin(), keys.end(), [&](const KeySpec& k) { return k.key == key; });
  return it == keys.end() ? nullptr : &*it;
}

}  // namespace tbl
