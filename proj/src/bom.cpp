#include <cstdio>

#include "tbl/netlist.hpp"

namespace tbl {

namespace {

struct PerDevice {
  const char* item;
  const char* supplier;
  double quantity;
  const char* unit;
  long cents;
};

// One straw (cut in two), one balloon, 30 cm of tubing (two 7.5 cm device
// tubes plus the 15 cm pull-down) and a strip of Parafilm.
constexpr PerDevice kPerDevice[] = {
    {"ALINK 100 1/2\" boba straw", "Amazon.com", 1.0, "pcs", 8},
    {"Koogel 260Q twisting balloon", "Amazon.com", 1.0, "pcs", 5},
    {"PVC tubing, 1 mm ID", "McMaster-Carr", 30.0, "cm", 29},
    {"Parafilm M", "Amazon.com", 6.0, "cm2", 3},
};

}  // namespace

BillOfMaterials bom(const CircuitAst& ast, const Defaults& defaults) {
  BillOfMaterials out;
  out.device_count = expand(ast, defaults).valves().size();
  const auto n = static_cast<long>(out.device_count);
  for (const auto& d : kPerDevice) {
    BomLine line{d.item, d.supplier, d.quantity * static_cast<double>(n), d.unit, d.cents * n};
    out.total_cents += line.cost_cents;
    out.lines.push_back(std::move(line));
  }
  return out;
}

std::string format_usd(long cents) {
  const bool negative = cents < 0;
  const long abs_cents = negative ? -cents : cents;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s$%ld.%02ld", negative ? "-" : "", abs_cents / 100, abs_cents % 100);
  return buf;
}

}  // namespace tbl
