#pragma once

#include <ostream>
#include <string>

#include "tbl/engine.hpp"

namespace tbl {

/// Locale-independent number text, 12 significant digits, '.' separator.
std::string format_number(double x);

/// `time_s,<probe>_kPa,...` then one row per sample, LF line endings.
void write_csv(std::ostream& out, const Trace& trace);

/// Pressure-vs-time polylines, one per probe, in a self-contained SVG.
void write_svg(std::ostream& out, const Trace& trace, const std::string& title = {});

}  // namespace tbl
