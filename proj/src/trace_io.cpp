#include "tbl/trace_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>

namespace tbl {

std::string format_number(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 12);
  if (ec != std::errc{}) return "nan";
  return std::string(buf, end);
}

void write_csv(std::ostream& out, const Trace& trace) {
  std::string line = "time_s";
  for (const auto& p : trace.probes) line += "," + p + "_kPa";
  out << line << '\n';
  for (std::size_t i = 0; i < trace.time.size(); ++i) {
    line = format_number(trace.time[i]);
    for (double v : trace.pressure_kpa[i]) {
      line += ',';
      line += format_number(v);
    }
    out << line << '\n';
  }
}

namespace {

constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};

std::string fixed(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::fixed, 2);
  return ec == std::errc{} ? std::string(buf, end) : "0";
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

}  // namespace

void write_svg(std::ostream& out, const Trace& trace, const std::string& title) {
  const double width = 800, height = 400, margin = 50;
  double t0 = 0, t1 = 1, lo = 0, hi = 1;
  if (!trace.time.empty()) {
    t0 = trace.time.front();
    t1 = std::max(trace.time.back(), t0 + 1e-12);
    lo = hi = trace.pressure_kpa.front().empty() ? 0.0 : trace.pressure_kpa.front().front();
    for (const auto& row : trace.pressure_kpa) {
      for (double v : row) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
    }
    lo = std::min(lo, 0.0);
    if (hi - lo < 1e-9) hi = lo + 1.0;
  }
  auto sx = [&](double t) { return margin + (t - t0) / (t1 - t0) * (width - 2 * margin); };
  auto sy = [&](double p) { return height - margin - (p - lo) / (hi - lo) * (height - 2 * margin); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
      << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (!title.empty()) {
    out << "<text x=\"" << width / 2 << "\" y=\"20\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << escape(title) << "</text>\n";
  }
  out << "<line x1=\"" << margin << "\" y1=\"" << height - margin << "\" x2=\"" << width - margin
      << "\" y2=\"" << height - margin << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << margin << "\" y1=\"" << margin << "\" x2=\"" << margin << "\" y2=\""
      << height - margin << "\" stroke=\"black\"/>\n";
  out << "<text x=\"" << width / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">time [s] "
      << fixed(t0) << " to " << fixed(t1) << "</text>\n";
  out << "<text x=\"12\" y=\"" << height / 2
      << "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 12 " << height / 2
      << ")\">pressure [kPa] " << fixed(lo) << " to " << fixed(hi) << "</text>\n";

  for (std::size_t p = 0; p < trace.probes.size(); ++p) {
    const char* colour = kColours[p % std::size(kColours)];
    out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1\" points=\"";
    for (std::size_t i = 0; i < trace.time.size(); ++i) {
      out << fixed(sx(trace.time[i])) << ',' << fixed(sy(trace.pressure_kpa[i][p])) << ' ';
    }
    out << "\"/>\n";
    out << "<text x=\"" << width - margin + 4 << "\" y=\"" << margin + 14.0 * static_cast<double>(p)
        << "\" fill=\"" << colour << "\" font-family=\"sans-serif\" font-size=\"11\">"
        << escape(trace.probes[p]) << "</text>\n";
  }
  out << "</svg>\n";
}

}  // namespace tbl
