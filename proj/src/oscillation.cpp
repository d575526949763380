#include <algorithm>
#include <cmath>
#include <numbers>

#include "tbl/engine.hpp"

namespace tbl {

namespace {

struct Crossings {
  std::vector<double> up;
  std::vector<double> down;
};

Crossings midline_crossings(std::span<const double> t, std::span<const double> x, std::size_t first,
                            double mid) {
  Crossings c;
  for (std::size_t i = first + 1; i < x.size(); ++i) {
    const double a = x[i - 1], b = x[i];
    if (a < mid && b >= mid) {
      c.up.push_back(t[i - 1] + (mid - a) / (b - a) * (t[i] - t[i - 1]));
    } else if (a >= mid && b < mid) {
      c.down.push_back(t[i - 1] + (a - mid) / (a - b) * (t[i] - t[i - 1]));
    }
  }
  return c;
}

std::size_t settled_start(std::span<const double> t, double fraction) {
  const double cut = t.front() + fraction * (t.back() - t.front());
  return static_cast<std::size_t>(std::lower_bound(t.begin(), t.end(), cut) - t.begin());
}

struct Analysis {
  OscillationReport report;
  std::vector<double> up;
};

Analysis analyze(std::span<const double> t, std::span<const double> x,
                 const OscillationOptions& options) {
  if (t.size() < 2 || t.size() != x.size()) {
    throw Error(ErrorCode::NoOscillation, "trace needs at least two samples");
  }
  const std::size_t first = settled_start(t, options.transient_fraction);
  if (x.size() - first < 2) throw Error(ErrorCode::NoOscillation, "settled window is empty");
  const auto [lo_it, hi_it] = std::minmax_element(x.begin() + static_cast<long>(first), x.end());
  const double span = *hi_it - *lo_it;
  if (!(span >= options.min_span_kpa)) {
    throw Error(ErrorCode::NoOscillation,
                "peak-trough span " + diag_number(span) + " kPa is below the " +
                    diag_number(options.min_span_kpa) + " kPa floor");
  }
  const double mid = 0.5 * (*hi_it + *lo_it);
  Crossings c = midline_crossings(t, x, first, mid);
  if (c.up.size() < 3) {
    throw Error(ErrorCode::NoOscillation,
                "only " + std::to_string(c.up.size()) + " rising midline crossings after the transient");
  }

  Analysis out;
  auto& r = out.report;
  r.cycles = c.up.size() - 1;
  r.period_s = (c.up.back() - c.up.front()) / static_cast<double>(r.cycles);
  r.frequency_hz = 1.0 / r.period_s;

  double peak_sum = 0.0, trough_sum = 0.0, duty_sum = 0.0;
  std::size_t duty_count = 0;
  std::size_t i = first;
  for (std::size_t k = 0; k + 1 < c.up.size(); ++k) {
    const double start = c.up[k], stop = c.up[k + 1];
    while (i < t.size() && t[i] < start) ++i;
    double hi = -INFINITY, lo = INFINITY;
    for (std::size_t j = i; j < t.size() && t[j] <= stop; ++j) {
      hi = std::max(hi, x[j]);
      lo = std::min(lo, x[j]);
    }
    peak_sum += hi;
    trough_sum += lo;
    auto d = std::upper_bound(c.down.begin(), c.down.end(), start);
    if (d != c.down.end() && *d < stop) {
      duty_sum += (*d - start) / (stop - start);
      ++duty_count;
    }
  }
  r.peak_kpa = peak_sum / static_cast<double>(r.cycles);
  r.trough_kpa = trough_sum / static_cast<double>(r.cycles);
  r.duty = duty_count ? duty_sum / static_cast<double>(duty_count) : 0.0;
  out.up = std::move(c.up);
  return out;
}

// Circular mean of the lag from each reference rising edge to the next rising
// edge of the other signal, in degrees within [0, 360).
std::optional<double> phase_lag(const std::vector<double>& ref_up, const std::vector<double>& other_up,
                                double period) {
  double sx = 0.0, sy = 0.0;
  std::size_t n = 0;
  for (std::size_t k = 0; k + 1 < ref_up.size(); ++k) {
    auto it = std::lower_bound(other_up.begin(), other_up.end(), ref_up[k]);
    if (it == other_up.end()) break;
    const double angle = 2.0 * std::numbers::pi * (*it - ref_up[k]) / period;
    sx += std::cos(angle);
    sy += std::sin(angle);
    ++n;
  }
  if (n == 0) return std::nullopt;
  double deg = std::atan2(sy, sx) * 180.0 / std::numbers::pi;
  if (deg < 0.0) deg += 360.0;
  if (deg >= 360.0) deg -= 360.0;
  return deg;
}

}  // namespace

OscillationReport analyze_waveform(std::span<const double> time, std::span<const double> kpa,
                                   const OscillationOptions& options) {
  return analyze(time, kpa, options).report;
}

OscillationReport extract_frequency(const Trace& trace, const std::string& probe,
                                    const OscillationOptions& options) {
  const auto idx = trace.probe_index(probe);
  if (!idx) throw Error(ErrorCode::InvalidNetwork, "probe '" + probe + "' is not in the trace");
  const auto series = trace.probe_series(*idx);
  Analysis ref = analyze(trace.time, series, options);
  ref.report.probe = probe;

  for (std::size_t p = 0; p < trace.probes.size(); ++p) {
    if (p == *idx) continue;
    PhaseOffset offset{trace.probes[p], std::nullopt};
    try {
      const auto other_series = trace.probe_series(p);
      Analysis other = analyze(trace.time, other_series, options);
      offset.degrees = phase_lag(ref.up, other.up, ref.report.period_s);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::NoOscillation) throw;
    }
    ref.report.phases.push_back(std::move(offset));
  }
  return ref.report;
}

}  // namespace tbl
