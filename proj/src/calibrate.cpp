#include <algorithm>
#include <cmath>
#include <functional>

#include "tbl/engine.hpp"

namespace tbl {

Network with_oscillator_params(const Network& tmpl, double compliance, double open_conductance) {
  Network net = tmpl;
  for (auto& b : net.balloons()) b.params.compliance = compliance;
  for (auto& v : net.valves()) {
    v.open_conductance = open_conductance;
    if (v.leak_conductance >= open_conductance) v.leak_conductance = 0.0;
  }
  return net;
}

std::optional<OscillationReport> measure_oscillation(const Network& net, const SimConfig& sim,
                                                     const std::string& probe) {
  SimConfig cfg = sim;
  cfg.probes = {probe};
  try {
    const Trace trace = simulate(net, cfg);
    return extract_frequency(trace, probe);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoOscillation || e.code() == ErrorCode::NonConvergence) {
      return std::nullopt;
    }
    throw;
  }
}

namespace {

double rel_err(double value, double target) { return std::abs(value - target) / std::abs(target); }

struct Probe {
  double param = 0.0;
  double value = 0.0;  // 0 when the circuit does not oscillate
};

// One-dimensional search on a monotone response over a log-spaced bracket.
// Each level evaluates a grid in parallel, keeps the sub-interval that
// brackets the target, and refines it. Returns the grid point whose response
// is closest to the target.
Probe search_log(double lo, double hi, double target, bool increasing,
                 const std::function<double(double)>& response, const CalibrationOptions& opt,
                 std::size_t& simulations) {
  Probe best{lo, 0.0};
  double best_err = INFINITY;
  const int points = std::max(opt.grid_points, 3);
  for (int level = 0; level < opt.refine_levels; ++level) {
    const double llo = std::log(lo), lhi = std::log(hi);
    std::vector<double> params(static_cast<std::size_t>(points));
    for (int i = 0; i < points; ++i) {
      params[static_cast<std::size_t>(i)] =
          std::exp(llo + (lhi - llo) * static_cast<double>(i) / static_cast<double>(points - 1));
    }
    const auto values =
        map_indices<double>(params.size(), [&](std::size_t i) { return response(params[i]); },
                            opt.execution);
    simulations += params.size();

    for (std::size_t i = 0; i < params.size(); ++i) {
      const double e = values[i] > 0.0 ? rel_err(values[i], target) : INFINITY;
      if (e < best_err) {
        best_err = e;
        best = Probe{params[i], values[i]};
      }
    }
    if (best_err < 0.25 * opt.tolerance) break;

    // Bracketing pair; responses are oriented so "below target" comes first.
    std::optional<std::size_t> bracket;
    for (std::size_t i = 0; i + 1 < params.size(); ++i) {
      const double a = values[i], b = values[i + 1];
      const bool crosses = increasing ? (a <= target && b >= target) : (a >= target && b <= target);
      if (crosses) {
        bracket = i;
        break;
      }
    }
    if (!bracket) break;  // target outside the reachable range
    lo = params[*bracket];
    hi = params[*bracket + 1];
  }
  return best;
}

}  // namespace

CalibrationResult calibrate_oscillator(const Network& tmpl, const CalibrationTargets& targets,
                                       const CalibrationBounds& bounds,
                                       const CalibrationOptions& options) {
  if (!(targets.frequency_hz > 0.0) || !(targets.peak_kpa > 0.0)) {
    throw Error(ErrorCode::Domain, "calibration targets must be positive");
  }
  if (!(bounds.compliance_min > 0.0 && bounds.compliance_min < bounds.compliance_max &&
        bounds.conductance_min > 0.0 && bounds.conductance_min < bounds.conductance_max)) {
    throw Error(ErrorCode::Domain, "calibration bounds must be positive, ordered intervals");
  }
  if (options.probe.empty()) throw Error(ErrorCode::Domain, "calibration needs a probe node");
  options.sim.validate();

  CalibrationResult result;
  double compliance = tmpl.balloons().empty() ? bounds.compliance_min : tmpl.balloons().front().params.compliance;
  double conductance = tmpl.valves().empty() ? bounds.conductance_max : tmpl.valves().front().open_conductance;
  compliance = std::clamp(compliance, bounds.compliance_min, bounds.compliance_max);
  conductance = std::clamp(conductance, bounds.conductance_min, bounds.conductance_max);

  auto measure = [&](double c, double g) {
    return measure_oscillation(with_oscillator_params(tmpl, c, g), options.sim, options.probe);
  };

  double best_score = INFINITY;
  auto consider = [&](double c, double g, const std::optional<OscillationReport>& r) {
    if (!r) return;
    const double ef = rel_err(r->frequency_hz, targets.frequency_hz);
    const double ep = rel_err(r->peak_kpa, targets.peak_kpa);
    const double score = ef * ef + ep * ep;
    if (score < best_score) {
      best_score = score;
      result.compliance = c;
      result.open_conductance = g;
      result.frequency_hz = r->frequency_hz;
      result.peak_kpa = r->peak_kpa;
      result.converged = ef <= options.tolerance && ep <= options.tolerance;
    }
  };

  // Alternate: the peak is governed mostly by the open-valve divider, the
  // frequency mostly by the balloon RC time.
  for (int round = 0; round < options.max_rounds; ++round) {
    const Probe g = search_log(
        bounds.conductance_min, bounds.conductance_max, targets.peak_kpa, /*increasing=*/true,
        [&](double gv) {
          auto r = measure(compliance, gv);
          return r ? r->peak_kpa : 0.0;
        },
        options, result.simulations);
    conductance = g.param;

    const Probe c = search_log(
        bounds.compliance_min, bounds.compliance_max, targets.frequency_hz, /*increasing=*/false,
        [&](double cv) {
          auto r = measure(cv, conductance);
          return r ? r->frequency_hz : 0.0;
        },
        options, result.simulations);
    compliance = c.param;

    const auto check = measure(compliance, conductance);
    ++result.simulations;
    consider(compliance, conductance, check);
    if (result.converged) return result;
  }

  throw CalibrationError(
      "bounded search could not bring frequency and peak within " +
          diag_number(options.tolerance * 100.0) + "% (best: " +
          diag_number(result.frequency_hz) + " Hz, " + diag_number(result.peak_kpa) + " kPa)",
      result);
}

}  // namespace tbl
