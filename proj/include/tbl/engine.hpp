#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tbl/error.hpp"
#include "tbl/network.hpp"
#include "tbl/parallel.hpp"

namespace tbl {

// ---------------------------------------------------------------------------
// DC operating point

struct DcOptions {
  /// Starting assignment for the synchronous iteration; defaults to each
  /// valve's `initial` state.
  std::optional<std::vector<ValveState>> initial;
  int max_iterations = 64;
  /// Exhaustive fallback is attempted only up to this many valves.
  std::size_t enumeration_limit = 16;
  /// When the iteration succeeds, all fixed points are still listed for
  /// networks up to this size.
  std::size_t list_all_limit = 10;
};

struct SteadyState {
  std::vector<ValveState> valve_states;
  std::vector<double> node_pa;  // indexed by NodeIndex
  bool converged = false;
  bool reached_by_iteration = false;
  /// Every self-consistent assignment found by enumeration (empty when the
  /// enumeration was not run).
  std::vector<std::vector<ValveState>> fixed_points;
  std::vector<std::string> warnings;

  Pressure pressure(NodeIndex n) const { return Pressure::from_pa(node_pa.at(n)); }
};

/// Node pressures for a given valve assignment at DC (balloons carry no flow).
std::vector<double> steady_pressures(const Network& net, std::span<const ValveState> states);

SteadyState dc_operating_point(const Network& net, const DcOptions& options = {});

// ---------------------------------------------------------------------------
// Transient simulation

struct SimConfig {
  double t_end = 1.0;             // s
  double rtol = 1e-6;
  double atol = 1e-9;             // m^3
  double max_step = 1e-3;         // s
  double initial_step = 1e-5;     // s
  double event_tolerance = 1e-6;  // s
  double sample_interval = 5e-4;  // s
  std::optional<std::vector<ValveState>> initial_valves;
  std::optional<std::vector<double>> initial_volumes;  // m^3, one per balloon
  std::vector<std::string> probes;                      // node names

  void validate() const;
};

struct ValveEvent {
  double time = 0.0;
  std::size_t valve = 0;
  ValveState state = ValveState::Open;
};

struct Trace {
  std::vector<std::string> probes;
  std::vector<double> time;                        // s
  std::vector<std::vector<double>> pressure_kpa;   // [sample][probe]
  std::vector<std::vector<double>> volume;         // [sample][balloon], m^3
  std::vector<std::vector<double>> inflow;         // [sample][balloon], m^3/s
  std::vector<ValveEvent> events;
  std::vector<std::string> warnings;
  std::size_t accepted_steps = 0;
  std::size_t rejected_steps = 0;

  std::optional<std::size_t> probe_index(const std::string& name) const;
  std::vector<double> probe_series(std::size_t probe) const;
};

Trace simulate(const Network& net, const SimConfig& cfg);

// ---------------------------------------------------------------------------
// Oscillation analysis

struct OscillationOptions {
  double transient_fraction = 0.2;
  double min_span_kpa = 1.0;
};

struct PhaseOffset {
  std::string probe;
  std::optional<double> degrees;  // empty when that probe does not oscillate
};

struct OscillationReport {
  std::string probe;
  double frequency_hz = 0.0;
  double period_s = 0.0;
  double peak_kpa = 0.0;    // mean of per-cycle maxima
  double trough_kpa = 0.0;  // mean of per-cycle minima
  double duty = 0.0;        // fraction of each cycle above the midline
  std::size_t cycles = 0;
  std::vector<PhaseOffset> phases;  // other probes relative to this one
};

/// Throws NoOscillation.
OscillationReport extract_frequency(const Trace& trace, const std::string& probe,
                                    const OscillationOptions& options = {});

/// Same analysis on a bare sampled signal; `phases` is left empty.
OscillationReport analyze_waveform(std::span<const double> time, std::span<const double> kpa,
                                   const OscillationOptions& options = {});

// ---------------------------------------------------------------------------
// Calibration

struct CalibrationTargets {
  double frequency_hz = 15.0;
  double peak_kpa = 35.0;
};

struct CalibrationBounds {
  double compliance_min = 1e-11;  // m^3/Pa
  double compliance_max = 1e-9;
  double conductance_min = 1e-8;  // m^3/(Pa*s)
  double conductance_max = 1e-4;
};

struct CalibrationOptions {
  SimConfig sim;           // t_end and tolerances for every probe run
  std::string probe;       // node whose waveform is matched
  double tolerance = 0.02; // relative, on both targets
  int max_rounds = 6;
  int grid_points = 8;     // evaluations per refinement level
  int refine_levels = 5;
  Execution execution = Execution::Parallel;
};

struct CalibrationResult {
  double compliance = 0.0;        // m^3/Pa
  double open_conductance = 0.0;  // m^3/(Pa*s)
  double frequency_hz = 0.0;      // achieved on re-simulation
  double peak_kpa = 0.0;
  bool converged = false;
  std::size_t simulations = 0;
};

class CalibrationError : public Error {
 public:
  CalibrationError(const std::string& message, CalibrationResult best)
      : Error(ErrorCode::CalibrationFailed, message), best_(best) {}
  const CalibrationResult& best() const noexcept { return best_; }

 private:
  CalibrationResult best_;
};

/// Copy of `tmpl` with every balloon compliance and every valve open
/// conductance replaced.
Network with_oscillator_params(const Network& tmpl, double compliance, double open_conductance);

/// Simulates and extracts (frequency, peak) at `probe`; empty on NoOscillation.
std::optional<OscillationReport> measure_oscillation(const Network& net, const SimConfig& sim,
                                                     const std::string& probe);

/// Fits balloon compliance and valve open conductance so the probe waveform
/// meets both targets. Throws CalibrationError with the best point found.
CalibrationResult calibrate_oscillator(const Network& tmpl, const CalibrationTargets& targets,
                                       const CalibrationBounds& bounds,
                                       const CalibrationOptions& options);

}  // namespace tbl
