#include <algorithm>
#include <array>
#include <cmath>
#include <set>

#include "tbl/engine.hpp"
#include "tbl/flow_solver.hpp"

namespace tbl {

void SimConfig::validate() const {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw Error(ErrorCode::Domain, std::string(what) + " must be positive");
    }
  };
  positive(t_end, "t_end");
  positive(rtol, "rtol");
  positive(atol, "atol");
  positive(max_step, "max_step");
  positive(initial_step, "initial_step");
  positive(event_tolerance, "event_tolerance");
  positive(sample_interval, "sample_interval");
}

std::optional<std::size_t> Trace::probe_index(const std::string& name) const {
  auto it = std::find(probes.begin(), probes.end(), name);
  if (it == probes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - probes.begin());
}

std::vector<double> Trace::probe_series(std::size_t probe) const {
  std::vector<double> out;
  out.reserve(time.size());
  for (const auto& row : pressure_kpa) out.push_back(row.at(probe));
  return out;
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

using Vec = std::vector<double>;

class Integrator {
 public:
  Integrator(const Network& net, const SimConfig& cfg)
      : net_(net), cfg_(cfg), solver_(net, SolveMode::Transient) {
    const std::size_t nb = net.balloons().size();
    for (auto* v : {&k2_, &k3_, &k4_, &k5_, &k6_, &tmp_, &balloon_pa_}) v->resize(nb);
    for (const auto& name : cfg.probes) {
      auto idx = net.find_node(name);
      if (!idx) throw Error(ErrorCode::InvalidNetwork, "probe node '" + name + "' does not exist");
      probe_nodes_.push_back(*idx);
    }
    burst_flagged_.assign(nb, false);
  }

  Trace run() {
    const std::size_t nb = net_.balloons().size();
    Trace trace;
    trace.probes = cfg_.probes;

    Vec y(nb);
    if (cfg_.initial_volumes) {
      if (cfg_.initial_volumes->size() != nb) {
        throw Error(ErrorCode::InvalidNetwork, "initial volume vector has the wrong length");
      }
      y = *cfg_.initial_volumes;
    } else {
      for (std::size_t b = 0; b < nb; ++b) {
        const auto& balloon = net_.balloons()[b];
        y[b] = balloon_volume_at(balloon.initial, balloon.params);
      }
    }
    if (cfg_.initial_valves) {
      if (cfg_.initial_valves->size() != net_.valves().size()) {
        throw Error(ErrorCode::InvalidNetwork, "initial valve vector has the wrong length");
      }
      states_ = *cfg_.initial_valves;
    } else {
      for (const auto& v : net_.valves()) states_.push_back(v.initial);
    }

    double t = 0.0;
    settle_valves(t, y, trace);
    Vec f0(nb), f1(nb), y1(nb);
    derivative(y, f0);
    next_sample_ = 0;
    emit_samples(t, y, f0, t, y, f0, trace, /*include_left=*/true);

    double h = std::min(cfg_.initial_step, cfg_.max_step);
    const double h_min = 1e-14 * std::max(1.0, cfg_.t_end);
    while (t < cfg_.t_end) {
      h = std::min(h, cfg_.max_step);
      bool last = false;
      if (h >= cfg_.t_end - t) {
        h = cfg_.t_end - t;
        last = true;
      }
      const double err = step(y, f0, h, y1, f1, /*want_error=*/true);
      if (!(err <= 1.0)) {
        ++trace.rejected_steps;
        const double factor = std::isfinite(err) ? std::max(0.2, 0.9 * std::pow(err, -0.2)) : 0.2;
        h *= factor;
        if (h < h_min) {
          throw Error(ErrorCode::NonConvergence,
                      "step size underflow at t=" + diag_number(t) + " s");
        }
        continue;
      }
      ++trace.accepted_steps;

      if (any_switch(y1)) {
        // Bisection on the crossing: re-take the step from t with shorter
        // lengths until the bracket is inside the event tolerance.
        double lo = 0.0, hi = h;
        Vec y_hi = y1, y_mid(y.size()), f_mid(y.size());
        while (hi - lo > cfg_.event_tolerance) {
          const double mid = 0.5 * (lo + hi);
          step(y, f0, mid, y_mid, f_mid, /*want_error=*/false);
          if (any_switch(y_mid)) {
            hi = mid;
            y_hi = y_mid;
          } else {
            lo = mid;
          }
        }
        Vec f_hi(y.size());
        derivative(y_hi, f_hi);
        const double t_hi = t + hi;
        emit_samples(t, y, f0, t_hi, y_hi, f_hi, trace, false);
        t = t_hi;
        y = std::move(y_hi);
        settle_valves(t, y, trace);
        derivative(y, f0);
        continue;
      }

      const double t_next = last ? cfg_.t_end : t + h;
      emit_samples(t, y, f0, t_next, y1, f1, trace, false);
      t = t_next;
      y.swap(y1);
      f0.swap(f1);
      h *= std::min(5.0, std::max(0.2, 0.9 * std::pow(std::max(err, 1e-10), -0.2)));
    }
    return trace;
  }

 private:
  // Balloon pressures from volumes; writes balloon_pa_.
  void balloon_pressures(const Vec& y) {
    const auto& balloons = net_.balloons();
    for (std::size_t b = 0; b < balloons.size(); ++b) {
      balloon_pa_[b] = balloon_pressure(std::max(y[b], 0.0), balloons[b].params).pressure.pa();
    }
  }

  void derivative(const Vec& y, Vec& dy) {
    balloon_pressures(y);
    solver_.solve(balloon_pa_, node_pa_);
    solver_.balloon_inflows(node_pa_, dy);
    for (std::size_t b = 0; b < dy.size(); ++b) {
      if (y[b] <= 0.0 && dy[b] < 0.0) dy[b] = 0.0;
    }
  }

  double step(const Vec& y, const Vec& f0, double h, Vec& y_out, Vec& f_out, bool want_error) {
    const std::size_t n = y.size();
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * a21 * f0[i];
    derivative(tmp_, k2_);
    for (std::size_t i = 0; i < n; ++i) tmp_[i] = y[i] + h * (a31 * f0[i] + a32 * k2_[i]);
    derivative(tmp_, k3_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a41 * f0[i] + a42 * k2_[i] + a43 * k3_[i]);
    }
    derivative(tmp_, k4_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a51 * f0[i] + a52 * k2_[i] + a53 * k3_[i] + a54 * k4_[i]);
    }
    derivative(tmp_, k5_);
    for (std::size_t i = 0; i < n; ++i) {
      tmp_[i] = y[i] + h * (a61 * f0[i] + a62 * k2_[i] + a63 * k3_[i] + a64 * k4_[i] + a65 * k5_[i]);
    }
    derivative(tmp_, k6_);
    y_out.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      y_out[i] = y[i] + h * (b1 * f0[i] + b3 * k3_[i] + b4 * k4_[i] + b5 * k5_[i] + b6 * k6_[i]);
    }
    f_out.resize(n);
    derivative(y_out, f_out);
    if (!want_error || n == 0) return 0.0;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * f0[i] + e3 * k3_[i] + e4 * k4_[i] + e5 * k5_[i] + e6 * k6_[i] +
                            e7 * f_out[i]);
      const double scale = cfg_.atol + cfg_.rtol * std::max(std::abs(y[i]), std::abs(y_out[i]));
      sum += (e / scale) * (e / scale);
    }
    return std::sqrt(sum / static_cast<double>(n));
  }

  bool any_switch(const Vec& y) {
    balloon_pressures(y);
    solver_.solve(balloon_pa_, node_pa_);
    const auto& valves = net_.valves();
    for (std::size_t v = 0; v < valves.size(); ++v) {
      const auto p = Pressure::from_pa(node_pa_[valves[v].control]);
      if (switching_margin(states_[v], p, valves[v].thresholds) >= 0.0) return true;
    }
    return false;
  }

  // Applies valve_step until no valve changes at the current state. Control
  // nodes without a balloon respond instantly to valve changes, so this can
  // cascade; a loop that never settles is reported as chattering.
  void settle_valves(double t, const Vec& y, Trace& trace) {
    const auto& valves = net_.valves();
    std::set<std::vector<ValveState>> seen;
    for (;;) {
      solver_.configure(states_);
      balloon_pressures(y);
      solver_.solve(balloon_pa_, node_pa_);
      bool changed = false;
      auto next = states_;
      for (std::size_t v = 0; v < valves.size(); ++v) {
        next[v] = valve_step(states_[v], Pressure::from_pa(node_pa_[valves[v].control]),
                             valves[v].thresholds);
        if (next[v] != states_[v]) {
          changed = true;
          trace.events.push_back(ValveEvent{t, v, next[v]});
        }
      }
      if (!changed) return;
      if (!seen.insert(states_).second) {
        throw Error(ErrorCode::NonConvergence,
                    "valve states chatter without settling at t=" + diag_number(t) + " s");
      }
      states_ = std::move(next);
    }
  }

  void record(double t, const Vec& y, Trace& trace) {
    Vec dy(y.size());
    derivative(y, dy);  // leaves node_pa_ for this state
    std::vector<double> row;
    row.reserve(probe_nodes_.size());
    for (NodeIndex n : probe_nodes_) row.push_back(node_pa_[n] * 1e-3);
    trace.time.push_back(t);
    trace.pressure_kpa.push_back(std::move(row));
    trace.volume.push_back(y);
    trace.inflow.push_back(std::move(dy));
    for (std::size_t b = 0; b < y.size(); ++b) {
      if (!burst_flagged_[b] && Pressure::from_pa(balloon_pa_[b]) > net_.balloons()[b].params.burst) {
        burst_flagged_[b] = true;
        trace.warnings.push_back("balloon '" + net_.balloons()[b].name +
                                 "' exceeded its burst pressure at t=" + diag_number(t) + " s");
      }
    }
  }

  double sample_time(std::size_t k) const {
    return std::min(static_cast<double>(k) * cfg_.sample_interval, cfg_.t_end);
  }

  // Samples falling in (t0, t1] (or [t0, t1] for the first call) are
  // interpolated with a cubic Hermite polynomial over the step.
  void emit_samples(double t0, const Vec& y0, const Vec& f0, double t1, const Vec& y1,
                    const Vec& f1, Trace& trace, bool include_left) {
    const double h = t1 - t0;
    Vec ys(y0.size());
    for (;;) {
      if (finished_) return;
      const double ts = sample_time(next_sample_);
      if (ts > t1) return;
      if (ts < t0 || (ts == t0 && !include_left && h > 0.0)) {
        ++next_sample_;
        continue;
      }
      if (h <= 0.0 || ts == t0) {
        ys = y0;
      } else if (ts == t1) {
        ys = y1;
      } else {
        const double s = (ts - t0) / h;
        const double s2 = s * s, s3 = s2 * s;
        const double h00 = 2 * s3 - 3 * s2 + 1, h10 = s3 - 2 * s2 + s;
        const double h01 = -2 * s3 + 3 * s2, h11 = s3 - s2;
        for (std::size_t i = 0; i < ys.size(); ++i) {
          ys[i] = h00 * y0[i] + h10 * h * f0[i] + h01 * y1[i] + h11 * h * f1[i];
        }
      }
      record(ts, ys, trace);
      if (ts >= cfg_.t_end) finished_ = true;
      ++next_sample_;
    }
  }

  const Network& net_;
  const SimConfig& cfg_;
  FlowSolver solver_;
  std::vector<ValveState> states_;
  std::vector<NodeIndex> probe_nodes_;
  std::vector<bool> burst_flagged_;
  Vec k2_, k3_, k4_, k5_, k6_, tmp_, balloon_pa_;
  std::vector<double> node_pa_;
  std::size_t next_sample_ = 0;
  bool finished_ = false;
};

}  // namespace

Trace simulate(const Network& net, const SimConfig& cfg) {
  cfg.validate();
  Integrator integrator(net, cfg);
  return integrator.run();
}

}  // namespace tbl
