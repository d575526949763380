#pragma once

// Constitutive models for the elements of a tube-balloon pneumatic network.
// All internal quantities are SI (Pa, m^3, m, s); pressures are gauge, so
// the atmosphere sits at 0 Pa.

#include <compare>
#include <cstddef>
#include <string>

namespace tbl {

inline constexpr double kAirViscosity = 1.81e-5;      // Pa*s
inline constexpr double kVacuumGaugePa = -101325.0;  // absolute zero, in gauge

/// Gauge pressure. Stored in Pa; the kPa accessors are for I/O.
class Pressure {
 public:
  constexpr Pressure() = default;

  static constexpr Pressure from_pa(double pa) { return Pressure(pa); }
  static constexpr Pressure from_kpa(double kpa) { return Pressure(kpa * 1e3); }

  constexpr double pa() const { return pa_; }
  constexpr double kpa() const { return pa_ * 1e-3; }

  constexpr auto operator<=>(const Pressure&) const = default;

 private:
  constexpr explicit Pressure(double pa) : pa_(pa) {}
  double pa_ = 0.0;
};

// Throws Domain when the pressure is below vacuum or not finite.
void require_physical(Pressure p, const std::string& what);

enum class ValveState { Open, Closed };

std::string to_string(ValveState state);

struct BalloonParams {
  double rest_volume = 1.0e-6;     // m^3
  double compliance = 5.0e-11;     // m^3/Pa
  Pressure burst = Pressure::from_kpa(200.0);

  void validate() const;
};

/// Two-threshold relay. The valve closes at or above `inflate` and reopens at
/// or below `deflate`; between them the previous state holds.
struct HysteresisThresholds {
  Pressure inflate = Pressure::from_kpa(85.0);
  Pressure deflate = Pressure::from_kpa(60.0);

  void validate() const;
};

struct BalloonReading {
  Pressure pressure;
  bool over_burst = false;
};

/// Hagen-Poiseuille resistance 128*mu*L/(pi*d^4), in Pa*s/m^3.
double tube_resistance(double length, double inner_diameter, double viscosity);

/// Piecewise-linear balloon law: slack (0 Pa) up to the rest volume, then
/// (V - V0)/C. Exceeding the burst pressure only sets a flag.
BalloonReading balloon_pressure(double volume, const BalloonParams& params);

/// Inverse of balloon_pressure on the inflated branch.
double balloon_volume_at(Pressure p, const BalloonParams& params);

ValveState valve_step(ValveState state, Pressure control, const HysteresisThresholds& th);

/// Signed distance to the next switching threshold, in Pa. Non-negative means
/// valve_step would change the state.
double switching_margin(ValveState state, Pressure control, const HysteresisThresholds& th);

}  // namespace tbl
