#include "tbl/netdom.hpp"

#include <cmath>
#include <numbers>

#include "tbl/error.hpp"

namespace tbl {

void require_physical(Pressure p, const std::string& what) {
  if (!std::isfinite(p.pa()) || p.pa() < kVacuumGaugePa) {
    throw Error(ErrorCode::Domain, what + " is below vacuum (" + diag_number(p.kpa()) + " kPa)");
  }
}

std::string to_string(ValveState state) { return state == ValveState::Open ? "OPEN" : "CLOSED"; }

void BalloonParams::validate() const {
  if (!(rest_volume > 0.0)) throw Error(ErrorCode::Domain, "balloon rest volume must be positive");
  if (!(compliance > 0.0)) throw Error(ErrorCode::Domain, "balloon compliance must be positive");
  if (!(burst.pa() > 0.0)) throw Error(ErrorCode::Domain, "balloon burst pressure must be positive");
}

void HysteresisThresholds::validate() const {
  if (!(deflate.pa() > 0.0 && deflate < inflate)) {
    throw Error(ErrorCode::Domain, "thresholds need 0 < deflate < inflate (got deflate=" +
                                       diag_number(deflate.kpa()) + " kPa, inflate=" +
                                       diag_number(inflate.kpa()) + " kPa)");
  }
}

double tube_resistance(double length, double inner_diameter, double viscosity) {
  if (!(length >= 0.0)) throw Error(ErrorCode::Domain, "tube length must be non-negative");
  if (!(inner_diameter > 0.0)) throw Error(ErrorCode::Domain, "tube inner diameter must be positive");
  if (!(viscosity > 0.0)) throw Error(ErrorCode::Domain, "viscosity must be positive");
  const double d2 = inner_diameter * inner_diameter;
  return 128.0 * viscosity * length / (std::numbers::pi * d2 * d2);
}

BalloonReading balloon_pressure(double volume, const BalloonParams& params) {
  if (!(volume >= 0.0)) throw Error(ErrorCode::Domain, "balloon volume must be non-negative");
  if (volume <= params.rest_volume) return {Pressure{}, false};
  const auto p = Pressure::from_pa((volume - params.rest_volume) / params.compliance);
  return {p, p > params.burst};
}

double balloon_volume_at(Pressure p, const BalloonParams& params) {
  if (p.pa() <= 0.0) return params.rest_volume;
  return params.rest_volume + params.compliance * p.pa();
}

ValveState valve_step(ValveState state, Pressure control, const HysteresisThresholds& th) {
  if (state == ValveState::Open) {
    return control >= th.inflate ? ValveState::Closed : ValveState::Open;
  }
  return control <= th.deflate ? ValveState::Open : ValveState::Closed;
}

double switching_margin(ValveState state, Pressure control, const HysteresisThresholds& th) {
  return state == ValveState::Open ? control.pa() - th.inflate.pa()
                                   : th.deflate.pa() - control.pa();
}

}  // namespace tbl
