#pragma once

#include <cmath>
#include <stdexcept>

namespace bswsn::units {

inline constexpr double kSpeedOfLight = 2.99792458e8;  // m/s

inline double dbm_to_watts(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }

inline double watts_to_dbm(double watts) {
  if (!(watts > 0.0)) throw std::domain_error("watts_to_dbm: power must be > 0");
  return 10.0 * std::log10(watts * 1e3);
}

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

inline double linear_to_db(double linear) {
  if (!(linear > 0.0)) throw std::domain_error("linear_to_db: ratio must be > 0");
  return 10.0 * std::log10(linear);
}

inline double wavelength_m(double carrier_hz) {
  if (!(carrier_hz > 0.0)) throw std::domain_error("wavelength_m: carrier must be > 0");
  return kSpeedOfLight / carrier_hz;
}

}  // namespace bswsn::units
