#include <doctest.h>

#include <random>

#include "bswsn/units.hpp"

using namespace bswsn;

TEST_CASE("dBm -> watts at the anchor points") {
  CHECK(units::dbm_to_watts(0.0) == doctest::Approx(1e-3).epsilon(1e-15));
  CHECK(units::dbm_to_watts(30.0) == doctest::Approx(1.0).epsilon(1e-15));
  // the tag's minimum input power level
  CHECK(units::dbm_to_watts(-18.0) == doctest::Approx(1.5848931924611134e-5).epsilon(1e-14));
  CHECK(units::dbm_to_watts(-22.0) == doctest::Approx(6.309573444801933e-6).epsilon(1e-14));
}

TEST_CASE("dB -> linear") {
  CHECK(units::db_to_linear(10.0) == doctest::Approx(10.0).epsilon(1e-15));
  CHECK(units::db_to_linear(0.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(units::db_to_linear(6.0) == doctest::Approx(3.9810717055349722).epsilon(1e-14));
  CHECK(units::db_to_linear(1.8) == doctest::Approx(1.5135612484362082).epsilon(1e-14));
}

TEST_CASE("round trips are identity to 1e-12 relative") {
  std::mt19937_64 gen(7);
  for (int i = 0; i < 1000; ++i) {
    const double dbm = -120.0 + 160.0 * (static_cast<double>(gen() >> 11) * 0x1.0p-53);
    const double w = units::dbm_to_watts(dbm);
    CHECK(units::watts_to_dbm(w) == doctest::Approx(dbm).epsilon(1e-12));
    const double lin = units::db_to_linear(dbm);
    CHECK(units::linear_to_db(lin) == doctest::Approx(dbm).epsilon(1e-12));
  }
}

TEST_CASE("log-direction conversions reject non-positive input") {
  CHECK_THROWS_AS(units::watts_to_dbm(0.0), std::domain_error);
  CHECK_THROWS_AS(units::watts_to_dbm(-1.0), std::domain_error);
  CHECK_THROWS_AS(units::linear_to_db(0.0), std::domain_error);
}

TEST_CASE("wavelength at 2.4 GHz") {
  CHECK(units::wavelength_m(2.4e9) == doctest::Approx(0.12491352416666666).epsilon(1e-15));
}
