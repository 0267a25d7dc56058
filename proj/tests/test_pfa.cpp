#include <doctest.h>

#include <cmath>
#include <numbers>

#include "casrough/error.hpp"
#include "casrough/pfa.hpp"

using namespace casrough;

namespace {

// For E ~ L^-n, L^2 E'' / (2E) = n (n + 1) / 2.
double power_law_prefactor(int n) { return n * (n + 1) / 2.0; }

SensitivityCurve constant_curve(Regime regime) {
  SensitivityCurve::Metadata meta;
  meta.regime = regime;
  meta.extrapolation = Extrapolation::hold;
  return SensitivityCurve({{0.0, 1.0}, {1.0, 1.0}}, meta);
}

}  // namespace

TEST_CASE("regime prefactors") {
  CHECK(regime_prefactor(Regime::long_distance) == power_law_prefactor(3));
  CHECK(regime_prefactor(Regime::short_distance) == power_law_prefactor(2));
  CHECK(regime_prefactor(Regime::long_distance) == 6.0);
  CHECK(regime_prefactor(Regime::short_distance) == 3.0);
}

TEST_CASE("pfa_correction examples") {
  CHECK(pfa_correction(1.0, 10.0, Regime::short_distance) == doctest::Approx(0.03));
  CHECK(pfa_correction(1.0, 10.0, Regime::long_distance) == doctest::Approx(0.06));
  CHECK(pfa_correction(0.0, 10.0, Regime::long_distance) == 0.0);
  CHECK_THROWS_AS(pfa_correction(1.0, 0.0, Regime::long_distance), Error);
}

TEST_CASE("plane-sphere force") {
  CHECK(pfa_force_plane_sphere(-2.0, 3.0) == doctest::Approx(-12.0 * std::numbers::pi));
  CHECK(pfa_force_plane_sphere(-2.0, 6.0) == doctest::Approx(2.0 * pfa_force_plane_sphere(-2.0, 3.0)));
  CHECK(pfa_force_plane_sphere(-4.0, 3.0) == doctest::Approx(2.0 * pfa_force_plane_sphere(-2.0, 3.0)));
  // -pi^3 hbar c R / (360 L^3) at R = 100 um, L = 1 um.
  const double hbar_c = 1.054571817e-34 * 299792458.0;
  const double expected = -std::pow(std::numbers::pi, 3) * hbar_c * 1e-4 / (360.0 * 1e-18);
  CHECK(ideal_plane_sphere_force_newton(1000.0, 1e5) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("amplitude guard") {
  CHECK_FALSE(amplitude_too_large(3.0, 10.0));
  CHECK(amplitude_too_large(3.1, 10.0));
}

TEST_CASE("guards") {
  PlaneSphereSetup s;
  s.L_nm = 100.0;
  s.R_nm = 5000.0;  // R / L = 50
  s.lc_nm = 10.0;
  CHECK_FALSE(s.guards().pfa_geometry_ok);
  s.R_nm = 1e5;
  auto g = s.guards();
  CHECK(g.pfa_geometry_ok);
  CHECK(g.averaging_ok);  // R L / lc^2 = 1e5
  CHECK(g.ergodic_ok);
  CHECK(s.area() == doctest::Approx(std::numbers::pi * 1e7));
  s.lc_nm = 1e4;
  g = s.guards();
  CHECK_FALSE(g.averaging_ok);
  CHECK_FALSE(g.ergodic_ok);
  s.lc_nm.reset();
  g = s.guards();
  CHECK_FALSE(g.averaging_ok);
  s.L_nm = -1.0;
  CHECK_THROWS_AS(s.validate(), Error);
}

TEST_CASE("full_correction") {
  PlaneSphereSetup setup;
  setup.L_nm = 100.0;
  setup.R_nm = 1e5;
  setup.regime = Regime::long_distance;
  const auto spectrum = RoughnessSpectrum::gaussian(2.0, 50.0);
  setup.lc_nm = spectrum.corr_length();

  SUBCASE("report identity") {
    SensitivityCurve::Metadata meta;
    meta.regime = Regime::long_distance;
    meta.asymptote_beta = 1.0 / 3.0;
    const SensitivityCurve curve({{0.0, 1.0}, {3.0, 1.41}, {12.0, 4.1}}, meta);
    const auto r = full_correction(setup, spectrum, curve);
    CHECK(r.prefactor == 6.0);
    CHECK(r.a_nm == doctest::Approx(2.0));
    CHECK(r.a_over_L_sq == doctest::Approx(4e-4));
    CHECK(r.relative_correction == doctest::Approx(r.prefactor * r.a_over_L_sq * r.rho_bar).epsilon(1e-14));
    CHECK(r.pfa_relative_correction == doctest::Approx(r.prefactor * r.a_over_L_sq).epsilon(1e-14));
    CHECK(r.rho_bar > 1.0);
    CHECK(r.converged);
    CHECK_FALSE(r.fallback_used);
  }
  SUBCASE("rho == 1 reproduces the proximity-force result") {
    const auto r = full_correction(setup, spectrum, constant_curve(Regime::long_distance));
    CHECK(r.relative_correction == doctest::Approx(r.pfa_relative_correction).epsilon(1e-9));
  }
  SUBCASE("lc >> L approaches the proximity-force result") {
    SensitivityCurve::Metadata meta;
    meta.regime = Regime::long_distance;
    meta.asymptote_beta = 1.0 / 3.0;
    std::vector<CurveSample> samples;
    for (int i = 0; i <= 100; ++i) samples.push_back({0.1 * i, rho_long_fallback(0.1 * i)});
    const SensitivityCurve curve(samples, meta);
    const auto wide = RoughnessSpectrum::gaussian(2.0, 1e4);
    setup.lc_nm = wide.corr_length();
    const auto r = full_correction(setup, wide, curve);
    CHECK(r.relative_correction == doctest::Approx(r.pfa_relative_correction).epsilon(0.02));
  }
  SUBCASE("warnings") {
    setup.R_nm = 5000.0;
    const auto big = RoughnessSpectrum::gaussian(40.0, 50.0);
    const auto r = full_correction(setup, big, constant_curve(Regime::short_distance));
    CHECK_FALSE(r.guards.pfa_geometry_ok);
    CHECK(r.warnings.size() >= 3);  // geometry, amplitude, regime mismatch
    CHECK(std::isfinite(r.relative_correction));
  }
}
