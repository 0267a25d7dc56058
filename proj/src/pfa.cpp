#include "casrough/pfa.hpp"

#include <cmath>
#include <numbers>

#include "casrough/error.hpp"

namespace casrough {
namespace {

constexpr double kHbarJs = 1.054571817e-34;
constexpr double kSpeedOfLightMs = 2.99792458e8;
constexpr double kMaxAmplitudeRatio = 0.3;

}  // namespace

double pfa_force_plane_sphere(double energy_per_area, double R) {
  if (!(R > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "R must be > 0");
  return 2.0 * std::numbers::pi * R * energy_per_area;
}

double regime_prefactor(Regime regime) {
  return regime == Regime::short_distance ? 3.0 : 6.0;
}

double pfa_correction(double a_nm, double L_nm, Regime regime) {
  if (!(a_nm >= 0.0)) throw Error(ErrorCode::InvalidArgument, "a must be >= 0");
  if (!(L_nm > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "L must be > 0");
  const double ratio = a_nm / L_nm;
  return regime_prefactor(regime) * ratio * ratio;
}

bool amplitude_too_large(double a_nm, double L_nm) { return a_nm / L_nm > kMaxAmplitudeRatio; }

double ideal_plane_sphere_force_newton(double L_nm, double R_nm) {
  const double L = L_nm * 1e-9;
  const double R = R_nm * 1e-9;
  const double pi = std::numbers::pi;
  return -pi * pi * pi * kHbarJs * kSpeedOfLightMs * R / (360.0 * L * L * L);
}

void PlaneSphereSetup::validate() const {
  if (!(L_nm > 0.0) || !std::isfinite(L_nm)) throw Error(ErrorCode::NonPositiveParameter, "L must be > 0");
  if (!(R_nm > 0.0) || !std::isfinite(R_nm)) throw Error(ErrorCode::NonPositiveParameter, "R must be > 0");
  if (area_nm2 && !(*area_nm2 > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "area must be > 0");
}

double PlaneSphereSetup::area() const { return area_nm2.value_or(std::numbers::pi * R_nm * L_nm); }

Guards PlaneSphereSetup::guards() const {
  Guards g;
  g.pfa_geometry_ok = R_nm / L_nm >= kGuardRatio;
  if (lc_nm && *lc_nm > 0.0) {
    const double lc2 = *lc_nm * *lc_nm;
    g.averaging_ok = R_nm * L_nm / lc2 >= kGuardRatio;
    g.ergodic_ok = area() / (std::numbers::pi * lc2) >= kGuardRatio;
  }
  return g;
}

CorrectionReport full_correction(const PlaneSphereSetup& setup, const RoughnessSpectrum& spectrum,
                                 const SensitivityCurve& curve, const QuadratureSpec& spec,
                                 const RhoBarOptions& options) {
  setup.validate();
  CorrectionReport report;
  const QuadratureResult variance = variance_of(spectrum, spec);
  report.a_nm = std::sqrt(variance.value);
  report.lc_nm = setup.lc_nm;
  report.prefactor = regime_prefactor(setup.regime);
  report.a_over_L_sq = variance.value / (setup.L_nm * setup.L_nm);

  const QuadratureResult mean_rho = rho_bar(spectrum, curve, setup.L_nm, spec, options);
  report.rho_bar = mean_rho.value;
  report.pfa_relative_correction = report.prefactor * report.a_over_L_sq;
  report.relative_correction = report.pfa_relative_correction * report.rho_bar;
  report.guards = setup.guards();
  report.fallback_used = curve.fallback();
  report.converged = variance.converged && mean_rho.converged && curve.converged();

  if (!report.guards.pfa_geometry_ok) report.warnings.emplace_back("R/L < 100: PFA geometry not ensured");
  if (!setup.lc_nm) {
    report.warnings.emplace_back("no valid correlation length: averaging guards cannot be checked");
  } else {
    if (!report.guards.averaging_ok) report.warnings.emplace_back("R L / lc^2 < 100: few correlation areas");
    if (!report.guards.ergodic_ok) report.warnings.emplace_back("A / (pi lc^2) < 100: surface average not ergodic");
  }
  if (amplitude_too_large(report.a_nm, setup.L_nm)) {
    report.warnings.emplace_back("a/L > 0.3: second-order roughness expansion doubtful");
  }
  if (curve.regime() != setup.regime) {
    report.warnings.emplace_back(std::string("sensitivity curve regime '") + to_string(curve.regime()) +
                                 "' differs from setup regime '" + to_string(setup.regime) + "'");
  }
  if (curve.fallback()) report.warnings.emplace_back("long-distance sensitivity uses the fallback curve");
  return report;
}

}  // namespace casrough
