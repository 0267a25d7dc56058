#pragma once

// Plane-sphere mapping, proximity-force baseline and the roughness correction
//
//   (F_rough - F_smooth) / F_smooth = [L^2 E''/(2E)] * (a/L)^2 * rho_bar.

#include <optional>
#include <string>
#include <vector>

#include "casrough/quadrature.hpp"
#include "casrough/sensitivity.hpp"
#include "casrough/spectrum.hpp"

namespace casrough {

// F_PS = 2 pi R E_PP / A. Units follow the inputs (energy per area times length).
double pfa_force_plane_sphere(double energy_per_area, double R);

// L^2 E'' / (2E): 3 for E ~ 1/L^2 (short), 6 for E ~ 1/L^3 (long).
double regime_prefactor(Regime regime);

// prefactor * a^2 / L^2.
double pfa_correction(double a_nm, double L_nm, Regime regime);

// a / L above 0.3: the second-order expansion is doubtful.
bool amplitude_too_large(double a_nm, double L_nm);

// Ideal-mirror plane-sphere force -pi^3 hbar c R / (360 L^3) in newtons.
// An idealization, used only for the optional absolute output.
double ideal_plane_sphere_force_newton(double L_nm, double R_nm);

struct Guards {
  bool pfa_geometry_ok = false;  // R / L >= 100
  bool averaging_ok = false;     // R L / lc^2 >= 100
  bool ergodic_ok = false;       // A / (pi lc^2) >= 100
};

inline constexpr double kGuardRatio = 100.0;

struct PlaneSphereSetup {
  double L_nm = 0.0;
  double R_nm = 0.0;
  Regime regime = Regime::short_distance;
  std::optional<double> lc_nm;    // absent when the spectrum has no valid estimate
  std::optional<double> area_nm2; // defaults to pi R L, the area that contributes to the force

  // Throws NonPositiveParameter unless L > 0 and R > 0.
  void validate() const;
  double area() const;
  Guards guards() const;
};

struct CorrectionReport {
  double prefactor = 0.0;
  double a_nm = 0.0;
  std::optional<double> lc_nm;
  double a_over_L_sq = 0.0;
  double rho_bar = 0.0;
  double relative_correction = 0.0;
  double pfa_relative_correction = 0.0;
  Guards guards;
  bool fallback_used = false;
  bool converged = true;
  std::vector<std::string> warnings;
};

CorrectionReport full_correction(const PlaneSphereSetup& setup, const RoughnessSpectrum& spectrum,
                                 const SensitivityCurve& curve, const QuadratureSpec& spec = {},
                                 const RhoBarOptions& options = {});

}  // namespace casrough
