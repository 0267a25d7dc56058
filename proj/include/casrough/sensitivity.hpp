#pragma once

// Wavevector-resolved roughness sensitivity rho(|k| L).
//
// rho is the ratio G[k] / G[0] of the second-order roughness response of the
// plate-plate Casimir energy to its proximity-force (k -> 0) value. Curves are
// stored against the dimensionless product x = |k| L.

#include <span>
#include <string_view>
#include <vector>

#include "casrough/quadrature.hpp"

namespace casrough {

enum class Regime {
  short_distance,  // L << lambda_P, surface plasmons
  long_distance,   // L >> lambda_P, perfect reflectors
};

const char* to_string(Regime regime) noexcept;
// Accepts "short" or "long".
Regime parse_regime(std::string_view text);

inline constexpr double kSpeedOfLightNmPerS = 2.99792458e17;

// Plasma-model metal. Only omega_P is stored; lambda_P = 2 pi c / omega_P.
class PlasmaModel {
 public:
  explicit PlasmaModel(double omega_p_rad_s);
  static PlasmaModel from_plasma_wavelength(double lambda_p_nm);

  double omega_p() const noexcept { return omega_p_; }
  double lambda_p_nm() const noexcept;

 private:
  double omega_p_;
};

struct CurveSample {
  double x;
  double rho;
};

// How a curve is continued past its last sample.
enum class Extrapolation {
  asymptote,  // rho = beta * x
  hold,       // rho = last sampled value
};

class SensitivityCurve {
 public:
  struct Metadata {
    Regime regime = Regime::short_distance;
    double tolerance = 0.0;
    double asymptote_beta = 0.0;
    Extrapolation extrapolation = Extrapolation::asymptote;
    bool fallback = false;
    bool converged = true;
  };

  // Samples must be non-empty and strictly increasing in x, starting at x >= 0.
  SensitivityCurve(std::vector<CurveSample> samples, Metadata meta);

  // Linear interpolation inside the sampled range, extrapolation beyond it.
  double operator()(double x) const;

  std::span<const CurveSample> samples() const noexcept { return samples_; }
  double x_max() const noexcept { return samples_.back().x; }
  const Metadata& meta() const noexcept { return meta_; }
  Regime regime() const noexcept { return meta_.regime; }
  double asymptote_beta() const noexcept { return meta_.asymptote_beta; }
  bool fallback() const noexcept { return meta_.fallback; }
  bool converged() const noexcept { return meta_.converged; }

 private:
  std::vector<CurveSample> samples_;
  Metadata meta_;
};

// Least-squares slope of rho against x over samples with x in [x_lo, x_hi].
// Throws InvalidArgument with fewer than two samples in the window.
double fit_slope(std::span<const CurveSample> samples, double x_lo, double x_hi);

// --- short distances: surface-plasmon kernel -------------------------------

// TM reflection amplitude of a plasma-model mirror at imaginary frequency:
// r = -omega_P^2 / (omega_P^2 + 2 xi^2).
double plasma_reflection(double xi, const PlasmaModel& model);

// Second-order roughness kernel for plasma mirrors (TM, non-retarded),
// q_abs = |q|, p_abs = |p|, c = cos(q, p), at imaginary frequency xi.
double kernel_T(double q_abs, double p_abs, double c, double L, double xi, const PlasmaModel& model);

// G[k] per unit hbar*A, in rad s^-1 nm^-4.
//
// Sign: G carries the physical sign of the energy correction (negative, like
// E''_PP). Normalization: G[0] = E''_PP / 2 exactly; the bare kernel integrates
// to four times that at k = 0, so the triple integral is scaled by 1/4. Only
// the ratio rho = G[k] / G[0] enters the force correction.
//
// The kernel pairs q with p = q - k, so that c = +1 at k = 0.
QuadratureResult g_short(double k_abs, double L, const PlasmaModel& model, const QuadratureSpec& spec);

// rho_short(x) = G(x / L) / G(0) at L = lambda_P / 100. The result depends on
// x only; omega_P rescales G uniformly. asymptote_beta is the least-squares
// slope over x >= 20 when the grid reaches x = 40, else over the upper half.
SensitivityCurve rho_short(std::span<const double> xs, const PlasmaModel& model, const QuadratureSpec& spec);

// Smooth-plate plasmon energy per unit hbar*A (rad s^-1 nm^-2):
// E = int d^2k/4pi^2 int_0^inf dxi/2pi ln(1 - r^2 exp(-2|k|L)). Negative.
QuadratureResult plasmon_smooth_energy(double L, const PlasmaModel& model, const QuadratureSpec& spec);

// E''_PP by 5-point central differences of plasmon_smooth_energy, step L/50.
double plasmon_energy_second_derivative(double L, const PlasmaModel& model, const QuadratureSpec& spec);

// --- long distances: perfect reflectors ------------------------------------

// TM + TE second-order response of perfect mirrors as a function of
// s = |k| L / 2 pi. Supplied by a transcription of the corrugation result for
// ideal mirrors; the build ships none (see long_distance_response()).
struct PerfectReflectorResponse {
  double (*g_tm)(double s) = nullptr;
  double (*g_te)(double s) = nullptr;
};

// The transcribed response compiled into this build. Throws
// Error(TranscriptionUnavailable) when none is present.
PerfectReflectorResponse long_distance_response();

// Fallback rho_fb(x) = sqrt(1 + (x/3)^2): exact at both ends (1 at x = 0,
// x/3 for x -> inf), not physical in between.
double rho_long_fallback(double x);

// Long-distance curve from the transcribed response when available, otherwise
// the fallback (meta().fallback set).
SensitivityCurve rho_long(std::span<const double> xs);
SensitivityCurve rho_long(std::span<const double> xs, const PerfectReflectorResponse& response);

struct RegimeRow {
  double x;
  double rho_long;
  double rho_short;
};

// Merged table for both regimes. The two curves must share the sample grid.
std::vector<RegimeRow> compare_regimes(const SensitivityCurve& long_curve, const SensitivityCurve& short_curve);

}  // namespace casrough

namespace casrough {

// Grid used when a command needs a whole curve: 0 to 2 in steps of 0.2,
// 2.5 to 10 in steps of 0.5, 12 to 60 in steps of 2.
std::vector<double> default_kl_grid();

}  // namespace casrough
