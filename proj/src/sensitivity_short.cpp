#include <algorithm>
#include <cmath>
#include <numbers>

#include "casrough/error.hpp"
#include "casrough/sensitivity.hpp"

namespace casrough {
namespace {

// The bare kernel gives G[0] = 4 * E''/2; see g_short().
constexpr double kKernelNormalization = 0.25;

// Radial cutoff (30 + 2x) / L keeps the dropped tail below exp(-60).
constexpr double kRadialCutoff = 30.0;

// Kernel with the exponentials precomputed; r2 = r^2.
double kernel_core(double q_abs, double p_abs, double c, double exp_q, double exp_p, double r) {
  const double r2 = r * r;
  const double one_minus_c = 1.0 - c;
  const double cavity = q_abs / (1.0 - r2 * exp_q) * p_abs / (1.0 - r2 * exp_p);
  const double both = 2.0 * (1.0 - r2) * one_minus_c * one_minus_c * r2 * r2 * exp_q * exp_p;
  const double single =
      (2.0 * r2 * one_minus_c * one_minus_c - 2.0 * r * (1.0 - c * c) + 4.0 * c) * r2 * (exp_q + exp_p);
  return cavity * (both + single);
}

}  // namespace

const char* to_string(Regime regime) noexcept {
  return regime == Regime::short_distance ? "short" : "long";
}

Regime parse_regime(std::string_view text) {
  if (text == "short") return Regime::short_distance;
  if (text == "long") return Regime::long_distance;
  throw Error(ErrorCode::InvalidArgument, "regime must be 'short' or 'long', got '" + std::string(text) + "'");
}

PlasmaModel::PlasmaModel(double omega_p_rad_s) : omega_p_(omega_p_rad_s) {
  if (!(omega_p_rad_s > 0.0) || !std::isfinite(omega_p_rad_s)) {
    throw Error(ErrorCode::NonPositiveParameter, "plasma frequency must be > 0");
  }
}

PlasmaModel PlasmaModel::from_plasma_wavelength(double lambda_p_nm) {
  if (!(lambda_p_nm > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "plasma wavelength must be > 0");
  return PlasmaModel(2.0 * std::numbers::pi * kSpeedOfLightNmPerS / lambda_p_nm);
}

double PlasmaModel::lambda_p_nm() const noexcept {
  return 2.0 * std::numbers::pi * kSpeedOfLightNmPerS / omega_p_;
}

double plasma_reflection(double xi, const PlasmaModel& model) {
  const double w2 = model.omega_p() * model.omega_p();
  return -w2 / (w2 + 2.0 * xi * xi);
}

double kernel_T(double q_abs, double p_abs, double c, double L, double xi, const PlasmaModel& model) {
  return kernel_core(q_abs, p_abs, c, std::exp(-2.0 * q_abs * L), std::exp(-2.0 * p_abs * L),
                     plasma_reflection(xi, model));
}

QuadratureResult g_short(double k_abs, double L, const PlasmaModel& model, const QuadratureSpec& spec) {
  if (!(L > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "L must be > 0");
  if (!(k_abs >= 0.0)) throw Error(ErrorCode::InvalidArgument, "|k| must be >= 0");
  spec.validate();

  QuadratureSpec xi_spec = spec.inner(100.0);
  xi_spec.semi_infinite_scale = model.omega_p() / std::numbers::sqrt2;

  std::size_t xi_evaluations = 0;
  bool xi_converged = true;
  const double p_floor = 1e-12 / L;

  // theta is the angle of q measured from k; p = q - k.
  auto integrand = [&](double q_abs, double theta) {
    const double s = std::sin(0.5 * theta);
    const double dq = q_abs - k_abs;
    const double p_abs = std::sqrt(dq * dq + 4.0 * q_abs * k_abs * s * s);
    if (p_abs < p_floor) return 0.0;
    const double c = std::clamp((q_abs - k_abs * std::cos(theta)) / p_abs, -1.0, 1.0);
    const double exp_q = std::exp(-2.0 * q_abs * L);
    const double exp_p = std::exp(-2.0 * p_abs * L);
    auto over_xi = [&](double xi) {
      return kernel_core(q_abs, p_abs, c, exp_q, exp_p, plasma_reflection(xi, model));
    };
    const QuadratureResult r = integrate_semi_infinite(over_xi, xi_spec);
    xi_evaluations += r.evaluations;
    xi_converged = xi_converged && r.converged;
    return r.value;
  };

  PolarOptions options;
  options.mirror_symmetric = true;
  if (k_abs > 0.0) {
    options.radial_breaks = {k_abs};
    // The e^{-2|p|L} peak at theta = 0 has angular width ~ 1 / (L sqrt(|q||k|)).
    options.angular_breaks = [k_abs, L](double q_abs) {
      std::vector<double> breaks;
      const double width = 1.0 / (L * std::sqrt(q_abs * k_abs));
      for (double t = width; t < std::numbers::pi; t *= 4.0) breaks.push_back(t);
      return breaks;
    };
  }

  const double r_max = (kRadialCutoff + 2.0 * k_abs * L) / L;
  QuadratureResult result = integrate_polar_2d(integrand, r_max, spec, options);

  // d^2q / 4pi^2 and dxi / 2pi, the overall minus, and the kernel normalization.
  const double measure = -kKernelNormalization / (4.0 * std::numbers::pi * std::numbers::pi) /
                         (2.0 * std::numbers::pi);
  result.value *= measure;
  result.error_estimate *= std::abs(measure);
  result.evaluations += xi_evaluations;
  result.converged = result.converged && xi_converged;
  return result;
}

SensitivityCurve rho_short(std::span<const double> xs, const PlasmaModel& model, const QuadratureSpec& spec) {
  if (xs.empty()) throw Error(ErrorCode::InvalidArgument, "rho_short needs at least one point");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "|k|L values must be >= 0");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw Error(ErrorCode::InvalidArgument, "|k|L values must increase");
  }

  const double L = model.lambda_p_nm() / 100.0;
  const QuadratureResult g0 = g_short(0.0, L, model, spec);
  bool converged = g0.converged;

  std::vector<CurveSample> samples;
  samples.reserve(xs.size());
  for (double x : xs) {
    if (x == 0.0) {
      samples.push_back({0.0, 1.0});
      continue;
    }
    const QuadratureResult gk = g_short(x / L, L, model, spec);
    converged = converged && gk.converged;
    samples.push_back({x, gk.value / g0.value});
  }

  SensitivityCurve::Metadata meta;
  meta.regime = Regime::short_distance;
  meta.tolerance = spec.rel_tol;
  meta.converged = converged;
  const double x_last = samples.back().x;
  if (samples.size() >= 2) {
    const double x_lo = x_last >= 40.0 ? 20.0 : 0.5 * x_last;
    const auto in_window = std::count_if(samples.begin(), samples.end(),
                                         [x_lo](const CurveSample& s) { return s.x >= x_lo; });
    meta.asymptote_beta = in_window >= 2 ? fit_slope(samples, x_lo, x_last)
                                         : (samples.back().rho - samples.front().rho) /
                                               (x_last - samples.front().x);
  }
  return SensitivityCurve(std::move(samples), meta);
}

QuadratureResult plasmon_smooth_energy(double L, const PlasmaModel& model, const QuadratureSpec& spec) {
  if (!(L > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "L must be > 0");
  spec.validate();

  QuadratureSpec xi_spec = spec.inner();
  xi_spec.semi_infinite_scale = model.omega_p() / std::numbers::sqrt2;

  std::size_t xi_evaluations = 0;
  bool xi_converged = true;
  auto radial = [&](double k_abs) {
    const double decay = std::exp(-2.0 * k_abs * L);
    auto over_xi = [&](double xi) {
      const double r = plasma_reflection(xi, model);
      return std::log1p(-r * r * decay);
    };
    const QuadratureResult r = integrate_semi_infinite(over_xi, xi_spec);
    xi_evaluations += r.evaluations;
    xi_converged = xi_converged && r.converged;
    return k_abs * r.value;
  };

  QuadratureResult result = integrate_1d(radial, 0.0, kRadialCutoff / L, spec);
  // d^2k/4pi^2 -> k dk / 2pi, and dxi / 2pi.
  const double measure = 1.0 / (2.0 * std::numbers::pi) / (2.0 * std::numbers::pi);
  result.value *= measure;
  result.error_estimate *= measure;
  result.evaluations += xi_evaluations;
  result.converged = result.converged && xi_converged;
  return result;
}

double plasmon_energy_second_derivative(double L, const PlasmaModel& model, const QuadratureSpec& spec) {
  const double h = L / 50.0;
  auto e = [&](double z) { return plasmon_smooth_energy(z, model, spec).value; };
  return (-e(L + 2.0 * h) + 16.0 * e(L + h) - 30.0 * e(L) + 16.0 * e(L - h) - e(L - 2.0 * h)) /
         (12.0 * h * h);
}

}  // namespace casrough
