#include <cmath>
#include <numbers>

#include "casrough/error.hpp"
#include "casrough/sensitivity.hpp"

namespace casrough {
namespace {

constexpr double kLongBeta = 1.0 / 3.0;

void check_grid(std::span<const double> xs) {
  if (xs.empty()) throw Error(ErrorCode::InvalidArgument, "rho_long needs at least one point");
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (!(xs[i] >= 0.0)) throw Error(ErrorCode::InvalidArgument, "|k|L values must be >= 0");
    if (i > 0 && !(xs[i] > xs[i - 1])) throw Error(ErrorCode::InvalidArgument, "|k|L values must increase");
  }
}

}  // namespace

PerfectReflectorResponse long_distance_response() {
  // Extension point: return the transcribed G_TM / G_TE here.
  throw Error(ErrorCode::TranscriptionUnavailable,
              "no perfect-reflector response compiled in; using sqrt(1 + (x/3)^2)");
}

double rho_long_fallback(double x) {
  const double t = x * kLongBeta;
  return std::sqrt(1.0 + t * t);
}

SensitivityCurve rho_long(std::span<const double> xs, const PerfectReflectorResponse& response) {
  check_grid(xs);
  if (response.g_tm == nullptr || response.g_te == nullptr) {
    throw Error(ErrorCode::TranscriptionUnavailable, "incomplete perfect-reflector response");
  }
  const double at_zero = response.g_tm(0.0) + response.g_te(0.0);
  std::vector<CurveSample> samples;
  samples.reserve(xs.size());
  for (double x : xs) {
    const double s = x / (2.0 * std::numbers::pi);
    samples.push_back({x, (response.g_tm(s) + response.g_te(s)) / at_zero});
  }
  SensitivityCurve::Metadata meta;
  meta.regime = Regime::long_distance;
  meta.asymptote_beta = kLongBeta;
  return SensitivityCurve(std::move(samples), meta);
}

SensitivityCurve rho_long(std::span<const double> xs) {
  check_grid(xs);
  try {
    return rho_long(xs, long_distance_response());
  } catch (const Error& e) {
    if (e.code() != ErrorCode::TranscriptionUnavailable) throw;
  }
  std::vector<CurveSample> samples;
  samples.reserve(xs.size());
  for (double x : xs) samples.push_back({x, rho_long_fallback(x)});
  SensitivityCurve::Metadata meta;
  meta.regime = Regime::long_distance;
  meta.asymptote_beta = kLongBeta;
  meta.fallback = true;
  return SensitivityCurve(std::move(samples), meta);
}

std::vector<RegimeRow> compare_regimes(const SensitivityCurve& long_curve, const SensitivityCurve& short_curve) {
  const auto a = long_curve.samples();
  const auto b = short_curve.samples();
  if (a.size() != b.size()) throw Error(ErrorCode::InvalidArgument, "curves sampled on different grids");
  std::vector<RegimeRow> rows;
  rows.reserve(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].x != b[i].x) throw Error(ErrorCode::InvalidArgument, "curves sampled on different grids");
    rows.push_back({a[i].x, a[i].rho, b[i].rho});
  }
  return rows;
}

}  // namespace casrough
