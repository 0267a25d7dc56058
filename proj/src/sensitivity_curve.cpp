#include <algorithm>
#include <cmath>

#include "casrough/error.hpp"
#include "casrough/sensitivity.hpp"

namespace casrough {

SensitivityCurve::SensitivityCurve(std::vector<CurveSample> samples, Metadata meta)
    : samples_(std::move(samples)), meta_(meta) {
  if (samples_.empty()) throw Error(ErrorCode::InvalidArgument, "sensitivity curve has no samples");
  if (!(samples_.front().x >= 0.0)) throw Error(ErrorCode::InvalidArgument, "curve must start at x >= 0");
  for (std::size_t i = 0; i < samples_.size(); ++i) {
    if (!std::isfinite(samples_[i].rho)) throw Error(ErrorCode::InvalidArgument, "non-finite rho sample");
    if (i > 0 && !(samples_[i].x > samples_[i - 1].x)) {
      throw Error(ErrorCode::InvalidArgument, "curve samples must be strictly increasing in x");
    }
  }
}

double SensitivityCurve::operator()(double x) const {
  if (x >= samples_.back().x) {
    if (x == samples_.back().x || meta_.extrapolation == Extrapolation::hold) return samples_.back().rho;
    return meta_.asymptote_beta * x;
  }
  if (x <= samples_.front().x) return samples_.front().rho;
  const auto upper = std::upper_bound(samples_.begin(), samples_.end(), x,
                                      [](double value, const CurveSample& s) { return value < s.x; });
  const auto lower = upper - 1;
  const double t = (x - lower->x) / (upper->x - lower->x);
  return lower->rho + t * (upper->rho - lower->rho);
}

double fit_slope(std::span<const CurveSample> samples, double x_lo, double x_hi) {
  double n = 0.0;
  double sx = 0.0;
  double sy = 0.0;
  for (const CurveSample& s : samples) {
    if (s.x < x_lo || s.x > x_hi) continue;
    n += 1.0;
    sx += s.x;
    sy += s.rho;
  }
  if (n < 2.0) throw Error(ErrorCode::InvalidArgument, "slope fit needs at least two samples");
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const CurveSample& s : samples) {
    if (s.x < x_lo || s.x > x_hi) continue;
    sxx += (s.x - mx) * (s.x - mx);
    sxy += (s.x - mx) * (s.rho - my);
  }
  return sxy / sxx;
}

}  // namespace casrough

namespace casrough {

std::vector<double> default_kl_grid() {
  std::vector<double> xs;
  for (int i = 0; i <= 10; ++i) xs.push_back(0.2 * i);
  for (int i = 5; i <= 20; ++i) xs.push_back(0.5 * i);
  for (int i = 6; i <= 30; ++i) xs.push_back(2.0 * i);
  return xs;
}

}  // namespace casrough
