#include "casrough/spectrum.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "casrough/error.hpp"

namespace casrough {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// exp(-k^2 lc^2 / 4) < 1e-16 past k lc = 2 sqrt(16 ln 10).
const double kGaussianSupport = 2.0 * std::sqrt(16.0 * std::numbers::ln10);

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double parse_double(std::string_view token, int line) {
  token = trim(token);
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw Error(ErrorCode::ParseError,
                "line " + std::to_string(line) + ": not a number: '" + std::string(token) + "'");
  }
  return value;
}

// Breakpoints for radial integrals: table abscissae and curve samples.
std::vector<double> radial_breaks(const RoughnessSpectrum& spectrum, const SensitivityCurve* curve, double L) {
  std::vector<double> breaks;
  for (const SpectrumPoint& p : spectrum.table()) breaks.push_back(p.k);
  if (curve != nullptr) {
    for (const CurveSample& s : curve->samples()) breaks.push_back(s.x / L);
  }
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
  return breaks;
}

double radial_lower_bound(const RoughnessSpectrum& spectrum) {
  return spectrum.kind() == RoughnessSpectrum::Kind::tabulated ? spectrum.table().front().k : 0.0;
}

}  // namespace

RoughnessSpectrum RoughnessSpectrum::gaussian(double a_nm, double lc_nm) {
  if (!(a_nm > 0.0) || !std::isfinite(a_nm)) {
    throw Error(ErrorCode::NonPositiveParameter, "roughness amplitude must be > 0");
  }
  if (!(lc_nm > 0.0) || !std::isfinite(lc_nm)) {
    throw Error(ErrorCode::NonPositiveParameter, "correlation length must be > 0");
  }
  RoughnessSpectrum s;
  s.kind_ = Kind::gaussian;
  s.amplitude_sq_ = a_nm * a_nm;
  s.gaussian_lc_ = lc_nm;
  s.corr_length_ = lc_nm;
  return s;
}

RoughnessSpectrum RoughnessSpectrum::tabulated(std::vector<SpectrumPoint> table, const QuadratureSpec& spec) {
  if (table.size() < 2) throw Error(ErrorCode::InvalidArgument, "tabulated spectrum needs at least two points");
  if (!(table.front().k >= 0.0)) throw Error(ErrorCode::InvalidArgument, "spectrum table must start at k >= 0");
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (!std::isfinite(table[i].k) || !std::isfinite(table[i].sigma)) {
      throw Error(ErrorCode::InvalidArgument, "non-finite spectrum table entry");
    }
    if (table[i].sigma < 0.0) throw Error(ErrorCode::InvalidArgument, "spectral density must be >= 0");
    if (i > 0 && !(table[i].k > table[i - 1].k)) {
      throw Error(ErrorCode::InvalidArgument, "spectrum table must be strictly increasing in k");
    }
  }
  RoughnessSpectrum s;
  s.kind_ = Kind::tabulated;
  s.table_ = std::move(table);
  s.amplitude_sq_ = variance_of(s, spec).value;
  if (s.amplitude_sq_ > 0.0 && s.table_.front().k == 0.0 && s.table_.front().sigma > 0.0) {
    s.corr_length_ = estimate_corr_length(s);
  }
  return s;
}

double RoughnessSpectrum::operator()(double k_abs) const {
  if (kind_ == Kind::gaussian) {
    const double lc2 = gaussian_lc_ * gaussian_lc_;
    return amplitude_sq_ * std::numbers::pi * lc2 * std::exp(-k_abs * k_abs * lc2 / 4.0);
  }
  if (k_abs < table_.front().k || k_abs > table_.back().k) return 0.0;
  const auto upper = std::upper_bound(table_.begin(), table_.end(), k_abs,
                                      [](double value, const SpectrumPoint& p) { return value < p.k; });
  if (upper == table_.end()) return table_.back().sigma;
  const auto lower = upper - 1;
  const double t = (k_abs - lower->k) / (upper->k - lower->k);
  return lower->sigma + t * (upper->sigma - lower->sigma);
}

double RoughnessSpectrum::k_support() const noexcept {
  return kind_ == Kind::gaussian ? kGaussianSupport / gaussian_lc_ : table_.back().k;
}

RoughnessSpectrum RoughnessSpectrum::scaled(double factor) const {
  if (!(factor > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "scale factor must be > 0");
  RoughnessSpectrum s = *this;
  s.amplitude_sq_ *= factor;
  for (SpectrumPoint& p : s.table_) p.sigma *= factor;
  return s;
}

QuadratureResult variance_of(const RoughnessSpectrum& spectrum, const QuadratureSpec& spec) {
  if (spectrum.kind() == RoughnessSpectrum::Kind::gaussian) {
    return {spectrum.amplitude_sq(), 0.0, 0, true};
  }
  const auto breaks = radial_breaks(spectrum, nullptr, 1.0);
  auto integrand = [&spectrum](double k) { return k * spectrum(k); };
  QuadratureResult r = integrate_1d(integrand, radial_lower_bound(spectrum), spectrum.k_support(), breaks, spec);
  r.value /= kTwoPi;
  r.error_estimate /= kTwoPi;
  return r;
}

double estimate_corr_length(const RoughnessSpectrum& spectrum) {
  const double a2 = spectrum.amplitude_sq();
  if (!(a2 > 0.0)) throw Error(ErrorCode::ZeroVariance, "spectrum has zero variance");
  const double at_origin = spectrum(0.0);
  if (!std::isfinite(at_origin)) throw Error(ErrorCode::ZeroAtOrigin, "sigma(0) is not finite");
  if (!(at_origin > 0.0)) throw Error(ErrorCode::ZeroAtOrigin, "sigma(0) = 0, no Gaussian-equivalent length");
  return std::sqrt(at_origin / (std::numbers::pi * a2));
}

double autocorrelation_length(const RoughnessSpectrum& spectrum, const QuadratureSpec& spec) {
  const double lo = radial_lower_bound(spectrum);
  const double hi = spectrum.k_support();
  const auto breaks = radial_breaks(spectrum, nullptr, 1.0);
  auto correlation = [&](double r) {
    auto integrand = [&](double k) { return k * spectrum(k) * std::cyl_bessel_j(0.0, k * r); };
    return integrate_1d(integrand, lo, hi, breaks, spec).value;
  };
  const double c0 = correlation(0.0);
  if (!(c0 > 0.0)) throw Error(ErrorCode::ZeroVariance, "spectrum has zero variance");

  // Step in units of the inverse mean wavevector until C(r) crosses C(0)/e.
  auto first_moment = [&](double k) { return k * k * spectrum(k); };
  const double k_mean = integrate_1d(first_moment, lo, hi, breaks, spec).value / (kTwoPi * c0);
  const double step = 0.05 / k_mean;
  const double level = c0 / std::numbers::e;
  double r_lo = 0.0;
  double r_hi = step;
  int steps = 0;
  while (correlation(r_hi) > level) {
    r_lo = r_hi;
    r_hi += step;
    if (++steps > 2000) throw Error(ErrorCode::InvalidArgument, "autocorrelation never falls to 1/e");
  }
  for (int i = 0; i < 60; ++i) {
    const double mid = 0.5 * (r_lo + r_hi);
    (correlation(mid) > level ? r_lo : r_hi) = mid;
  }
  return 0.5 * (r_lo + r_hi);
}

QuadratureResult rho_bar(const RoughnessSpectrum& spectrum, const SensitivityCurve& curve, double L_nm,
                         const QuadratureSpec& spec, const RhoBarOptions& options) {
  if (!(L_nm > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "L must be > 0");
  const double lo = radial_lower_bound(spectrum);
  const double hi = spectrum.k_support();
  const auto breaks = radial_breaks(spectrum, &curve, L_nm);

  auto weight = [&spectrum](double k) { return k * spectrum(k); };
  const QuadratureResult total = integrate_1d(weight, lo, hi, breaks, spec);
  if (!(total.value > 0.0)) throw Error(ErrorCode::ZeroVariance, "spectrum has zero variance");

  const double k_curve = curve.x_max() / L_nm;
  if (!options.allow_extrapolation && k_curve < hi) {
    const QuadratureResult outside = integrate_1d(weight, std::max(lo, k_curve), hi, breaks, spec);
    if (outside.value >= 1e-3 * total.value) {
      throw Error(ErrorCode::SensitivityRangeExceeded,
                  "spectrum has " + std::to_string(100.0 * outside.value / total.value) +
                      "% of its weight past |k|L = " + std::to_string(curve.x_max()));
    }
  }

  auto weighted = [&](double k) { return k * spectrum(k) * curve(k * L_nm); };
  const QuadratureResult numerator = integrate_1d(weighted, lo, hi, breaks, spec);

  QuadratureResult r;
  r.value = numerator.value / total.value;
  r.error_estimate = std::abs(r.value) * (numerator.error_estimate / std::abs(numerator.value) +
                                          total.error_estimate / total.value);
  r.evaluations = numerator.evaluations + total.evaluations;
  r.converged = numerator.converged && total.converged;
  return r;
}

RoughnessSpectrum parse_spectrum_csv(std::string_view content, const QuadratureSpec& spec) {
  std::vector<SpectrumPoint> table;
  bool header_seen = false;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= content.size()) {
    const auto end = std::min(content.find('\n', pos), content.size());
    const std::string_view line = trim(content.substr(pos, end - pos));
    pos = end + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line.substr(0, 18) != "k_inv_nm,sigma_nm4") {
        throw Error(ErrorCode::ParseError, "expected header 'k_inv_nm,sigma_nm4'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string_view::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected two columns");
    }
    const auto rest = line.substr(comma + 1);
    const double k = parse_double(line.substr(0, comma), line_no);
    const double sigma = parse_double(rest.substr(0, rest.find(',')), line_no);
    table.push_back({k, sigma});
  }
  if (!header_seen) throw Error(ErrorCode::ParseError, "empty spectrum file");
  try {
    return RoughnessSpectrum::tabulated(std::move(table), spec);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidArgument) throw Error(ErrorCode::ParseError, e.what());
    throw;
  }
}

RoughnessSpectrum load_spectrum_csv(const std::string& path, const QuadratureSpec& spec) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_spectrum_csv(buffer.str(), spec);
}

}  // namespace casrough
