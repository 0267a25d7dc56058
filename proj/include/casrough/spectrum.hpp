#pragma once

// Isotropic roughness spectra sigma(|k|) and height maps.
//
// Conventions: heights in nm, wavevectors in nm^-1, sigma in nm^4. The height
// variance is a^2 = int d^2k / 4pi^2 sigma(k).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "casrough/quadrature.hpp"
#include "casrough/sensitivity.hpp"

namespace casrough {

struct SpectrumPoint {
  double k;      // nm^-1
  double sigma;  // nm^4
};

class RoughnessSpectrum {
 public:
  enum class Kind { gaussian, tabulated };

  // sigma(k) = a^2 pi lc^2 exp(-k^2 lc^2 / 4). Throws NonPositiveParameter.
  static RoughnessSpectrum gaussian(double a_nm, double lc_nm);

  // Linear interpolation between points, zero past the last one. Points must
  // be strictly increasing in k, start at k >= 0, and have sigma >= 0.
  // a^2 is computed with variance_of() at construction; lc is the
  // Gaussian-equivalent estimate when sigma(0) > 0.
  static RoughnessSpectrum tabulated(std::vector<SpectrumPoint> table, const QuadratureSpec& spec = {});

  double operator()(double k_abs) const;

  Kind kind() const noexcept { return kind_; }
  double amplitude_sq() const noexcept { return amplitude_sq_; }
  std::optional<double> corr_length() const noexcept { return corr_length_; }
  std::span<const SpectrumPoint> table() const noexcept { return table_; }

  // Radius past which sigma is zero (tabulated) or below 1e-16 of its peak (gaussian).
  double k_support() const noexcept;

  // Same shape, sigma multiplied by factor > 0.
  RoughnessSpectrum scaled(double factor) const;

 private:
  RoughnessSpectrum() = default;

  Kind kind_ = Kind::gaussian;
  double amplitude_sq_ = 0.0;
  double gaussian_lc_ = 0.0;
  std::optional<double> corr_length_;
  std::vector<SpectrumPoint> table_;
};

// int d^2k/4pi^2 sigma(k): closed form for gaussian, radial quadrature for tabulated.
QuadratureResult variance_of(const RoughnessSpectrum& spectrum, const QuadratureSpec& spec = {});

// Gaussian-equivalent correlation length sqrt(sigma(0) / (pi a^2)).
// Throws ZeroVariance when a^2 == 0 and ZeroAtOrigin when sigma(0) == 0.
double estimate_corr_length(const RoughnessSpectrum& spectrum);

// Diagnostic: distance where the height autocorrelation
// C(r) = int k dk / 2pi sigma(k) J0(k r) first falls to C(0) / e.
// Equals lc for the gaussian spectrum.
double autocorrelation_length(const RoughnessSpectrum& spectrum, const QuadratureSpec& spec = {});

struct RhoBarOptions {
  // Allow evaluation of rho past its last sample (rho = beta x).
  bool allow_extrapolation = true;
};

// rho_bar = int d^2k/4pi^2 rho(|k| L) sigma(k) / a^2.
// Throws SensitivityRangeExceeded when extrapolation is disabled and at least
// 0.1% of the spectral weight lies past the curve's sampled range.
QuadratureResult rho_bar(const RoughnessSpectrum& spectrum, const SensitivityCurve& curve, double L_nm,
                         const QuadratureSpec& spec = {}, const RhoBarOptions& options = {});

// Tabulated-spectrum CSV: header `k_inv_nm,sigma_nm4`, rows strictly increasing in k.
RoughnessSpectrum parse_spectrum_csv(std::string_view content, const QuadratureSpec& spec = {});
RoughnessSpectrum load_spectrum_csv(const std::string& path, const QuadratureSpec& spec = {});

// --- height maps -----------------------------------------------------------

struct HeightMap {
  std::size_t nx = 0;
  std::size_t ny = 0;
  double dx = 0.0;  // nm per pixel
  double dy = 0.0;
  std::vector<double> heights;  // row-major, ny rows of nx values, nm

  double at(std::size_t ix, std::size_t iy) const { return heights[iy * nx + ix]; }
  double mean() const;
  double variance() const;
  double rms() const;
  double extent_x() const noexcept { return static_cast<double>(nx) * dx; }
  double extent_y() const noexcept { return static_cast<double>(ny) * dy; }

  void subtract_mean();
  // 90 degree rotation: (ix, iy) -> (iy, nx - 1 - ix).
  HeightMap rotated() const;
};

// Height-map text format: line 1 `nx ny dx_nm dy_nm`, then ny rows of nx
// heights in nm. The mean is subtracted. Throws ParseError, DimensionMismatch
// or NonFiniteHeight.
HeightMap ingest_height_map(std::string_view content);
HeightMap load_height_map(const std::string& path);
std::string format_height_map(const HeightMap& map);

// True when both physical extents reach 10 lc.
bool extent_covers_correlation(const HeightMap& map, double lc_nm);

enum class Window { none, hann };
Window parse_window(std::string_view text);

// Radially averaged periodogram. H(k) = sum h e^{-ik.r} dx dy,
// sigma(k) = |H|^2 / (nx dx ny dy), binned into rings of width
// max(2pi / (nx dx), 2pi / (ny dy)). Each ring's value is its summed
// weight divided by the ring area, so the variance is preserved. The
// k = 0 point repeats the first ring. With hann, the power is divided by
// the mean squared window. Throws MapTooSmall when nx or ny < 8.
RoughnessSpectrum periodogram(const HeightMap& map, Window window = Window::none, const QuadratureSpec& spec = {});

// Ratio of the mean power along kx to that along ky (1 for isotropic maps).
double anisotropy_ratio(const HeightMap& map);

enum class SyntheticSurface { white_noise, cosine, gaussian };

struct SyntheticMapSpec {
  SyntheticSurface kind = SyntheticSurface::white_noise;
  std::size_t nx = 64;
  std::size_t ny = 64;
  double dx = 1.0;
  double dy = 1.0;
  double rms = 1.0;       // target rms height, nm (cosine: amplitude h0 = rms * sqrt(2))
  double lc = 10.0;       // gaussian correlation length, nm
  std::size_t mode = 4;   // cosine: k0 = 2 pi mode / (nx dx), along x
  std::uint64_t seed = 1;
};

// Deterministic synthetic surfaces for testing and demos. Output is zero-mean
// and scaled to the requested rms.
HeightMap synthesize_height_map(const SyntheticMapSpec& spec);

}  // namespace casrough
