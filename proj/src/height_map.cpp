#include <fftw3.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <fstream>
#include <limits>
#include <memory>
#include <numbers>
#include <random>
#include <sstream>

#include "casrough/error.hpp"
#include "casrough/spectrum.hpp"

namespace casrough {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr std::size_t kMinPeriodogramSize = 8;

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '\r') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size()) {
    throw Error(ErrorCode::ParseError, "line " + std::to_string(line) + ": bad " + what + " '" +
                                           std::string(token) + "'");
  }
  return value;
}

// Owning wrapper around an in-place 2D FFTW transform on (ny, nx) row-major data.
class Fft2d {
 public:
  Fft2d(std::size_t nx, std::size_t ny, int sign)
      : data_(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * nx * ny))) {
    // FFTW_ESTIMATE: plan choice must not depend on timing.
    plan_ = fftw_plan_dft_2d(static_cast<int>(ny), static_cast<int>(nx), data_.get(), data_.get(), sign,
                             FFTW_ESTIMATE);
  }
  ~Fft2d() { fftw_destroy_plan(plan_); }
  Fft2d(const Fft2d&) = delete;
  Fft2d& operator=(const Fft2d&) = delete;

  std::complex<double>* data() { return reinterpret_cast<std::complex<double>*>(data_.get()); }
  void execute() { fftw_execute(plan_); }

 private:
  struct Free {
    void operator()(fftw_complex* p) const { fftw_free(p); }
  };
  std::unique_ptr<fftw_complex, Free> data_;
  fftw_plan plan_;
};

// Signed frequency index for FFT bin j of n.
double signed_index(std::size_t j, std::size_t n) {
  return j <= n / 2 ? static_cast<double>(j) : static_cast<double>(j) - static_cast<double>(n);
}

double hann(std::size_t i, std::size_t n) {
  return 0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(i) / static_cast<double>(n)));
}

}  // namespace

double HeightMap::mean() const {
  if (heights.empty()) return 0.0;
  double sum = 0.0;
  for (double h : heights) sum += h;
  return sum / static_cast<double>(heights.size());
}

double HeightMap::variance() const {
  if (heights.empty()) return 0.0;
  const double m = mean();
  double sum = 0.0;
  for (double h : heights) sum += (h - m) * (h - m);
  return sum / static_cast<double>(heights.size());
}

double HeightMap::rms() const { return std::sqrt(variance()); }

void HeightMap::subtract_mean() {
  const double m = mean();
  for (double& h : heights) h -= m;
}

HeightMap HeightMap::rotated() const {
  HeightMap out;
  out.nx = ny;
  out.ny = nx;
  out.dx = dy;
  out.dy = dx;
  out.heights.resize(heights.size());
  for (std::size_t iy = 0; iy < ny; ++iy) {
    for (std::size_t ix = 0; ix < nx; ++ix) {
      out.heights[(nx - 1 - ix) * out.nx + iy] = at(ix, iy);
    }
  }
  return out;
}

HeightMap ingest_height_map(std::string_view content) {
  std::vector<std::pair<std::size_t, std::string_view>> lines;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  while (pos <= content.size()) {
    const auto end = std::min(content.find('\n', pos), content.size());
    const auto line = content.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.find_first_not_of(" \t\r") != std::string_view::npos) lines.emplace_back(line_no, line);
  }
  if (lines.empty()) throw Error(ErrorCode::ParseError, "empty height map");

  const auto header = split_ws(lines.front().second);
  if (header.size() != 4) throw Error(ErrorCode::ParseError, "header must be 'nx ny dx_nm dy_nm'");
  HeightMap map;
  map.nx = parse_number<std::size_t>(header[0], lines.front().first, "nx");
  map.ny = parse_number<std::size_t>(header[1], lines.front().first, "ny");
  map.dx = parse_number<double>(header[2], lines.front().first, "dx");
  map.dy = parse_number<double>(header[3], lines.front().first, "dy");
  if (map.nx == 0 || map.ny == 0) throw Error(ErrorCode::ParseError, "nx and ny must be positive");
  if (!(map.dx > 0.0) || !(map.dy > 0.0) || !std::isfinite(map.dx) || !std::isfinite(map.dy)) {
    throw Error(ErrorCode::ParseError, "pixel pitch must be positive and finite");
  }

  if (lines.size() - 1 != map.ny) {
    throw Error(ErrorCode::ParseError, "expected " + std::to_string(map.ny) + " rows, found " +
                                           std::to_string(lines.size() - 1));
  }
  map.heights.reserve(map.nx * map.ny);
  for (std::size_t row = 1; row < lines.size(); ++row) {
    const auto tokens = split_ws(lines[row].second);
    if (tokens.size() != map.nx) {
      throw Error(ErrorCode::DimensionMismatch, "line " + std::to_string(lines[row].first) + ": expected " +
                                                    std::to_string(map.nx) + " heights, found " +
                                                    std::to_string(tokens.size()));
    }
    for (const auto token : tokens) {
      const double h = parse_number<double>(token, lines[row].first, "height");
      if (!std::isfinite(h)) {
        throw Error(ErrorCode::NonFiniteHeight, "line " + std::to_string(lines[row].first) + ": '" +
                                                    std::string(token) + "'");
      }
      map.heights.push_back(h);
    }
  }
  map.subtract_mean();
  return map;
}

HeightMap load_height_map(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return ingest_height_map(buffer.str());
}

std::string format_height_map(const HeightMap& map) {
  std::ostringstream out;
  out.precision(17);
  out << map.nx << ' ' << map.ny << ' ' << map.dx << ' ' << map.dy << '\n';
  for (std::size_t iy = 0; iy < map.ny; ++iy) {
    for (std::size_t ix = 0; ix < map.nx; ++ix) {
      if (ix > 0) out << ' ';
      out << map.at(ix, iy);
    }
    out << '\n';
  }
  return out.str();
}

bool extent_covers_correlation(const HeightMap& map, double lc_nm) {
  return map.extent_x() >= 10.0 * lc_nm && map.extent_y() >= 10.0 * lc_nm;
}

Window parse_window(std::string_view text) {
  if (text == "none") return Window::none;
  if (text == "hann") return Window::hann;
  throw Error(ErrorCode::InvalidArgument, "window must be 'none' or 'hann'");
}

namespace {

// |H(k)|^2 / (nx dx ny dy) on the FFT grid, optionally windowed.
std::vector<double> raw_density(const HeightMap& map, Window window) {
  const std::size_t n = map.nx * map.ny;
  const double m = map.mean();
  Fft2d fft(map.nx, map.ny, FFTW_FORWARD);
  double window_power = 0.0;
  for (std::size_t iy = 0; iy < map.ny; ++iy) {
    for (std::size_t ix = 0; ix < map.nx; ++ix) {
      const double w = window == Window::hann ? hann(ix, map.nx) * hann(iy, map.ny) : 1.0;
      window_power += w * w;
      fft.data()[iy * map.nx + ix] = (map.at(ix, iy) - m) * w;
    }
  }
  window_power /= static_cast<double>(n);
  fft.execute();

  // |sum h e^{-ik.r} dx dy|^2 / (nx dx ny dy) = |FFT|^2 dx dy / (nx ny).
  const double norm = map.dx * map.dy / static_cast<double>(n) / window_power;
  std::vector<double> density(n);
  for (std::size_t i = 0; i < n; ++i) density[i] = std::norm(fft.data()[i]) * norm;
  return density;
}

}  // namespace

RoughnessSpectrum periodogram(const HeightMap& map, Window window, const QuadratureSpec& spec) {
  if (map.nx < kMinPeriodogramSize || map.ny < kMinPeriodogramSize) {
    throw Error(ErrorCode::MapTooSmall, "periodogram needs at least 8x8 pixels");
  }
  const std::vector<double> density = raw_density(map, window);

  const double dkx = kTwoPi / map.extent_x();
  const double dky = kTwoPi / map.extent_y();
  const double ring = std::max(dkx, dky);

  std::vector<double> weight;  // sum of sigma * dkx * dky per ring
  for (std::size_t iy = 0; iy < map.ny; ++iy) {
    const double ky = signed_index(iy, map.ny) * dky;
    for (std::size_t ix = 0; ix < map.nx; ++ix) {
      if (ix == 0 && iy == 0) continue;  // DC: removed with the mean
      const double kx = signed_index(ix, map.nx) * dkx;
      auto j = static_cast<std::size_t>(std::lround(std::hypot(kx, ky) / ring));
      j = std::max<std::size_t>(j, 1);
      if (weight.size() <= j) weight.resize(j + 1, 0.0);
      weight[j] += density[iy * map.nx + ix] * dkx * dky;
    }
  }

  std::vector<SpectrumPoint> table(weight.size());
  for (std::size_t j = 1; j < weight.size(); ++j) {
    const double area = kTwoPi * static_cast<double>(j) * ring * ring;
    table[j] = {static_cast<double>(j) * ring, weight[j] / area};
  }
  table[0] = {0.0, table[1].sigma};
  return RoughnessSpectrum::tabulated(std::move(table), spec);
}

double anisotropy_ratio(const HeightMap& map) {
  if (map.nx < kMinPeriodogramSize || map.ny < kMinPeriodogramSize) {
    throw Error(ErrorCode::MapTooSmall, "anisotropy needs at least 8x8 pixels");
  }
  const std::vector<double> density = raw_density(map, Window::none);
  double along_x = 0.0;
  double along_y = 0.0;
  for (std::size_t ix = 1; ix < map.nx; ++ix) along_x += density[ix];
  for (std::size_t iy = 1; iy < map.ny; ++iy) along_y += density[iy * map.nx];
  along_x /= static_cast<double>(map.nx - 1);
  along_y /= static_cast<double>(map.ny - 1);
  if (!(along_y > 0.0)) return along_x > 0.0 ? std::numeric_limits<double>::infinity() : 1.0;
  return along_x / along_y;
}

HeightMap synthesize_height_map(const SyntheticMapSpec& spec) {
  if (spec.nx == 0 || spec.ny == 0) throw Error(ErrorCode::InvalidArgument, "map size must be positive");
  if (!(spec.dx > 0.0) || !(spec.dy > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "pixel pitch must be > 0");
  if (!(spec.rms >= 0.0)) throw Error(ErrorCode::InvalidArgument, "rms must be >= 0");

  HeightMap map;
  map.nx = spec.nx;
  map.ny = spec.ny;
  map.dx = spec.dx;
  map.dy = spec.dy;
  map.heights.resize(spec.nx * spec.ny);

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  switch (spec.kind) {
    case SyntheticSurface::white_noise:
      for (double& h : map.heights) h = normal(rng);
      break;
    case SyntheticSurface::cosine: {
      const double k0 = kTwoPi * static_cast<double>(spec.mode) / map.extent_x();
      for (std::size_t iy = 0; iy < map.ny; ++iy) {
        for (std::size_t ix = 0; ix < map.nx; ++ix) {
          map.heights[iy * map.nx + ix] = std::cos(k0 * static_cast<double>(ix) * map.dx);
        }
      }
      break;
    }
    case SyntheticSurface::gaussian: {
      if (!(spec.lc > 0.0)) throw Error(ErrorCode::NonPositiveParameter, "correlation length must be > 0");
      // White noise filtered by sqrt(sigma(k)) has the Gaussian spectrum's shape.
      Fft2d forward(map.nx, map.ny, FFTW_FORWARD);
      Fft2d backward(map.nx, map.ny, FFTW_BACKWARD);
      for (std::size_t i = 0; i < map.heights.size(); ++i) forward.data()[i] = normal(rng);
      forward.execute();
      const double dkx = kTwoPi / map.extent_x();
      const double dky = kTwoPi / map.extent_y();
      for (std::size_t iy = 0; iy < map.ny; ++iy) {
        const double ky = signed_index(iy, map.ny) * dky;
        for (std::size_t ix = 0; ix < map.nx; ++ix) {
          const double kx = signed_index(ix, map.nx) * dkx;
          const double k2 = kx * kx + ky * ky;
          const std::size_t i = iy * map.nx + ix;
          backward.data()[i] = forward.data()[i] * std::exp(-k2 * spec.lc * spec.lc / 8.0);
        }
      }
      backward.execute();
      for (std::size_t i = 0; i < map.heights.size(); ++i) map.heights[i] = backward.data()[i].real();
      break;
    }
  }

  map.subtract_mean();
  const double current = map.rms();
  if (current > 0.0) {
    for (double& h : map.heights) h *= spec.rms / current;
  }
  return map;
}

}  // namespace casrough
