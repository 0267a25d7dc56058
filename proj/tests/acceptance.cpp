// Acceptance suite: one PASS/FAIL line per criterion. Every tolerance is a
// named constant below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "casrough/cli.hpp"
#include "casrough/error.hpp"
#include "casrough/pfa.hpp"
#include "casrough/sensitivity.hpp"
#include "casrough/spectrum.hpp"

using namespace casrough;

namespace {

constexpr double kSmallXLo = 0.98;
constexpr double kSmallXHi = 1.06;
constexpr double kSmallXMaxSeconds = 60.0;
constexpr double kShortBetaLo = 0.43;
constexpr double kShortBetaHi = 0.47;
constexpr double kShortBetaMaxSeconds = 1800.0;
constexpr double kLongBetaLo = 0.32;
constexpr double kLongBetaHi = 0.35;
constexpr double kPrefactorTol = 0.01;
constexpr double kLinearRhoBarTol = 0.01;
constexpr double kTrueRhoBarTol = 0.10;
constexpr double kSweepSlopeTol = 0.1;
constexpr double kCurvatureTol = 0.01;
constexpr double kParsevalTol = 0.02;
constexpr double kGaussianNormTol = 0.005;

constexpr double kOmegaGold = 1.37e16;  // rad/s, a representative plasma frequency

int failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("[%s] criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<double> range(double lo, double hi, double step) {
  std::vector<double> xs;
  const int n = static_cast<int>(std::lround((hi - lo) / step));
  for (int i = 0; i <= n; ++i) xs.push_back(lo + step * i);
  return xs;
}

struct CliRun {
  int code;
  std::string out;
};

CliRun cli(std::vector<std::string> args) {
  args.insert(args.begin(), "casrough");
  std::ostringstream out;
  std::ostringstream err;
  const int code = run_cli(args, out, err);
  return {code, out.str()};
}

// Least-squares slope of log y against log x.
double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::abs(y[i]));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<std::vector<double>> csv_rows(const std::string& text) {
  std::vector<std::vector<double>> rows;
  std::istringstream in(text);
  std::string line;
  bool header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      header = true;
      continue;
    }
    std::vector<double> row;
    std::istringstream fields(line);
    std::string field;
    while (std::getline(fields, field, ',')) row.push_back(std::stod(field));
    rows.push_back(row);
  }
  return rows;
}

void run_criterion(int id, const std::function<void()>& body) {
  try {
    body();
  } catch (const std::exception& e) {
    report(id, false, std::string("exception: ") + e.what());
  }
}

}  // namespace

int main() {
  const QuadratureSpec spec;
  const PlasmaModel model(kOmegaGold);

  // Shared short-distance curve on the standard grid.
  const auto grid = default_kl_grid();
  const auto t_curve = std::chrono::steady_clock::now();
  const SensitivityCurve short_curve = rho_short(grid, model, spec);
  const double curve_seconds = seconds_since(t_curve);

  run_criterion(1, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto xs = range(0.0, 0.3, 0.05);
    const auto c = rho_short(xs, model, spec);
    const double secs = seconds_since(t0);
    bool ok = c.samples()[0].rho == 1.0 && secs < kSmallXMaxSeconds && c.converged();
    double lo = 1e9, hi = -1e9;
    for (const auto& s : c.samples()) {
      lo = std::min(lo, s.rho);
      hi = std::max(hi, s.rho);
      ok = ok && s.rho >= kSmallXLo && s.rho <= kSmallXHi;
    }
    report(1, ok,
           "rho_short(x<=0.3) in [" + fmt(lo) + ", " + fmt(hi) + "], rho(0)=" + fmt(c.samples()[0].rho) + ", " +
               fmt(secs) + " s");
  });

  run_criterion(2, [&] {
    const auto t0 = std::chrono::steady_clock::now();
    const auto c = rho_short(range(20.0, 60.0, 2.0), model, spec);
    const double secs = seconds_since(t0);
    const double beta = fit_slope(c.samples(), 20.0, 60.0);
    report(2, beta >= kShortBetaLo && beta <= kShortBetaHi && secs < kShortBetaMaxSeconds && c.converged(),
           "short slope over [20,60] = " + fmt(beta) + ", " + fmt(secs) + " s (full 52-point curve " +
               fmt(curve_seconds) + " s)");
  });

  run_criterion(3, [&] {
    const auto c = rho_long(range(0.0, 100.0, 2.0));
    const double beta = fit_slope(c.samples(), 30.0, 100.0);
    report(3, beta >= kLongBetaLo && beta <= kLongBetaHi,
           "long slope over [30,100] = " + fmt(beta) + (c.fallback() ? " (FALLBACK curve sqrt(1+(x/3)^2))" : ""));
  });

  run_criterion(4, [&] {
    const auto xs = range(0.0, 20.0, 0.5);
    const auto rows = compare_regimes(rho_long(xs), rho_short(xs, model, spec));
    bool ok = true;
    double worst = 1e9;
    for (const RegimeRow& r : rows) {
      if (r.x < 2.0) continue;
      ok = ok && r.rho_short > r.rho_long;
      worst = std::min(worst, r.rho_short - r.rho_long);
    }
    report(4, ok, "smoke test: rho_short > rho_long for x >= 2, min gap " + fmt(worst) + " (long is the fallback)");
  });

  run_criterion(5, [&] {
    const double L = model.lambda_p_nm() / 100.0;
    const double E = plasmon_smooth_energy(L, model, spec).value;
    const double d2 = plasmon_energy_second_derivative(L, model, spec);
    const double ratio = L * L * d2 / (2.0 * E);
    const bool ok = regime_prefactor(Regime::long_distance) == 6.0 &&
                    regime_prefactor(Regime::short_distance) == 3.0 && std::abs(ratio - 3.0) <= kPrefactorTol * 3.0;
    report(5, ok, "prefactors 6 / 3; numerical L^2 E''/2E at lambda_P/100 = " + fmt(ratio));
  });

  run_criterion(6, [&] {
    const double lc = 100.0;
    const double beta = short_curve.asymptote_beta();
    SensitivityCurve::Metadata meta;
    meta.asymptote_beta = beta;
    const SensitivityCurve linear({{0.0, 0.0}, {1.0, beta}}, meta);
    const auto spectrum = RoughnessSpectrum::gaussian(1.0, lc);
    bool ok = true;
    std::string detail;
    for (double r : {5.0, 20.0, 50.0}) {
      const double expected = beta * std::sqrt(std::numbers::pi) * r;
      const double got = rho_bar(spectrum, linear, r * lc, spec).value;
      ok = ok && std::abs(got / expected - 1.0) <= kLinearRhoBarTol;
      detail += " L/lc=" + fmt(r) + ": " + fmt(got / expected - 1.0);
    }
    const double expected20 = beta * std::sqrt(std::numbers::pi) * 20.0;
    const double true20 = rho_bar(spectrum, short_curve, 20.0 * lc, spec).value;
    const double dev = true20 / expected20 - 1.0;
    ok = ok && std::abs(dev) <= kTrueRhoBarTol;
    report(6, ok,
           "beta x curve rel. dev." + detail + "; true curve at L/lc=20: rho_bar=" + fmt(true20) + " (dev " +
               fmt(dev) + ")");
  });

  run_criterion(7, [&] {
    const auto dir = std::filesystem::temp_directory_path() / "casrough_acceptance";
    std::filesystem::create_directories(dir);
    const auto curve_path = dir / "short_curve.csv";
    const CliRun curve = cli({"rho", "--regime", "short", "--kl-max", "60", "--points", "121"});
    if (curve.code != 0) throw std::runtime_error("rho command failed");
    std::ofstream(curve_path) << curve.out;

    auto sweep_slope = [&](double lo, double hi) {
      const CliRun r = cli({"sweep", "--L-min-nm", fmt(lo), "--L-max-nm", fmt(hi), "--points", "9", "--regime",
                            "short", "--gaussian", "1", "100", "--curve-csv", curve_path.string()});
      if (r.code != 0) throw std::runtime_error("sweep command failed");
      std::vector<double> L, corr;
      for (const auto& row : csv_rows(r.out)) {
        L.push_back(row[0]);
        corr.push_back(row[1]);
      }
      return log_slope(L, corr);
    };
    const double small = sweep_slope(1.0, 10.0);
    const double large = sweep_slope(1000.0, 10000.0);
    report(7, std::abs(small + 2.0) <= kSweepSlopeTol && std::abs(large + 1.0) <= kSweepSlopeTol,
           "sweep log-slopes: L<=lc/10 " + fmt(small) + ", L>=10lc " + fmt(large));
  });

  run_criterion(8, [&] {
    const PlasmaModel reduced(1.0);
    bool ok = true;
    std::string detail;
    for (double L : {0.5, 1.6, 5.0}) {
      const double g0 = g_short(0.0, L, reduced, spec).value;
      const double d2 = plasmon_energy_second_derivative(L, reduced, spec);
      const double dev = 2.0 * g0 / d2 - 1.0;
      ok = ok && std::abs(dev) <= kCurvatureTol;
      detail += " L=" + fmt(L) + ": " + fmt(dev);
    }
    report(8, ok, "2 G(0) vs finite-difference E'' rel. dev." + detail);
  });

  run_criterion(9, [&] {
    bool ok = true;
    std::string detail;
    for (SyntheticSurface kind : {SyntheticSurface::white_noise, SyntheticSurface::cosine}) {
      SyntheticMapSpec s;
      s.kind = kind;
      s.nx = 128;
      s.ny = 96;
      s.dx = 2.0;
      s.dy = 3.0;
      s.rms = 1.3;
      s.mode = 5;
      const HeightMap map = synthesize_height_map(s);
      const double v = variance_of(periodogram(map), spec).value;
      const double dev = v / map.variance() - 1.0;
      ok = ok && std::abs(dev) <= kParsevalTol;
      detail += (kind == SyntheticSurface::cosine ? " cosine " : " white ") + fmt(dev);
    }
    const double lc = 100.0;
    const auto exact = RoughnessSpectrum::gaussian(1.0, lc);
    std::vector<SpectrumPoint> table;
    for (int i = 0; i < 512; ++i) {
      const double k = (20.0 / lc) * i / 511.0;
      table.push_back({k, exact(k)});
    }
    const double norm = variance_of(RoughnessSpectrum::tabulated(table), spec).value - 1.0;
    ok = ok && std::abs(norm) <= kGaussianNormTol;
    report(9, ok, "Parseval rel. dev." + detail + "; gaussian normalization " + fmt(norm));
  });

  run_criterion(10, [&] {
    const auto dir = std::filesystem::temp_directory_path() / "casrough_acceptance";
    std::filesystem::create_directories(dir);
    const auto map_path = dir / "map.txt";
    std::ofstream(map_path) << cli({"synth-map", "--kind", "gaussian", "--nx", "64", "--ny", "64", "--lc-nm", "4"}).out;
    const std::vector<std::vector<std::string>> commands{
        {"rho", "--regime", "short", "--kl-max", "10", "--points", "11"},
        {"rho", "--regime", "long", "--format", "json"},
        {"figure1", "--kl-max", "5", "--points", "6"},
        {"spectrum", "--gaussian", "1", "10"},
        {"spectrum", "--height-map", map_path.string(), "--window", "hann"},
        {"correct", "--L-nm", "50", "--R-nm", "1e5", "--regime", "long", "--height-map", map_path.string()},
        {"sweep", "--L-min-nm", "1", "--L-max-nm", "100", "--points", "5", "--regime", "long", "--gaussian", "1",
         "10"},
        {"synth-map", "--kind", "white", "--seed", "5"},
    };
    bool ok = true;
    for (const auto& cmd : commands) {
      const CliRun a = cli(cmd);
      const CliRun b = cli(cmd);
      ok = ok && a.code == b.code && a.out == b.out && !a.out.empty();
    }
    report(10, ok, "byte-identical output on repeat runs of " + std::to_string(commands.size()) + " commands");
  });

  std::printf("%d criterion failure(s)\n", failures);
  return failures == 0 ? 0 : 1;
}
