#include "casrough/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <charconv>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "casrough/error.hpp"
#include "casrough/pfa.hpp"
#include "casrough/spectrum.hpp"

namespace casrough {
namespace {

using MetaLine = std::vector<std::pair<std::string, std::string>>;

// Shortest round-trip representation.
std::string num(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return ec == std::errc() ? std::string(buf, ptr) : std::string("nan");
}

std::string flag(bool b) { return b ? "true" : "false"; }

struct Table {
  std::vector<MetaLine> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

void write_csv(const Table& table, std::ostream& out) {
  for (const MetaLine& line : table.meta) {
    out << "# ";
    for (std::size_t i = 0; i < line.size(); ++i) {
      out << (i ? ", " : "") << line[i].first << '=' << line[i].second;
    }
    out << '\n';
  }
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << num(row[i]);
    out << '\n';
  }
}

void write_json(const Table& table, std::ostream& out) {
  nlohmann::json meta = nlohmann::json::object();
  for (const MetaLine& line : table.meta) {
    for (const auto& [key, value] : line) meta[key] = value;
  }
  nlohmann::json doc;
  doc["meta"] = meta;
  doc["columns"] = table.columns;
  doc["rows"] = table.rows;
  out << doc.dump(2) << '\n';
}

struct QuadFlags {
  double rel_tol = 1e-6;
  double abs_tol = 0.0;
  int max_subdivisions = 2000;

  QuadratureSpec spec() const {
    QuadratureSpec q;
    q.rel_tol = rel_tol;
    q.abs_tol = abs_tol;
    q.max_subdivisions = max_subdivisions;
    q.validate();
    return q;
  }
};

MetaLine provenance(const QuadFlags& q) {
  return {{"tool", kToolName},
          {"version", kToolVersion},
          {"rel_tol", num(q.rel_tol)},
          {"abs_tol", num(q.abs_tol)},
          {"max_subdivisions", std::to_string(q.max_subdivisions)}};
}

void add_quadrature_flags(CLI::App* cmd, QuadFlags& q) {
  cmd->add_option("--rel-tol", q.rel_tol, "Relative quadrature tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--abs-tol", q.abs_tol, "Absolute quadrature tolerance")->check(CLI::NonNegativeNumber);
  cmd->add_option("--max-subdivisions", q.max_subdivisions, "Panel budget per integral")
      ->check(CLI::PositiveNumber);
}

struct SourceFlags {
  std::vector<double> gaussian;
  std::string spectrum_csv;
  std::string height_map;
  std::string window = "none";
};

void add_source_flags(CLI::App* cmd, SourceFlags& s) {
  auto* g = cmd->add_option("--gaussian,--gaussian-nm", s.gaussian, "Gaussian spectrum: a_nm lc_nm")
                ->expected(2);
  auto* c = cmd->add_option("--spectrum-csv", s.spectrum_csv, "Tabulated spectrum (k_inv_nm,sigma_nm4)");
  auto* h = cmd->add_option("--height-map", s.height_map, "Height-map file (nx ny dx_nm dy_nm + rows)");
  g->excludes(c)->excludes(h);
  c->excludes(h);
  cmd->add_option("--window", s.window, "Periodogram window for --height-map")
      ->check(CLI::IsMember({"none", "hann"}));
}

struct LoadedSpectrum {
  std::optional<RoughnessSpectrum> spectrum;
  std::string source;
  MetaLine meta;
  std::vector<std::string> warnings;
};

LoadedSpectrum load_source(const SourceFlags& s, const QuadratureSpec& q) {
  LoadedSpectrum out;
  if (!s.gaussian.empty()) {
    out.spectrum = RoughnessSpectrum::gaussian(s.gaussian[0], s.gaussian[1]);
    out.source = "gaussian";
  } else if (!s.spectrum_csv.empty()) {
    out.spectrum = load_spectrum_csv(s.spectrum_csv, q);
    out.source = "spectrum-csv";
  } else if (!s.height_map.empty()) {
    const HeightMap map = load_height_map(s.height_map);
    out.spectrum = periodogram(map, parse_window(s.window), q);
    out.source = "height-map";
    out.meta.emplace_back("window", s.window);
    out.meta.emplace_back("grid_variance_nm2", num(map.variance()));
    out.meta.emplace_back("anisotropy", num(anisotropy_ratio(map)));
    if (const auto lc = out.spectrum->corr_length(); lc && !extent_covers_correlation(map, *lc)) {
      out.warnings.emplace_back("map extent below 10 lc: A >> pi lc^2 not ensured");
    }
  } else {
    throw Error(ErrorCode::InvalidArgument, "one of --gaussian, --spectrum-csv, --height-map is required");
  }
  return out;
}

std::string lc_text(const RoughnessSpectrum& s) {
  const auto lc = s.corr_length();
  return lc ? num(*lc) : std::string("invalid");
}

struct PlasmaFlags {
  std::optional<double> omega_p;
};

void add_plasma_flag(CLI::App* cmd, PlasmaFlags& p) {
  cmd->add_option("--omega-p-rad-s", p.omega_p, "Plasma frequency (short regime; rho does not depend on it)")
      ->check(CLI::PositiveNumber);
}

// Without an explicit metal, the short-distance curve is computed in reduced
// units (omega_P = 1 rad/s); rho depends on |k|L only.
PlasmaModel plasma_model(const PlasmaFlags& p) { return PlasmaModel(p.omega_p.value_or(1.0)); }

std::string omega_text(const PlasmaFlags& p) { return p.omega_p ? num(*p.omega_p) : std::string("reduced"); }

SensitivityCurve compute_curve(Regime regime, std::span<const double> xs, const PlasmaFlags& p,
                               const QuadratureSpec& q) {
  return regime == Regime::short_distance ? rho_short(xs, plasma_model(p), q) : rho_long(xs);
}

SensitivityCurve load_or_compute_curve(Regime regime, const std::string& curve_csv, const PlasmaFlags& p,
                                       const QuadratureSpec& q, std::ostream& err) {
  if (!curve_csv.empty()) {
    std::ifstream in(curve_csv);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open " + curve_csv);
    std::ostringstream buffer;
    buffer << in.rdbuf();
    SensitivityCurve curve = parse_curve_csv(buffer.str());
    if (curve.regime() != regime) err << "warning: curve file regime differs from --regime\n";
    return curve;
  }
  const auto xs = default_kl_grid();
  err << "computing " << to_string(regime) << "-distance sensitivity on " << xs.size() << " points\n";
  return compute_curve(regime, xs, p, q);
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  std::vector<double> xs(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i) xs[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / (points - 1);
  xs.back() = hi;
  return xs;
}

void regime_distance_warning(Regime regime, double L_nm, const PlasmaFlags& p, std::vector<std::string>& warnings) {
  if (!p.omega_p) return;
  const double lambda = PlasmaModel(*p.omega_p).lambda_p_nm();
  if (regime == Regime::short_distance && L_nm > lambda / 10.0) {
    warnings.emplace_back("L > lambda_P / 10: short-distance regime not ensured");
  }
  if (regime == Regime::long_distance && L_nm < 10.0 * lambda) {
    warnings.emplace_back("L < 10 lambda_P: long-distance regime not ensured");
  }
}

void emit(const Table& table, const std::string& format, std::ostream& out) {
  if (format == "json") {
    write_json(table, out);
  } else {
    write_csv(table, out);
  }
}

int finish(bool converged, std::ostream& err) {
  if (converged) return kExitOk;
  err << "error: quadrature did not reach the requested tolerance\n";
  return kExitNumerical;
}

// --- commands ----------------------------------------------------------------

struct RhoArgs {
  std::string regime;
  double kl_min = 0.0;
  double kl_max = 20.0;
  int points = 81;
  std::string format = "csv";
  PlasmaFlags plasma;
  QuadFlags quad;
};

int cmd_rho(const RhoArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.kl_max > a.kl_min)) throw Error(ErrorCode::InvalidArgument, "--kl-max must exceed --kl-min");
  const Regime regime = parse_regime(a.regime);
  const auto xs = linear_grid(a.kl_min, a.kl_max, a.points);
  const SensitivityCurve curve = compute_curve(regime, xs, a.plasma, a.quad.spec());

  Table t;
  t.meta.push_back(provenance(a.quad));
  t.meta.push_back({{"regime", to_string(regime)},
                    {"fallback", flag(curve.fallback())},
                    {"asymptote_beta", num(curve.asymptote_beta())},
                    {"omega_p_rad_s", omega_text(a.plasma)}});
  t.columns = {"kL", "rho"};
  for (const CurveSample& s : curve.samples()) t.rows.push_back({s.x, s.rho});
  emit(t, a.format, out);
  return finish(curve.converged(), err);
}

struct Figure1Args {
  double kl_max = 20.0;
  int points = 81;
  std::string format = "csv";
  QuadFlags quad;
};

int cmd_figure1(const Figure1Args& a, std::ostream& out, std::ostream& err) {
  if (!(a.kl_max > 0.0)) throw Error(ErrorCode::InvalidArgument, "--kl-max must be > 0");
  const auto xs = linear_grid(0.0, a.kl_max, a.points);
  const SensitivityCurve long_curve = rho_long(xs);
  const SensitivityCurve short_curve = rho_short(xs, PlasmaModel(1.0), a.quad.spec());

  Table t;
  t.meta.push_back(provenance(a.quad));
  t.meta.push_back({{"long_fallback", flag(long_curve.fallback())},
                    {"long_beta", num(long_curve.asymptote_beta())},
                    {"short_beta", num(short_curve.asymptote_beta())}});
  t.columns = {"kL", "rho_long", "rho_short"};
  for (const RegimeRow& r : compare_regimes(long_curve, short_curve)) t.rows.push_back({r.x, r.rho_long, r.rho_short});
  emit(t, a.format, out);
  return finish(short_curve.converged(), err);
}

struct CorrectArgs {
  double L_nm = 0.0;
  double R_nm = 0.0;
  std::string regime;
  std::optional<double> area_nm2;
  std::string curve_csv;
  bool no_extrapolation = false;
  bool absolute = false;
  SourceFlags source;
  PlasmaFlags plasma;
  QuadFlags quad;
};

int cmd_correct(const CorrectArgs& a, std::ostream& out, std::ostream& err) {
  const Regime regime = parse_regime(a.regime);
  const QuadratureSpec q = a.quad.spec();
  LoadedSpectrum loaded = load_source(a.source, q);
  const RoughnessSpectrum& spectrum = *loaded.spectrum;

  PlaneSphereSetup setup;
  setup.L_nm = a.L_nm;
  setup.R_nm = a.R_nm;
  setup.regime = regime;
  setup.lc_nm = spectrum.corr_length();
  setup.area_nm2 = a.area_nm2;
  setup.validate();

  const SensitivityCurve curve = load_or_compute_curve(regime, a.curve_csv, a.plasma, q, err);
  RhoBarOptions options;
  options.allow_extrapolation = !a.no_extrapolation;
  CorrectionReport report = full_correction(setup, spectrum, curve, q, options);
  for (auto& w : loaded.warnings) report.warnings.push_back(std::move(w));
  regime_distance_warning(regime, a.L_nm, a.plasma, report.warnings);

  nlohmann::json doc;
  doc["prefactor"] = report.prefactor;
  doc["a_nm"] = report.a_nm;
  doc["lc_nm"] = report.lc_nm ? nlohmann::json(*report.lc_nm) : nlohmann::json(nullptr);
  doc["a_over_L_sq"] = report.a_over_L_sq;
  doc["rho_bar"] = report.rho_bar;
  doc["relative_correction"] = report.relative_correction;
  doc["pfa_relative_correction"] = report.pfa_relative_correction;
  doc["guards"] = {{"pfa_geometry_ok", report.guards.pfa_geometry_ok},
                   {"averaging_ok", report.guards.averaging_ok},
                   {"ergodic_ok", report.guards.ergodic_ok}};
  doc["fallback_used"] = report.fallback_used;
  doc["converged"] = report.converged;
  doc["warnings"] = report.warnings;
  doc["regime"] = to_string(regime);
  doc["L_nm"] = a.L_nm;
  doc["R_nm"] = a.R_nm;
  doc["area_nm2"] = setup.area();
  doc["source"] = loaded.source;
  nlohmann::json prov;
  for (const auto& [k, v] : provenance(a.quad)) prov[k] = v;
  prov["omega_p_rad_s"] = omega_text(a.plasma);
  doc["provenance"] = prov;
  if (a.absolute) {
    const double smooth = ideal_plane_sphere_force_newton(a.L_nm, a.R_nm);
    doc["absolute"] = {{"model", "ideal mirrors, T = 0 (idealization)"},
                       {"smooth_force_N", smooth},
                       {"roughness_correction_N", smooth * report.relative_correction}};
  }
  out << doc.dump(2) << '\n';
  for (const std::string& w : report.warnings) err << "warning: " << w << '\n';
  return finish(report.converged, err);
}

struct SpectrumArgs {
  SourceFlags source;
  int points = 201;
  std::optional<double> k_max;
  std::string format = "csv";
  QuadFlags quad;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out, std::ostream& err) {
  const QuadratureSpec q = a.quad.spec();
  const LoadedSpectrum loaded = load_source(a.source, q);
  const RoughnessSpectrum& s = *loaded.spectrum;
  const double a2 = s.amplitude_sq();

  Table t;
  t.meta.push_back(provenance(a.quad));
  MetaLine info{{"source", loaded.source}, {"a2_nm2", num(a2)}, {"lc_nm", lc_text(s)}};
  std::string autocorr = "invalid";
  if (a2 > 0.0) {
    try {
      autocorr = num(autocorrelation_length(s, q));
    } catch (const Error&) {
    }
  }
  info.emplace_back("lc_autocorrelation_nm", autocorr);
  for (const auto& kv : loaded.meta) info.push_back(kv);
  t.meta.push_back(info);
  t.columns = {"k_inv_nm", "sigma_nm4", "sigma_normalized"};

  auto row = [&](double k, double sigma) {
    t.rows.push_back({k, sigma, a2 > 0.0 ? sigma / a2 : 0.0});
  };
  if (s.kind() == RoughnessSpectrum::Kind::gaussian) {
    const double k_max = a.k_max.value_or(s.k_support());
    if (a.points < 2) throw Error(ErrorCode::InvalidArgument, "--points must be >= 2");
    for (double k : linear_grid(0.0, k_max, a.points)) row(k, s(k));
  } else {
    for (const SpectrumPoint& p : s.table()) row(p.k, p.sigma);
  }
  emit(t, a.format, out);
  for (const std::string& w : loaded.warnings) err << "warning: " << w << '\n';
  return kExitOk;
}

struct SweepArgs {
  double L_min = 0.0;
  double L_max = 0.0;
  int points = 21;
  std::string regime;
  std::string curve_csv;
  std::string format = "csv";
  SourceFlags source;
  PlasmaFlags plasma;
  QuadFlags quad;
};

int cmd_sweep(const SweepArgs& a, std::ostream& out, std::ostream& err) {
  if (!(a.L_min > 0.0) || !(a.L_max > a.L_min)) {
    throw Error(ErrorCode::InvalidArgument, "need 0 < --L-min-nm < --L-max-nm");
  }
  const Regime regime = parse_regime(a.regime);
  const QuadratureSpec q = a.quad.spec();
  const LoadedSpectrum loaded = load_source(a.source, q);
  const RoughnessSpectrum& s = *loaded.spectrum;
  const SensitivityCurve curve = load_or_compute_curve(regime, a.curve_csv, a.plasma, q, err);
  const double a2 = variance_of(s, q).value;

  Table t;
  t.meta.push_back(provenance(a.quad));
  t.meta.push_back({{"regime", to_string(regime)},
                    {"fallback", flag(curve.fallback())},
                    {"source", loaded.source},
                    {"a2_nm2", num(a2)},
                    {"lc_nm", lc_text(s)}});
  t.columns = {"L_nm", "relative_correction", "pfa_relative_correction", "rho_bar"};
  bool converged = curve.converged();
  const double ratio = std::log(a.L_max / a.L_min);
  for (int i = 0; i < a.points; ++i) {
    const double L = i + 1 == a.points ? a.L_max : a.L_min * std::exp(ratio * i / (a.points - 1));
    const QuadratureResult mean_rho = rho_bar(s, curve, L, q);
    converged = converged && mean_rho.converged;
    const double pfa = regime_prefactor(regime) * a2 / (L * L);
    t.rows.push_back({L, pfa * mean_rho.value, pfa, mean_rho.value});
  }
  emit(t, a.format, out);
  return finish(converged, err);
}

struct SynthArgs {
  std::string kind = "white";
  SyntheticMapSpec spec;
};

int cmd_synth_map(const SynthArgs& a, std::ostream& out) {
  SyntheticMapSpec spec = a.spec;
  if (a.kind == "white") spec.kind = SyntheticSurface::white_noise;
  if (a.kind == "cosine") spec.kind = SyntheticSurface::cosine;
  if (a.kind == "gaussian") spec.kind = SyntheticSurface::gaussian;
  out << format_height_map(synthesize_height_map(spec));
  return kExitOk;
}

}  // namespace

int exit_code_for(const Error& error) {
  switch (error.code()) {
    case ErrorCode::InvalidArgument:
    case ErrorCode::NonPositiveParameter:
      return kExitUsage;
    case ErrorCode::NonFiniteIntegrand:
    case ErrorCode::SensitivityRangeExceeded:
    case ErrorCode::TranscriptionUnavailable:
      return kExitNumerical;
    case ErrorCode::ParseError:
    case ErrorCode::DimensionMismatch:
    case ErrorCode::NonFiniteHeight:
    case ErrorCode::MapTooSmall:
    case ErrorCode::ZeroVariance:
    case ErrorCode::ZeroAtOrigin:
      return kExitInputData;
  }
  return kExitNumerical;
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Wavevector-resolved roughness corrections to the Casimir force", kToolName};
  app.require_subcommand(1);
  app.set_version_flag("--version", kToolVersion);

  RhoArgs rho;
  auto* rho_cmd = app.add_subcommand("rho", "Sensitivity rho versus |k|L (CSV kL,rho)");
  rho_cmd->add_option("--regime", rho.regime, "short | long")->required()->check(CLI::IsMember({"short", "long"}));
  rho_cmd->add_option("--kl-min", rho.kl_min, "Smallest |k|L")->check(CLI::NonNegativeNumber);
  rho_cmd->add_option("--kl-max", rho.kl_max, "Largest |k|L")->check(CLI::PositiveNumber);
  rho_cmd->add_option("--points", rho.points, "Number of points")->check(CLI::Range(2, 100000));
  rho_cmd->add_option("--format", rho.format)->check(CLI::IsMember({"csv", "json"}));
  add_plasma_flag(rho_cmd, rho.plasma);
  add_quadrature_flags(rho_cmd, rho.quad);

  Figure1Args fig;
  auto* fig_cmd = app.add_subcommand("figure1", "Both regimes side by side (CSV kL,rho_long,rho_short)");
  fig_cmd->add_option("--kl-max", fig.kl_max, "Largest |k|L")->check(CLI::PositiveNumber);
  fig_cmd->add_option("--points", fig.points, "Number of points")->check(CLI::Range(2, 100000));
  fig_cmd->add_option("--format", fig.format)->check(CLI::IsMember({"csv", "json"}));
  add_quadrature_flags(fig_cmd, fig.quad);

  CorrectArgs cor;
  auto* cor_cmd = app.add_subcommand("correct", "Plane-sphere roughness correction report (JSON)");
  cor_cmd->add_option("--L-nm", cor.L_nm, "Closest-approach distance")->required();
  cor_cmd->add_option("--R-nm", cor.R_nm, "Sphere radius")->required();
  cor_cmd->add_option("--regime", cor.regime, "short | long")->required()->check(CLI::IsMember({"short", "long"}));
  cor_cmd->add_option("--area-nm2", cor.area_nm2, "Nominal plate area (default pi R L)");
  cor_cmd->add_option("--curve-csv", cor.curve_csv, "Precomputed curve from `rho`");
  cor_cmd->add_flag("--no-extrapolation", cor.no_extrapolation, "Fail if the spectrum outruns the curve");
  cor_cmd->add_flag("--absolute", cor.absolute, "Add ideal-mirror absolute forces");
  add_source_flags(cor_cmd, cor.source);
  add_plasma_flag(cor_cmd, cor.plasma);
  add_quadrature_flags(cor_cmd, cor.quad);

  SpectrumArgs spec;
  auto* spec_cmd = app.add_subcommand("spectrum", "Tabulate a roughness spectrum (CSV)");
  spec_cmd->add_option("--points", spec.points, "Gaussian tabulation points");
  spec_cmd->add_option("--k-max-inv-nm", spec.k_max, "Gaussian tabulation limit")->check(CLI::PositiveNumber);
  spec_cmd->add_option("--format", spec.format)->check(CLI::IsMember({"csv", "json"}));
  add_source_flags(spec_cmd, spec.source);
  add_quadrature_flags(spec_cmd, spec.quad);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Correction versus L on a log grid (CSV)");
  sweep_cmd->add_option("--L-min-nm", sweep.L_min)->required();
  sweep_cmd->add_option("--L-max-nm", sweep.L_max)->required();
  sweep_cmd->add_option("--points", sweep.points)->check(CLI::Range(2, 100000));
  sweep_cmd->add_option("--regime", sweep.regime, "short | long")->required()->check(CLI::IsMember({"short", "long"}));
  sweep_cmd->add_option("--curve-csv", sweep.curve_csv, "Precomputed curve from `rho`");
  sweep_cmd->add_option("--format", sweep.format)->check(CLI::IsMember({"csv", "json"}));
  add_source_flags(sweep_cmd, sweep.source);
  add_plasma_flag(sweep_cmd, sweep.plasma);
  add_quadrature_flags(sweep_cmd, sweep.quad);

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth-map", "Write a synthetic height map");
  synth_cmd->add_option("--kind", synth.kind)->check(CLI::IsMember({"white", "cosine", "gaussian"}));
  synth_cmd->add_option("--nx", synth.spec.nx)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--ny", synth.spec.ny)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--dx-nm", synth.spec.dx)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--dy-nm", synth.spec.dy)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--rms-nm", synth.spec.rms)->check(CLI::NonNegativeNumber);
  synth_cmd->add_option("--lc-nm", synth.spec.lc)->check(CLI::PositiveNumber);
  synth_cmd->add_option("--mode", synth.spec.mode, "Cosine wavenumber index along x");
  synth_cmd->add_option("--seed", synth.spec.seed);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const std::string& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*rho_cmd) return cmd_rho(rho, out, err);
    if (*fig_cmd) return cmd_figure1(fig, out, err);
    if (*cor_cmd) return cmd_correct(cor, out, err);
    if (*spec_cmd) return cmd_spectrum(spec, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep, out, err);
    if (*synth_cmd) return cmd_synth_map(synth, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  }
  return kExitUsage;
}

SensitivityCurve parse_curve_csv(std::string_view content) {
  std::map<std::string, std::string, std::less<>> meta;
  std::vector<CurveSample> samples;
  bool header_seen = false;
  std::istringstream in{std::string(content)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.front() == '#') {
      std::istringstream fields(line.substr(1));
      std::string field;
      while (std::getline(fields, field, ',')) {
        const auto eq = field.find('=');
        if (eq == std::string::npos) continue;
        const auto key_start = field.find_first_not_of(' ');
        meta[field.substr(key_start, eq - key_start)] = field.substr(eq + 1);
      }
      continue;
    }
    if (!header_seen) {
      if (line != "kL,rho") throw Error(ErrorCode::ParseError, "expected header 'kL,rho'");
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": expected two columns");
    }
    try {
      std::size_t used_x = 0;
      std::size_t used_rho = 0;
      const double x = std::stod(line.substr(0, comma), &used_x);
      const double rho_value = std::stod(line.substr(comma + 1), &used_rho);
      if (used_x != comma || used_rho != line.size() - comma - 1) throw std::invalid_argument("trailing");
      samples.push_back({x, rho_value});
    } catch (const std::exception&) {
      throw Error(ErrorCode::ParseError, "line " + std::to_string(line_no) + ": bad number");
    }
  }
  if (!header_seen || samples.empty()) throw Error(ErrorCode::ParseError, "curve file has no rows");

  auto get = [&meta](const char* key) -> std::string {
    const auto it = meta.find(key);
    if (it == meta.end()) throw Error(ErrorCode::ParseError, std::string("curve file lacks '") + key + "'");
    return it->second;
  };
  SensitivityCurve::Metadata m;
  try {
    m.regime = parse_regime(get("regime"));
    m.fallback = get("fallback") == "true";
    m.asymptote_beta = std::stod(get("asymptote_beta"));
    m.tolerance = std::stod(get("rel_tol"));
  } catch (const std::invalid_argument&) {
    throw Error(ErrorCode::ParseError, "bad curve metadata");
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
  try {
    return SensitivityCurve(std::move(samples), m);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, e.what());
  }
}

}  // namespace casrough
