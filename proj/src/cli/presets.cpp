#include <cmath>
#include <cstdio>
#include <functional>
#include <map>

#include "pairscatter/cli.hpp"
#include "pairscatter/error.hpp"
#include "pipeline.hpp"

namespace pairscatter::cli {

using namespace detail;

namespace {

// The plotted z values are not given for the figures; these are defaults.
const std::vector<double> kFig4cZOverD = {0.0, 0.25, 0.5};
const std::vector<double> kFig5cZTilde = {0.0, 1.0, 3.0, 10.0};
const std::vector<double> kFig6PlusZOverD = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
const std::vector<double> kFig6MinusZTilde = {0.0, 0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 4.0, 5.0, 7.0, 10.0};
const std::vector<double> kFig7PlusZOverD = {0.0, 0.25};
const std::vector<double> kFig7MinusZTilde = {0.0, 1.0, 10.0};
const std::vector<double> kFig7MapThetaA = {-0.6, -0.45, -0.3, -0.15, 0.0, 0.15, 0.3, 0.45, 0.6};

std::string tag(const char* prefix, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s%g", prefix, v);
  std::string s = buf;
  for (char& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return s;
}

DimensionlessSetup at_z(DimensionlessSetup s, Variant v, double value, bool over_d) {
  s.variant = v;
  if (over_d) {
    s.z_given_over_z0 = false;
    s.z_over_d = value;
  } else {
    s.z_given_over_z0 = true;
    s.z_over_z0 = v == Variant::kMinus ? -std::abs(value) : std::abs(value);
  }
  return s;
}

double widest_peak(const DimensionlessSetup& base, Variant v, const std::vector<double>& zs, bool over_d) {
  double w = 0.0;
  for (double z : zs) {
    const ScatterConfig c = make_config(at_z(base, v, z, over_d));
    w = std::max(w, theory::theory_peak_width(analysis::theory_params(c), v));
  }
  return w;
}

// Cuts at several z with paired theory, FWHM and enhancement summary.
int run_cuts(const Request& r, const std::string& name, Variant v, const std::vector<double>& zs,
             bool over_d, double span, std::ostream& log, io::Manifest& manifest,
             bool fit_background) {
  const auto dir = r.out_dir;
  io::Table summary{{"z_over_d", "z_over_z0", "fwhm", "fwhm_err", "fwhm_theory", "enhancement",
                     "enhancement_err", "envelope_width_over_theta0", "envelope_width_err",
                     "second_envelope_over_theta0", "second_envelope_theory"},
                    std::vector<std::vector<double>>(11)};
  log << name << " (" << to_string(v) << ", " << r.setup.realizations << " realizations)\n";
  for (double z : zs) {
    DimensionlessSetup s = at_z(r.setup, v, z, over_d);
    s.theta_span = span;
    const ScatterConfig config = resolve(s, log);
    const CutComparison c = compare_cut(config, 0.0, r.threads);
    const std::string stem = name + "_" + tag(over_d ? "zd" : "zt", z);
    write_comparison(dir, stem, c, v, manifest);
    manifest.mark_stage(stem);

    const auto tp = analysis::theory_params(config);
    const double theta0 = r.setup.theta0;
    double env = std::nan(""), env_err = std::nan(""), second = std::nan("");
    if (fit_background) {
      const double exclude = 4.0 * c.theory_fwhm;
      const auto sim = analysis::from_simulation(c.simulation);
      const auto eff = analysis::effective_envelope_width(sim, exclude);
      env = eff.value / theta0;
      env_err = eff.uncertainty / theta0;
      const auto fit = analysis::fit_two_envelopes(analysis::without_centre(sim, exclude), theta0,
                                                   0.05 * theta0, 2.0 * theta0);
      second = fit.s / theta0;
    }
    const double values[] = {config.geometry.z_over_d(), tp.z_tilde(), c.fwhm.value, c.fwhm.uncertainty,
                             c.theory_fwhm, c.ratio.value, c.ratio.uncertainty, env, env_err, second,
                             v == Variant::kMinus ? tp.minus2_envelope_width() / theta0 : 1.0};
    for (std::size_t i = 0; i < 11; ++i) summary.data[i].push_back(values[i]);

    char line[240];
    std::snprintf(line, sizeof line,
                  "  z/d %.4f  |z~| %8.3f  FWHM %.4e +- %.1e (theory %.4e)  enhancement %.3f +- %.3f%s\n",
                  config.geometry.z_over_d(), std::abs(tp.z_tilde()), c.fwhm.value, c.fwhm.uncertainty,
                  c.theory_fwhm, c.ratio.value, c.ratio.uncertainty,
                  c.peak.significant_negative ? "  (negative residual > 3 sigma)" : "");
    log << line;
    if (fit_background) {
      std::snprintf(line, sizeof line,
                    "      envelope width %.4f theta0; second envelope %.4f theta0 (theory %.4f)\n", env,
                    second, v == Variant::kMinus ? tp.minus2_envelope_width() / theta0 : 1.0);
      log << line;
    }
  }
  io::write_csv(dir / (name + "_summary.csv"), summary);
  manifest.add_output(dir / (name + "_summary.csv"));
  return kExitOk;
}

int preset_fig4c(const Request& r, std::ostream& log, io::Manifest& m) {
  const double span = 12.0 * widest_peak(r.setup, Variant::kPlus, kFig4cZOverD, true);
  return run_cuts(r, "fig4c", Variant::kPlus, kFig4cZOverD, true, span, log, m, false);
}

int preset_fig5c(const Request& r, std::ostream& log, io::Manifest& m) {
  const double span = 12.0 * widest_peak(r.setup, Variant::kMinus, kFig5cZTilde, false);
  return run_cuts(r, "fig5c", Variant::kMinus, kFig5cZTilde, false, span, log, m, false);
}

int preset_fig6(const Request& r, std::ostream& log, io::Manifest& m) {
  analysis::SweepOptions options;
  options.threads = r.threads;
  DimensionlessSetup plus = r.setup;
  plus.variant = Variant::kPlus;
  const double z0_over_d = 1.0 / (r.setup.kd * r.setup.theta0 * r.setup.theta0);
  std::vector<double> plus_zt;
  for (double zd : kFig6PlusZOverD) plus_zt.push_back(zd / z0_over_d);
  log << "fig6 PLUS sweep\n";
  const auto sp = analysis::sweep_z(plus, plus_zt, options);
  print_sweep(log, sp);
  write_sweep(r.out_dir, "fig6_plus", sp, m);
  m.mark_stage("fig6_plus");

  DimensionlessSetup minus = r.setup;
  minus.variant = Variant::kMinus;
  log << "fig6 MINUS sweep\n";
  const auto sm = analysis::sweep_z(minus, kFig6MinusZTilde, options);
  print_sweep(log, sm);
  write_sweep(r.out_dir, "fig6_minus", sm, m);
  m.mark_stage("fig6_minus");
  const auto tp = theory::make_params(1.0, r.setup.kd, 0.0, r.setup.theta0, r.setup.dim);
  log << "  theory width maximum at |z~| = " << fixed(theory::theory_width_max_location(tp), 4) << '\n';
  return kExitOk;
}

int preset_fig7(const Request& r, std::ostream& log, io::Manifest& m) {
  const double span = 3.0 * r.setup.theta0;
  run_cuts(r, "fig7_plus", Variant::kPlus, kFig7PlusZOverD, true, span, log, m, true);
  run_cuts(r, "fig7_minus", Variant::kMinus, kFig7MinusZTilde, false, span, log, m, true);

  // Two-angle map at |z~| = 1: ridge on theta_a = theta_b over an envelope
  // centred on theta_a + theta_b = 0.
  DimensionlessSetup s = at_z(r.setup, Variant::kMinus, 1.0, false);
  s.theta_span = span;
  const ScatterConfig config = resolve(s, log);
  std::vector<double> qa;
  for (double t : kFig7MapThetaA) qa.push_back(std::round(t * config.grid.k() / config.grid.dq()) * config.grid.dq());
  const CorrelationMap map = ensemble_average_map(config, qa, r.threads);
  io::Table t{{"theta_a", "theta_b", "mean", "std_error"}, {{}, {}, {}, {}}};
  for (const auto& row : map.rows) {
    const double ta = row.q_a / config.grid.k();
    for (std::size_t i = 0; i < row.values.size(); ++i) {
      t.data[0].push_back(ta);
      t.data[1].push_back(ta + row.theta_axis[i]);
      t.data[2].push_back(row.values[i]);
      t.data[3].push_back(row.std_errors[i]);
    }
  }
  io::write_csv(r.out_dir / "fig7_map.csv", t);
  m.add_output(r.out_dir / "fig7_map.csv");
  m.mark_stage("fig7_map");
  log << "  map: " << map.rows.size() << " theta_a rows -> " << (r.out_dir / "fig7_map.csv").string() << '\n';
  return kExitOk;
}

using PresetFn = std::function<int(const Request&, std::ostream&, io::Manifest&)>;

const std::map<std::string, PresetFn>& presets() {
  static const std::map<std::string, PresetFn> table = {
      {"fig4c", preset_fig4c}, {"fig5c", preset_fig5c}, {"fig6", preset_fig6}, {"fig7", preset_fig7}};
  return table;
}

}  // namespace

std::vector<std::string> preset_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : presets()) names.push_back(k);
  return names;
}

int cmd_reproduce(const Request& r, const std::string& preset, std::ostream& log) {
  const auto it = presets().find(preset);
  if (it == presets().end()) {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("unknown preset '" + preset + "' (known: " + known + ")");
  }
  std::filesystem::create_directories(r.out_dir);
  io::Manifest manifest("reproduce " + preset);
  manifest.set_setup(r.setup);
  const int rc = it->second(r, log, manifest);
  manifest.write(r.out_dir / (preset + ".manifest.json"));
  return rc;
}

}  // namespace pairscatter::cli
