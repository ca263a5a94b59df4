#include <cmath>
#include <cstdio>
#include <iomanip>
#include <sstream>

#include "pairscatter/cli.hpp"
#include "pairscatter/diagnostics.hpp"
#include "pairscatter/error.hpp"
#include "pipeline.hpp"

namespace pairscatter::cli {

namespace detail {

ScatterConfig resolve(const DimensionlessSetup& setup, std::ostream& log) {
  ScatterConfig config = make_config(setup);
  for (const auto& w : validate(config).warnings) log << "warning: " << w << '\n';
  return config;
}

std::vector<double> theta_axis(const ScatterConfig& config, double q_a, double span) {
  const auto& g = config.grid;
  std::vector<double> axis;
  for (std::size_t j : g.sorted_momentum_bins()) {
    const double t = (g.momentum(j) - q_a) / g.k();
    if (span > 0.0 && std::abs(t) > span * (1.0 + 1e-12)) continue;
    axis.push_back(t);
  }
  return axis;
}

io::Table theory_table(const theory::TheoryCurve& c, Variant v) {
  io::Table t;
  t.columns = {"theta_rad", "gamma_total", "gamma_peak_term", "gamma_background_term"};
  t.data = {c.theta, c.total, c.peak, c.background};
  if (v == Variant::kMinus) {
    t.columns.push_back("gamma_minus1");
    t.columns.push_back("gamma_minus2");
    t.data.push_back(c.minus1);
    t.data.push_back(c.minus2);
  }
  return t;
}

io::Table simulation_table(const CorrelationCurve& c) {
  return io::Table{{"theta_rad", "mean", "std_error"}, {c.theta_axis, c.values, c.std_errors}};
}

CutComparison compare_cut(const ScatterConfig& config, double q_a, int threads) {
  CutComparison out;
  out.simulation = ensemble_average_cut(config, q_a, threads);
  const auto tp = analysis::theory_params(config);
  const Variant v = config.geometry.variant();
  out.theory = theory::theory_curve(out.simulation.theta_axis, tp, v, q_a / config.grid.k());
  out.theory_fwhm = theory::theory_peak_width(tp, v);
  out.pair = analysis::normalize_pair(analysis::from_simulation(out.simulation),
                                      analysis::from_theory(out.theory.theta, out.theory.total));
  std::vector<double> bg = out.theory.background;
  for (double& b : bg) b *= out.pair.theory_scale;
  out.peak = analysis::subtract_background(out.pair.simulation, bg);
  out.fwhm = analysis::fwhm(out.peak.curve);
  const double theta_max = std::min(config.diffuser.theta0(), out.simulation.theta_axis.back());
  if (theta_max > 4.0 * out.theory_fwhm) {
    out.ratio = analysis::enhancement_ratio(analysis::from_simulation(out.simulation), out.theory_fwhm,
                                            theta_max);
  } else {
    out.ratio = {std::nan(""), std::nan("")};
  }
  return out;
}

void write_comparison(const std::filesystem::path& dir, const std::string& stem,
                      const CutComparison& c, Variant v, io::Manifest& manifest) {
  const auto sim_path = dir / (stem + "_sim.csv");
  const auto th_path = dir / (stem + "_theory.csv");
  const auto norm_path = dir / (stem + "_normalized.csv");
  io::write_csv(sim_path, simulation_table(c.simulation));
  io::write_csv(th_path, theory_table(c.theory, v));
  io::write_csv(norm_path,
                io::Table{{"theta_rad", "sim", "sim_err", "theory", "sim_peak"},
                          {c.pair.simulation.theta, c.pair.simulation.values, c.pair.simulation.errors,
                           c.pair.theory.values, c.peak.curve.values}});
  manifest.add_output(sim_path);
  manifest.add_output(th_path);
  manifest.add_output(norm_path);
}

std::string fixed(double v, int precision) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

}  // namespace detail

using namespace detail;

namespace {

std::filesystem::path prepare_out(const Request& r) {
  std::filesystem::create_directories(r.out_dir);
  return r.out_dir;
}

}  // namespace

int cmd_theory(const Request& r, std::ostream& log) {
  const ScatterConfig config = make_config(r.setup);
  const Variant v = config.geometry.variant();
  const auto tp = analysis::theory_params(config);
  theory::check(tp, v);
  const double span = r.setup.theta_span > 0.0 ? r.setup.theta_span : 3.0 * r.setup.theta0;
  const double theta_a = r.q_a / config.grid.k();
  const auto curve = theory::theory_curve(theta_axis(config, r.q_a, span), tp, v, theta_a);

  const auto dir = prepare_out(r);
  io::Manifest manifest("theory");
  manifest.set_setup(r.setup);
  manifest.set("q_a", r.q_a);
  io::write_csv(dir / "theory.csv", theory_table(curve, v));
  manifest.add_output(dir / "theory.csv");
  manifest.mark_stage("theory");
  manifest.write(dir / "theory.manifest.json");
  log << "theory: " << curve.theta.size() << " points, peak FWHM "
      << fixed(theory::theory_peak_width(tp, v)) << " rad -> " << (dir / "theory.csv").string() << '\n';
  return kExitOk;
}

int cmd_simulate(const Request& r, std::ostream& log) {
  if (r.setup.realizations < 100) throw ConfigError("simulate needs at least 100 realizations");
  const ScatterConfig config = resolve(r.setup, log);
  io::Manifest manifest("simulate");
  manifest.set_setup(r.setup);
  manifest.set("q_a", r.q_a);
  const TwoPhotonEngine engine(config);
  manifest.mark_stage("setup");
  const CorrelationCurve curve = engine.ensemble_average_cut(r.q_a, r.threads);
  manifest.mark_stage("ensemble");
  const auto dir = prepare_out(r);
  io::write_csv(dir / "simulate.csv", simulation_table(curve));
  manifest.add_output(dir / "simulate.csv");
  manifest.mark_stage("write");
  manifest.write(dir / "simulate.manifest.json");
  log << "simulate: " << curve.n_realizations << " realizations, " << curve.values.size()
      << " bins -> " << (dir / "simulate.csv").string() << '\n';
  return kExitOk;
}

namespace detail {

void write_sweep(const std::filesystem::path& dir, const std::string& stem,
                 const analysis::SweepResult& s, io::Manifest& manifest) {
  io::Table sim{{"z_over_z0", "fwhm_over_theta0", "fwhm_err", "amp_norm", "amp_err"}, {{}, {}, {}, {}, {}}};
  io::Table th{{"z_over_z0", "z_over_d", "fwhm_over_theta0", "amp_norm"}, {{}, {}, {}, {}}};
  for (const auto& p : s.points) {
    sim.data[0].push_back(p.z_over_z0);
    sim.data[1].push_back(p.fwhm_over_theta0.value);
    sim.data[2].push_back(p.fwhm_over_theta0.uncertainty);
    sim.data[3].push_back(p.amp_norm.value);
    sim.data[4].push_back(p.amp_norm.uncertainty);
    th.data[0].push_back(p.z_over_z0);
    th.data[1].push_back(p.z_over_d);
    th.data[2].push_back(p.theory_fwhm_over_theta0);
    th.data[3].push_back(p.theory_amp_norm);
  }
  io::write_csv(dir / (stem + ".csv"), sim);
  io::write_csv(dir / (stem + "_theory.csv"), th);
  manifest.add_output(dir / (stem + ".csv"));
  manifest.add_output(dir / (stem + "_theory.csv"));
}

void print_sweep(std::ostream& log, const analysis::SweepResult& s) {
  log << "  |z~|      FWHM/theta0 (sim)         theory      amp (sim)          theory\n";
  for (const auto& p : s.points) {
    char line[200];
    std::snprintf(line, sizeof line, "  %7.3f   %.5f +- %.5f   %.5f   %.4f +- %.4f   %.4f%s\n",
                  p.z_over_z0, p.fwhm_over_theta0.value, p.fwhm_over_theta0.uncertainty,
                  p.theory_fwhm_over_theta0, p.amp_norm.value, p.amp_norm.uncertainty,
                  p.theory_amp_norm, p.significant_negative ? "  (negative residual > 3 sigma)" : "");
    log << line;
  }
}

}  // namespace detail

int cmd_sweep(const Request& r, std::ostream& log) {
  if (r.z_list.empty()) throw ConfigError("sweep needs a non-empty z list (--z-list)");
  resolve(r.setup, log);
  std::vector<double> zt = r.z_list;
  if (r.z_list_over_d) {
    const double z0 = 1.0 / r.setup.theta0 / r.setup.theta0;  // k = 1
    for (double& z : zt) z = z * r.setup.kd / z0;
  }
  io::Manifest manifest("sweep");
  manifest.set_setup(r.setup);
  manifest.set("z_over_z0", zt);
  analysis::SweepOptions options;
  options.threads = r.threads;
  const auto result = analysis::sweep_z(r.setup, zt, options);
  manifest.mark_stage("sweep");
  const auto dir = prepare_out(r);
  write_sweep(dir, "sweep", result, manifest);
  manifest.write(dir / "sweep.manifest.json");
  print_sweep(log, result);
  return kExitOk;
}

int cmd_validate(const Request& r, std::ostream& log) {
  const ScatterConfig config = resolve(r.setup, log);
  const auto& g = config.grid;

  // Mask statistics on a short window with the same sampling; the estimator
  // averages over translations, so the window length only sets noise.
  const std::size_t stats_n = g.dim() == 1 ? 4096 : 64;
  const TransverseGrid stats_grid(g.dim(), std::min(stats_n, g.n()), g.dx(), g.k());
  const std::uint64_t masks = std::max<std::uint64_t>(10000, std::min<std::uint64_t>(r.setup.realizations, 100000));
  const auto mc = estimate_mask_correlation(stats_grid, config.diffuser, masks, r.setup.seed);

  const double waist = 10.0 * config.diffuser.xi0();
  const auto pr = check_propagator(g, g.k(), waist, config.geometry.d());
  const double guard = TwoPhotonEngine::probe_guard_band(config, 0);

  struct Check {
    std::string name;
    double value;
    double limit;
  };
  const std::vector<Check> checks = {
      {"mask <|V|^2> - 1", std::abs(mc.mean_intensity - 1.0), 0.03},
      {"mask correlation RMS (omega)", mc.rms_omega, 0.03},
      {"mask correlation RMS (2 omega vs 2 c^2)", mc.rms_two_omega, 0.05},
      {"propagator norm drift", pr.norm_drift, 1e-10},
      {"propagator semigroup error", pr.semigroup_error, 1e-10},
      {"propagator inverse error", pr.inverse_error, 1e-10},
      {"Gaussian beam width error (3 z_R)", pr.width_error, 5e-3},
      {"guard-band energy fraction", guard, kGuardBandMaxEnergy},
  };
  bool ok = true;
  nlohmann::json report = nlohmann::json::array();
  log << "validate (" << masks << " masks, " << stats_grid.n() << "-point statistics window)\n";
  for (const auto& c : checks) {
    const bool pass = c.value <= c.limit;
    ok = ok && pass;
    char line[160];
    std::snprintf(line, sizeof line, "  %-42s %.3e  (limit %.1e)  %s\n", c.name.c_str(), c.value,
                  c.limit, pass ? "PASS" : "FAIL");
    log << line;
    report.push_back({{"check", c.name}, {"value", c.value}, {"limit", c.limit}, {"pass", pass}});
  }
  const auto dir = prepare_out(r);
  io::write_csv(dir / "mask_correlation.csv",
                io::Table{{"lag", "omega", "two_omega", "target_omega", "target_two_omega"},
                          {mc.lag, mc.omega, mc.two_omega, mc.target, [&] {
                             std::vector<double> t2;
                             for (double a : mc.omega) t2.push_back(2.0 * a * a);
                             return t2;
                           }()}});
  io::Manifest manifest("validate");
  manifest.set_setup(r.setup);
  manifest.set("checks", report);
  manifest.set("all_pass", ok);
  manifest.add_output(dir / "mask_correlation.csv");
  manifest.write(dir / "validate.manifest.json");
  return ok ? kExitOk : kExitNumerical;
}

int run_guarded(std::ostream& err, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "runtime failure: " << e.what() << '\n';
    return kExitRuntime;
  }
}

}  // namespace pairscatter::cli
