// pairscatter: two-photon correlations behind a thin diffuser.
//
//   pairscatter theory    [--config F] [flags]
//   pairscatter simulate  [--config F] [flags] [--qa Q]
//   pairscatter sweep     [--config F] [flags] --z-list 0,1,2
//   pairscatter validate  [--config F] [flags]
//   pairscatter reproduce fig4c|fig5c|fig6|fig7 [flags]

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pairscatter/cli.hpp"
#include "pairscatter/error.hpp"

using namespace pairscatter;

namespace {

struct Flags {
  std::string config;
  cli::Overrides o;
  int threads = 1;
  std::string out = ".";
  double qa = 0.0;
  std::vector<double> z_list;
  bool z_list_over_d = false;
  std::string preset;
};

void add_common(CLI::App* cmd, Flags& f) {
  cmd->add_option("--config", f.config, "INI config file");
  cmd->add_option("--variant", f.o.variant, "plus | minus");
  cmd->add_option("--kd", f.o.kd, "k * d");
  cmd->add_option("--theta0", f.o.theta0, "diffuser scattering angle [rad]");
  auto* zd = cmd->add_option("--z-over-d", f.o.z_over_d, "crystal position z/d");
  auto* zt = cmd->add_option("--z-over-z0", f.o.z_over_z0, "crystal position z/z0 (negative for minus)");
  zd->excludes(zt);
  cmd->add_option("--realizations", f.o.realizations, "ensemble size");
  cmd->add_option("--seed", f.o.seed, "master seed");
  cmd->add_option("--threads", f.threads, "worker threads (results do not depend on it)")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--out", f.out, "output directory");
}

cli::Request make_request(const Flags& f, int argc, char** argv) {
  cli::Request r;
  if (!f.config.empty()) {
    std::ifstream in(f.config);
    if (!in) throw ConfigError("cannot open config file " + f.config);
    std::stringstream text;
    text << in.rdbuf();
    r.config_text = text.str();
    std::istringstream again(r.config_text);
    r.setup = cli::parse_setup(again, f.config);
  }
  cli::apply_overrides(r.setup, f.o);
  r.threads = f.threads;
  r.out_dir = f.out;
  r.q_a = f.qa;
  r.z_list = f.z_list;
  r.z_list_over_d = f.z_list_over_d;
  for (int i = 0; i < argc; ++i) r.argv.emplace_back(argv[i]);
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-photon correlations of entangled pairs scattered by a thin diffuser"};
  app.require_subcommand(1);
  Flags f;

  auto* theory = app.add_subcommand("theory", "closed-form correlation curves");
  add_common(theory, f);
  theory->add_option("--qa", f.qa, "detector a momentum q_a [1/length, k = 1]");

  auto* simulate = app.add_subcommand("simulate", "ensemble-averaged simulated cut");
  add_common(simulate, f);
  simulate->add_option("--qa", f.qa, "detector a momentum q_a (must lie on the grid lattice)");

  auto* sweep = app.add_subcommand("sweep", "peak width and amplitude versus z");
  add_common(sweep, f);
  sweep->add_option("--z-list", f.z_list, "|z|/z0 values (comma separated)")->delimiter(',');
  sweep->add_flag("--z-list-over-d", f.z_list_over_d, "interpret --z-list as z/d");

  auto* validate = app.add_subcommand("validate", "mask statistics, propagator and guard-band report");
  add_common(validate, f);

  auto* reproduce = app.add_subcommand("reproduce", "figure presets");
  add_common(reproduce, f);
  reproduce->add_option("preset", f.preset, "fig4c | fig5c | fig6 | fig7")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? cli::kExitOk : cli::kExitConfig;
  }

  return cli::run_guarded(std::cerr, [&] {
    const cli::Request r = make_request(f, argc, argv);
    if (*theory) return cli::cmd_theory(r, std::cout);
    if (*simulate) return cli::cmd_simulate(r, std::cout);
    if (*sweep) return cli::cmd_sweep(r, std::cout);
    if (*validate) return cli::cmd_validate(r, std::cout);
    return cli::cmd_reproduce(r, f.preset, std::cout);
  });
}
