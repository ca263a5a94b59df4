#pragma once

// Pieces shared by the subcommands and the presets.

#include <filesystem>
#include <ostream>
#include <string>
#include <vector>

#include "pairscatter/analysis.hpp"
#include "pairscatter/engine.hpp"
#include "pairscatter/output.hpp"
#include "pairscatter/theory.hpp"

namespace pairscatter::cli::detail {

// make_config + validate; warnings go to `log`.
ScatterConfig resolve(const DimensionlessSetup& setup, std::ostream& log);

// theta = (q_b - q_a)/k on the grid's momentum lattice, |theta| <= span.
std::vector<double> theta_axis(const ScatterConfig& config, double q_a, double span);

io::Table theory_table(const theory::TheoryCurve& c, Variant v);
io::Table simulation_table(const CorrelationCurve& c);

// One z = 0-style cut compared with the oracle along theta_a = q_a/k.
struct CutComparison {
  CorrelationCurve simulation;
  theory::TheoryCurve theory;
  analysis::NormalizedPair pair;
  analysis::BackgroundSubtracted peak;
  analysis::Measurement fwhm;
  analysis::Measurement ratio;
  double theory_fwhm = 0.0;
};

CutComparison compare_cut(const ScatterConfig& config, double q_a, int threads);

// Writes <stem>_sim.csv, <stem>_theory.csv, <stem>_normalized.csv and
// registers them with the manifest.
void write_comparison(const std::filesystem::path& dir, const std::string& stem,
                      const CutComparison& c, Variant v, io::Manifest& manifest);

std::string fixed(double v, int precision = 5);

}  // namespace pairscatter::cli::detail

namespace pairscatter::cli::detail {

void write_sweep(const std::filesystem::path& dir, const std::string& stem,
                 const analysis::SweepResult& s, io::Manifest& manifest);
void print_sweep(std::ostream& log, const analysis::SweepResult& s);

}  // namespace pairscatter::cli::detail
