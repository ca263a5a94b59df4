#pragma once

#include <string>
#include <vector>

#include "pairscatter/grid.hpp"
#include "pairscatter/specs.hpp"

namespace pairscatter {

// Everything one simulation needs. Lengths are SI-like but only the
// dimensionless combinations kd, theta0, z/d and z/z0 matter.
struct ScatterConfig {
  TransverseGrid grid;
  GeometrySpec geometry;
  DiffuserSpec diffuser;
  PumpSpec pump;
  EnsembleSpec ensemble;
  // Half-width of the reported angular window around theta_a; 0 keeps the
  // whole momentum axis.
  double theta_span = 0.0;
};

// Regime and guard thresholds.
inline constexpr double kRegimeWarnBelow = 100.0;   // k d theta0^2
inline constexpr double kGuardBandFraction = 0.10;  // outer fraction of the window per side
inline constexpr double kGuardBandMaxEnergy = 1e-3;

struct ValidationReport {
  std::vector<std::string> warnings;
};

// Checks every construction-independent invariant: sampling rule
// (dx <= xi0/4), geometric guard rule (window >= waist + 4 d theta0),
// pump waist >= 30 xi0 unless allowed, realization count >= 2. Throws
// ConfigError on the first violation; soft conditions (regime
// k d theta0^2 < 100, narrow pump) are returned as warnings.
ValidationReport validate(const ScatterConfig& config);

// Defaults: k = 1, kd = 5697, theta0 = 0.56, dx = xi0/4,
// n = 2^17 (1D), pump waist 100 xi0.
struct DimensionlessSetup {
  int dim = 1;
  std::size_t n = std::size_t{1} << 17;
  double kd = 5697.0;
  double theta0 = 0.56;
  double dx_over_xi0 = 0.25;
  Variant variant = Variant::kPlus;
  double z_over_d = 0.0;
  bool z_given_over_z0 = false;
  double z_over_z0 = 0.0;
  double waist_over_xi0 = 100.0;
  bool allow_narrow_pump = false;
  std::uint64_t realizations = 10000;
  std::uint64_t seed = 1;
  double theta_span = 0.0;
};

ScatterConfig make_config(const DimensionlessSetup& setup);

}  // namespace pairscatter
