#include "pairscatter/config.hpp"

#include <cmath>
#include <sstream>

#include "pairscatter/error.hpp"
#include "pairscatter/optics.hpp"

namespace pairscatter {

ValidationReport validate(const ScatterConfig& c) {
  ValidationReport report;
  check_sampling_rule(c.grid, c.diffuser);

  const double k = c.grid.k();
  const double d = c.geometry.d();
  const double theta0 = c.diffuser.theta0();
  const double xi0 = c.diffuser.xi0();

  const double waist = c.geometry.variant() == Variant::kPlus ? c.pump.waist : 0.0;
  const double needed = waist + 4.0 * d * theta0;
  if (c.grid.window() < needed) {
    std::ostringstream msg;
    msg << "guard rule violated: window n*dx = " << c.grid.window()
        << " is smaller than pump waist + 4 d theta0 = " << needed << "; increase n";
    throw ConfigError(msg.str());
  }

  if (c.geometry.variant() == Variant::kPlus) {
    if (!(c.pump.waist > 0.0)) throw ConfigError("pump waist must be positive");
    if (c.pump.waist < PumpSpec::kMinWaistInXi0 * xi0) {
      std::ostringstream msg;
      msg << "pump waist " << c.pump.waist / xi0 << " xi0 is below the "
          << PumpSpec::kMinWaistInXi0 << " xi0 minimum for a wide pump";
      if (!c.pump.allow_narrow) throw ConfigError(msg.str() + " (set allow_narrow to override)");
      report.warnings.push_back(msg.str());
    }
  }

  if (c.ensemble.n_realizations < 2) throw ConfigError("ensemble needs at least 2 realizations");
  if (c.theta_span < 0.0) throw ConfigError("theta_span must be >= 0");

  const double regime = k * d * theta0 * theta0;
  if (regime < kRegimeWarnBelow) {
    std::ostringstream msg;
    msg << "regime warning: k d theta0^2 = " << regime << " < " << kRegimeWarnBelow
        << "; the dominant-diagram theory assumes d >> z0";
    report.warnings.push_back(msg.str());
  }
  return report;
}

ScatterConfig make_config(const DimensionlessSetup& s) {
  const double k = 1.0;
  if (!(s.kd > 0.0)) throw ConfigError("kd must be positive");
  const double d = s.kd / k;
  DiffuserSpec diffuser(s.theta0, k);
  const double z = s.z_given_over_z0 ? s.z_over_z0 * diffuser.z0() : s.z_over_d * d;
  if (!(s.dx_over_xi0 > 0.0)) throw ConfigError("dx/xi0 must be positive");
  TransverseGrid grid(s.dim, s.n, s.dx_over_xi0 * diffuser.xi0(), k);
  GeometrySpec geometry(d, z, s.variant);
  PumpSpec pump{s.waist_over_xi0 * diffuser.xi0(), s.allow_narrow_pump};
  EnsembleSpec ensemble{s.realizations, s.seed};
  return ScatterConfig{grid, geometry, diffuser, pump, ensemble, s.theta_span};
}

}  // namespace pairscatter
