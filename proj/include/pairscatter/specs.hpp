#pragma once

#include <cstdint>
#include <string>

#include "pairscatter/grid.hpp"

namespace pairscatter {

enum class Variant { kPlus, kMinus };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

// Thin diffuser characterised by its scattering angle. Correlation width
// xi0 = 1/(k theta0) and correlation depth z0 = 1/(k theta0^2) follow from
// the signal wavenumber.
class DiffuserSpec {
 public:
  DiffuserSpec(double theta0, double k);

  double theta0() const { return theta0_; }
  double xi0() const { return 1.0 / (k_ * theta0_); }
  double z0() const { return 1.0 / (k_ * theta0_ * theta0_); }

 private:
  double theta0_;
  double k_;
};

// Round-trip distance d and signed crystal position z. PLUS places the
// crystal behind the diffuser (0 <= z <= d/2), MINUS in front (z <= 0).
class GeometrySpec {
 public:
  GeometrySpec(double d, double z, Variant variant);

  double d() const { return d_; }
  double z() const { return z_; }
  Variant variant() const { return variant_; }
  double z_over_d() const { return z_ / d_; }
  double z_tilde(const DiffuserSpec& diffuser) const { return z_ / diffuser.z0(); }

 private:
  double d_;
  double z_;
  Variant variant_;
};

// Gaussian pump at 2k; waist is the 1/e^2 intensity radius.
struct PumpSpec {
  double waist = 0.0;
  bool allow_narrow = false;  // permits waist < 30 xi0 (flagged as a warning)

  static constexpr double kMinWaistInXi0 = 30.0;
};

struct EnsembleSpec {
  std::uint64_t n_realizations = 0;
  std::uint64_t master_seed = 0;
};

}  // namespace pairscatter
