#include "pairscatter/specs.hpp"

#include <cmath>

#include "pairscatter/error.hpp"

namespace pairscatter {

std::string to_string(Variant v) { return v == Variant::kPlus ? "plus" : "minus"; }

Variant parse_variant(const std::string& s) {
  if (s == "plus" || s == "PLUS" || s == "+") return Variant::kPlus;
  if (s == "minus" || s == "MINUS" || s == "-") return Variant::kMinus;
  throw ConfigError("variant must be 'plus' or 'minus', got '" + s + "'");
}

DiffuserSpec::DiffuserSpec(double theta0, double k) : theta0_(theta0), k_(k) {
  if (!(theta0 > 0.0) || !std::isfinite(theta0)) {
    throw ConfigError("diffuser scattering angle theta0 must be positive");
  }
  if (!(k > 0.0) || !std::isfinite(k)) {
    throw ConfigError("wavenumber k must be positive");
  }
}

GeometrySpec::GeometrySpec(double d, double z, Variant variant)
    : d_(d), z_(z), variant_(variant) {
  if (!(d > 0.0) || !std::isfinite(d)) {
    throw ConfigError("round-trip distance d must be positive");
  }
  if (!std::isfinite(z)) throw ConfigError("crystal position z must be finite");
  if (variant == Variant::kPlus) {
    if (z < 0.0) throw ConfigError("PLUS variant requires z >= 0 (crystal behind the diffuser)");
    if (z > 0.5 * d * (1.0 + 1e-12)) {
      throw ConfigError("PLUS variant requires z <= d/2 (got z/d = " + std::to_string(z / d) + ")");
    }
  } else if (z > 0.0) {
    throw ConfigError("MINUS variant requires z <= 0 (crystal in front of the diffuser)");
  }
}

}  // namespace pairscatter
