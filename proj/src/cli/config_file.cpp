#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "pairscatter/cli.hpp"
#include "pairscatter/error.hpp"

namespace pairscatter::cli {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys = {
      {"grid", {"dim", "n", "dx_over_xi0"}},
      {"diffuser", {"theta0"}},
      {"geometry", {"kd", "variant", "z_over_d", "z_over_z0"}},
      {"pump", {"waist_over_xi0", "allow_narrow"}},
      {"ensemble", {"realizations", "seed"}},
      {"output", {"theta_span"}},
  };
  return keys;
}

template <typename T>
void read(const pt::ptree& tree, const std::string& key, T& target, const std::string& origin) {
  const auto v = tree.get_optional<std::string>(key);
  if (!v) return;
  const auto parsed = tree.get_optional<T>(key);
  if (!parsed) throw ConfigError(origin + ": cannot parse " + key + " = '" + *v + "'");
  target = *parsed;
}

}  // namespace

DimensionlessSetup parse_setup(std::istream& in, const std::string& origin) {
  pt::ptree tree;
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    const auto it = known_keys().find(section);
    if (it == known_keys().end()) throw ConfigError(origin + ": unknown section [" + section + "]");
    for (const auto& [key, unused] : body) {
      if (!it->second.contains(key)) {
        throw ConfigError(origin + ": unknown key '" + key + "' in [" + section + "]");
      }
    }
  }

  DimensionlessSetup s;
  read(tree, "grid.dim", s.dim, origin);
  read(tree, "grid.n", s.n, origin);
  read(tree, "grid.dx_over_xi0", s.dx_over_xi0, origin);
  read(tree, "diffuser.theta0", s.theta0, origin);
  read(tree, "geometry.kd", s.kd, origin);
  if (const auto v = tree.get_optional<std::string>("geometry.variant")) s.variant = parse_variant(*v);
  const bool has_d = tree.get_optional<std::string>("geometry.z_over_d").has_value();
  const bool has_z0 = tree.get_optional<std::string>("geometry.z_over_z0").has_value();
  if (has_d && has_z0) throw ConfigError(origin + ": give z_over_d or z_over_z0, not both");
  read(tree, "geometry.z_over_d", s.z_over_d, origin);
  if (has_z0) {
    read(tree, "geometry.z_over_z0", s.z_over_z0, origin);
    s.z_given_over_z0 = true;
  }
  read(tree, "pump.waist_over_xi0", s.waist_over_xi0, origin);
  read(tree, "pump.allow_narrow", s.allow_narrow_pump, origin);
  read(tree, "ensemble.realizations", s.realizations, origin);
  read(tree, "ensemble.seed", s.seed, origin);
  read(tree, "output.theta_span", s.theta_span, origin);
  return s;
}

DimensionlessSetup load_setup(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  return parse_setup(in, path.string());
}

void apply_overrides(DimensionlessSetup& s, const Overrides& o) {
  if (o.variant) s.variant = parse_variant(*o.variant);
  if (o.kd) s.kd = *o.kd;
  if (o.theta0) s.theta0 = *o.theta0;
  if (o.z_over_d && o.z_over_z0) throw ConfigError("--z-over-d and --z-over-z0 are exclusive");
  if (o.z_over_d) {
    s.z_over_d = *o.z_over_d;
    s.z_given_over_z0 = false;
  }
  if (o.z_over_z0) {
    s.z_over_z0 = *o.z_over_z0;
    s.z_given_over_z0 = true;
  }
  if (o.realizations) s.realizations = *o.realizations;
  if (o.seed) s.seed = *o.seed;
}

}  // namespace pairscatter::cli
