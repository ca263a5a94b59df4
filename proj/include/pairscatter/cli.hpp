#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "pairscatter/config.hpp"

namespace pairscatter::cli {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitNumerical = 3;
inline constexpr int kExitRuntime = 4;

// Flag values; anything set here wins over the config file.
struct Overrides {
  std::optional<std::string> variant;
  std::optional<double> kd;
  std::optional<double> theta0;
  std::optional<double> z_over_d;
  std::optional<double> z_over_z0;
  std::optional<std::uint64_t> realizations;
  std::optional<std::uint64_t> seed;
};

// Reads an INI-style file:
//   [grid]      dim, n, dx_over_xi0
//   [diffuser]  theta0
//   [geometry]  kd, variant, z_over_d | z_over_z0
//   [pump]      waist_over_xi0, allow_narrow
//   [ensemble]  realizations, seed
//   [output]    theta_span
// Missing keys keep their defaults; unknown sections or keys are errors.
DimensionlessSetup load_setup(const std::filesystem::path& path);
DimensionlessSetup parse_setup(std::istream& in, const std::string& origin = "<config>");
void apply_overrides(DimensionlessSetup& setup, const Overrides& o);

// Everything a subcommand needs after flag resolution.
struct Request {
  DimensionlessSetup setup;
  int threads = 1;
  std::filesystem::path out_dir = ".";
  double q_a = 0.0;
  std::vector<double> z_list;       // sweep: |z~| values (PLUS: z/d when z_list_over_d)
  bool z_list_over_d = false;
  std::string config_text;          // echoed into the manifest
  std::vector<std::string> argv;    // echoed into the manifest
};

int cmd_theory(const Request& r, std::ostream& log);
int cmd_simulate(const Request& r, std::ostream& log);
int cmd_sweep(const Request& r, std::ostream& log);
int cmd_validate(const Request& r, std::ostream& log);
int cmd_reproduce(const Request& r, const std::string& preset, std::ostream& log);

std::vector<std::string> preset_names();

// Runs `body` and maps exceptions to exit codes, printing the message.
int run_guarded(std::ostream& err, const std::function<int()>& body);

}  // namespace pairscatter::cli
