#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "json.hpp"
#include "pairscatter/cli.hpp"
#include "pairscatter/error.hpp"
#include "pairscatter/output.hpp"

using namespace pairscatter;
using namespace pairscatter::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("pairscatter_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kSmallConfig = R"(
[grid]
n = 2048
[geometry]
kd = 10
variant = minus
z_over_z0 = -0.5
[ensemble]
realizations = 100
seed = 5
)";

}  // namespace

TEST_CASE("config file parsing") {
  std::istringstream in(kSmallConfig);
  const auto s = parse_setup(in);
  CHECK(s.n == 2048);
  CHECK(s.kd == 10.0);
  CHECK(s.variant == Variant::kMinus);
  CHECK(s.z_given_over_z0);
  CHECK(s.z_over_z0 == -0.5);
  CHECK(s.realizations == 100);
  CHECK(s.theta0 == 0.56);  // default kept
}

TEST_CASE("config file errors") {
  auto parse = [](const std::string& text) {
    std::istringstream in(text);
    return parse_setup(in, "t.ini");
  };
  CHECK_THROWS_WITH_AS(parse("[grid]\nnn = 4\n"), doctest::Contains("unknown key"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("[mesh]\nn = 4\n"), doctest::Contains("unknown section"), ConfigError);
  CHECK_THROWS_AS(parse("[grid]\nn = many\n"), ConfigError);
  CHECK_THROWS_AS(parse("[geometry]\nz_over_d = 0.1\nz_over_z0 = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("[geometry]\nvariant = sideways\n"), ConfigError);
  CHECK_THROWS_AS(load_setup("/nonexistent/setup.ini"), ConfigError);
}

TEST_CASE("overrides win over the file") {
  std::istringstream in(kSmallConfig);
  auto s = parse_setup(in);
  Overrides o;
  o.kd = 20;
  o.z_over_d = 0.0;
  o.variant = "plus";
  o.seed = 99;
  apply_overrides(s, o);
  CHECK(s.kd == 20);
  CHECK(s.variant == Variant::kPlus);
  CHECK_FALSE(s.z_given_over_z0);
  CHECK(s.seed == 99);
  Overrides both;
  both.z_over_d = 0.1;
  both.z_over_z0 = 1.0;
  CHECK_THROWS_AS(apply_overrides(s, both), ConfigError);
}

TEST_CASE("CSV output format") {
  const auto dir = scratch_dir("csv");
  io::Table t{{"a", "b"}, {{1.0, 0.1}, {-2.5, 1e-300}}};
  io::write_csv(dir / "t.csv", t);
  CHECK(slurp(dir / "t.csv") == "a,b\n1,-2.5\n0.10000000000000001,1e-300\n");
  CHECK(io::format_double(0.5) == "0.5");
}

TEST_CASE("SHA-256 of a known string") {
  const auto dir = scratch_dir("sha");
  std::ofstream(dir / "abc.txt", std::ios::binary) << "abc";
  CHECK(io::sha256_file(dir / "abc.txt") ==
        "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("exit code mapping") {
  std::ostringstream err;
  CHECK(run_guarded(err, [] { return kExitOk; }) == 0);
  CHECK(run_guarded(err, []() -> int { throw ConfigError("x"); }) == kExitConfig);
  CHECK(run_guarded(err, []() -> int { throw NumericalError("x"); }) == kExitNumerical);
  CHECK(run_guarded(err, []() -> int { throw std::runtime_error("x"); }) == kExitRuntime);
  CHECK(err.str().find("config error") != std::string::npos);
}

TEST_CASE("simulate is reproducible and independent of the worker count") {
  std::istringstream in(kSmallConfig);
  Request r;
  r.setup = parse_setup(in);
  std::ostringstream log;
  std::vector<std::string> digests;
  for (int threads : {1, 3}) {
    r.threads = threads;
    r.out_dir = scratch_dir("sim" + std::to_string(threads));
    REQUIRE(run_guarded(log, [&] { return cmd_simulate(r, log); }) == 0);
    digests.push_back(io::sha256_file(r.out_dir / "simulate.csv"));
    const auto m = nlohmann::json::parse(slurp(r.out_dir / "simulate.manifest.json"));
    CHECK(m["command"] == "simulate");
    CHECK(m["master_seed"] == 5);
    CHECK(m["outputs"].size() == 1);
  }
  CHECK(digests[0] == digests[1]);
  r.setup.realizations = 10;
  CHECK(run_guarded(log, [&] { return cmd_simulate(r, log); }) == kExitConfig);
}

TEST_CASE("theory command writes its table") {
  Request r;
  r.setup.variant = Variant::kMinus;
  r.setup.z_given_over_z0 = true;
  r.setup.z_over_z0 = -1.0;
  r.out_dir = scratch_dir("theory");
  std::ostringstream log;
  REQUIRE(cmd_theory(r, log) == 0);
  const std::string csv = slurp(r.out_dir / "theory.csv");
  CHECK(csv.rfind("theta_rad,", 0) == 0);
  CHECK(csv.find("gamma_minus2") != std::string::npos);
}

TEST_CASE("presets") {
  const auto names = preset_names();
  CHECK(std::find(names.begin(), names.end(), "fig6") != names.end());
  Request r;
  r.out_dir = scratch_dir("preset");
  std::ostringstream log;
  CHECK_THROWS_WITH_AS(cmd_reproduce(r, "fig99", log), doctest::Contains("fig4c"), ConfigError);
}
