#pragma once

#include <chrono>
#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "pairscatter/config.hpp"

namespace pairscatter::io {

// Column-major numeric table written as CSV: one header line, full double
// precision (%.17g), '\n' line endings.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> data;  // one vector per column
};

void write_csv(const std::filesystem::path& path, const Table& table);
std::string format_double(double v);

// Lower-case hex SHA-256 of a file's bytes.
std::string sha256_file(const std::filesystem::path& path);

nlohmann::json setup_to_json(const DimensionlessSetup& s);

// Sidecar manifest. Timing fields are the only non-deterministic content.
class Manifest {
 public:
  explicit Manifest(std::string command);

  void set_setup(const DimensionlessSetup& s);
  void set(const std::string& key, nlohmann::json value) { extra_[key] = std::move(value); }
  void add_output(const std::filesystem::path& file);
  // Records wall time since the previous stage mark (or construction).
  void mark_stage(const std::string& name);

  nlohmann::json to_json() const;
  void write(const std::filesystem::path& path) const;

  // name -> digest of every listed output
  std::map<std::string, std::string> digests() const;

 private:
  using clock = std::chrono::steady_clock;
  std::string command_;
  nlohmann::json setup_;
  nlohmann::json extra_ = nlohmann::json::object();
  std::vector<std::pair<std::string, std::string>> outputs_;
  std::vector<std::pair<std::string, double>> stages_;
  clock::time_point start_ = clock::now();
  clock::time_point last_ = start_;
};

}  // namespace pairscatter::io
