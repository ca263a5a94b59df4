#include "pairscatter/output.hpp"

#include <openssl/evp.h>

#include <cstdio>
#include <fstream>
#include <memory>

#include "pairscatter/error.hpp"

#ifndef PAIRSCATTER_VERSION
#define PAIRSCATTER_VERSION "unknown"
#endif

namespace pairscatter::io {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_csv(const std::filesystem::path& path, const Table& table) {
  if (table.columns.size() != table.data.size()) throw std::logic_error("csv: column count mismatch");
  const std::size_t rows = table.data.empty() ? 0 : table.data.front().size();
  for (const auto& col : table.data) {
    if (col.size() != rows) throw std::logic_error("csv: ragged columns");
  }
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << (c ? "," : "") << table.columns[c];
  }
  out << '\n';
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < table.data.size(); ++c) {
      out << (c ? "," : "") << format_double(table.data[c][r]);
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("sha256 init failed");
  }
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof buf);
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf, static_cast<std::size_t>(in.gcount()));
  }
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), md, &len);
  static const char* hex = "0123456789abcdef";
  std::string s;
  for (unsigned int i = 0; i < len; ++i) {
    s += hex[md[i] >> 4];
    s += hex[md[i] & 15];
  }
  return s;
}

nlohmann::json setup_to_json(const DimensionlessSetup& s) {
  nlohmann::json j;
  j["grid"] = {{"dim", s.dim}, {"n", s.n}, {"dx_over_xi0", s.dx_over_xi0}};
  j["diffuser"] = {{"theta0", s.theta0}};
  j["geometry"] = {{"kd", s.kd}, {"variant", to_string(s.variant)}};
  if (s.z_given_over_z0) {
    j["geometry"]["z_over_z0"] = s.z_over_z0;
  } else {
    j["geometry"]["z_over_d"] = s.z_over_d;
  }
  j["pump"] = {{"waist_over_xi0", s.waist_over_xi0}, {"allow_narrow", s.allow_narrow_pump}};
  j["ensemble"] = {{"realizations", s.realizations}, {"seed", s.seed}};
  j["output"] = {{"theta_span", s.theta_span}};
  return j;
}

Manifest::Manifest(std::string command) : command_(std::move(command)) {}

void Manifest::set_setup(const DimensionlessSetup& s) { setup_ = setup_to_json(s); }

void Manifest::add_output(const std::filesystem::path& file) {
  outputs_.emplace_back(file.filename().string(), sha256_file(file));
}

void Manifest::mark_stage(const std::string& name) {
  const auto now = clock::now();
  stages_.emplace_back(name, std::chrono::duration<double>(now - last_).count());
  last_ = now;
}

nlohmann::json Manifest::to_json() const {
  nlohmann::json j;
  j["command"] = command_;
  j["code_version"] = PAIRSCATTER_VERSION;
  j["config"] = setup_;
  if (setup_.contains("ensemble")) j["master_seed"] = setup_["ensemble"]["seed"];
  for (const auto& [k, v] : extra_.items()) j[k] = v;
  nlohmann::json outputs = nlohmann::json::array();
  for (const auto& [name, digest] : outputs_) outputs.push_back({{"file", name}, {"sha256", digest}});
  j["outputs"] = outputs;
  nlohmann::json timing = nlohmann::json::object();
  for (const auto& [name, seconds] : stages_) timing[name] = seconds;
  j["timing_s"] = timing;
  j["wall_clock_s"] = std::chrono::duration<double>(clock::now() - start_).count();
  return j;
}

void Manifest::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << to_json().dump(2) << '\n';
}

std::map<std::string, std::string> Manifest::digests() const {
  return {outputs_.begin(), outputs_.end()};
}

}  // namespace pairscatter::io
