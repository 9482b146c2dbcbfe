#pragma once

#include <chrono>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

namespace multigrowth::cli {

// Doubles are printed with 17 significant digits: enough for exact
// round-trips, and byte-stable across runs since the value is deterministic.
std::string fmt17(double x);

// One CSV data file, opened in binary mode so output bytes never depend on
// platform newline handling.
class CsvFile {
 public:
  CsvFile(const std::filesystem::path& path, const std::string& header);
  void row(const std::string& cells) { out_ << cells << '\n'; }
  void close();

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

// Tracks everything one command run produces and writes the manifest at the
// end: the argv as given, the resolved parameters, the seed, version, wall
// time, and the list of data files.
class RunContext {
 public:
  RunContext(std::filesystem::path out_dir, std::string command,
             std::vector<std::string> argv, std::uint64_t master_seed);

  const std::filesystem::path& dir() const { return dir_; }

  CsvFile csv(const std::string& name, const std::string& header);
  void write_json(const std::string& name, const nlohmann::json& doc);
  void parameters(nlohmann::json params) { params_ = std::move(params); }

  // Writes manifest.json; call once, after all data files are out.
  void finish();

 private:
  std::filesystem::path dir_;
  std::string command_;
  std::vector<std::string> argv_;
  std::uint64_t master_seed_;
  nlohmann::json params_;
  std::vector<std::string> outputs_;
  std::chrono::steady_clock::time_point started_;
};

}  // namespace multigrowth::cli
