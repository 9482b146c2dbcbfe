#include "run_output.hpp"

#include <cstdio>
#include <stdexcept>

namespace multigrowth::cli {

std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

CsvFile::CsvFile(const std::filesystem::path& path, const std::string& header)
    : path_(path), out_(path, std::ios::binary | std::ios::trunc) {
  if (!out_) throw std::runtime_error("cannot open output file " + path.string());
  out_ << header << '\n';
}

void CsvFile::close() {
  out_.flush();
  if (!out_) throw std::runtime_error("write failed on " + path_.string());
  out_.close();
}

RunContext::RunContext(std::filesystem::path out_dir, std::string command,
                       std::vector<std::string> argv, std::uint64_t master_seed)
    : dir_(std::move(out_dir)),
      command_(std::move(command)),
      argv_(std::move(argv)),
      master_seed_(master_seed),
      started_(std::chrono::steady_clock::now()) {
  std::filesystem::create_directories(dir_);
}

CsvFile RunContext::csv(const std::string& name, const std::string& header) {
  outputs_.push_back(name);
  return CsvFile(dir_ / name, header);
}

void RunContext::write_json(const std::string& name, const nlohmann::json& doc) {
  outputs_.push_back(name);
  std::ofstream out(dir_ / name, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open output file " + (dir_ / name).string());
  out << doc.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed on " + (dir_ / name).string());
}

void RunContext::finish() {
  const double seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started_).count();
  nlohmann::json manifest{
      {"tool", "multigrowth"},
      {"version", MULTIGROWTH_VERSION},
      {"command", command_},
      {"argv", argv_},
      {"parameters", params_},
      {"master_seed", master_seed_},
      {"duration_seconds", seconds},
      {"outputs", outputs_},
  };
  std::ofstream out(dir_ / "manifest.json", std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open manifest.json");
  out << manifest.dump(2) << '\n';
  if (!out) throw std::runtime_error("write failed on manifest.json");
}

}  // namespace multigrowth::cli
