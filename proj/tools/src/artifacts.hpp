#pragma once

#include <nlohmann/json.hpp>

#include <chrono>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

namespace blissthc::cli {

// Writes temp file + rename so readers never observe a partial artifact.
void write_atomic(const std::filesystem::path& path, const std::string& content);
std::string read_text(const std::filesystem::path& path);
nlohmann::json read_json(const std::filesystem::path& path);

// Appends tool_version and calibration_hash columns to every line of a CSV with a header.
std::string tag_csv(const std::string& csv, const std::string& version, const std::string& calibration_hash);

// Collects outputs and stage timings of one command and writes its manifest.
class RunRecorder {
 public:
  RunRecorder(std::string command, std::filesystem::path out, std::string calibration_hash);

  const std::filesystem::path& out() const { return out_; }
  const std::string& calibration_hash() const { return calibration_hash_; }

  void write_text(const std::string& name, const std::string& content);
  void write_json(const std::string& name, const nlohmann::json& j);
  void write_csv(const std::string& name, const std::string& csv);  // tagged

  template <class F>
  auto stage(const std::string& name, F&& f) {
    const auto start = std::chrono::steady_clock::now();
    struct Record {
      RunRecorder* self;
      std::string name;
      std::chrono::steady_clock::time_point start;
      ~Record() {
        self->timings_.emplace_back(name, std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
      }
    } record{this, name, start};
    return std::forward<F>(f)();
  }

  // manifest_<command>.json; timings are the only field that differs between identical runs.
  void finish(const nlohmann::json& config_echo, const nlohmann::json& extra = nlohmann::json::object());

 private:
  std::string command_;
  std::filesystem::path out_;
  std::string calibration_hash_;
  std::vector<std::pair<std::string, std::string>> outputs_;  // name, sha256
  std::vector<std::pair<std::string, double>> timings_;
};

}  // namespace blissthc::cli
