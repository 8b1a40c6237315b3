#include "artifacts.hpp"

#include <blissthc/errors.hpp>
#include <blissthc/hash.hpp>

#include <fstream>
#include <sstream>
#include <unistd.h>

namespace blissthc::cli {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory " + path.parent_path().string() + ": " + ec.message());
  }
  auto tmp = path;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw IoError("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw IoError("cannot rename into " + path.string() + ": " + ec.message());
  }
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

nlohmann::json read_json(const std::filesystem::path& path) {
  const auto text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(path.string() + " is not valid JSON: " + e.what());
  }
}

std::string tag_csv(const std::string& csv, const std::string& version, const std::string& calibration_hash) {
  std::istringstream in(csv);
  std::ostringstream out;
  std::string line;
  bool header = true;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    out << line << (header ? ",tool_version,calibration_hash" : "," + version + "," + calibration_hash) << '\n';
    header = false;
  }
  return out.str();
}

RunRecorder::RunRecorder(std::string command, std::filesystem::path out, std::string calibration_hash)
    : command_(std::move(command)), out_(std::move(out)), calibration_hash_(std::move(calibration_hash)) {}

void RunRecorder::write_text(const std::string& name, const std::string& content) {
  write_atomic(out_ / name, content);
  outputs_.emplace_back(name, sha256_hex(content));
}

void RunRecorder::write_json(const std::string& name, const nlohmann::json& j) { write_text(name, j.dump(2) + "\n"); }

void RunRecorder::write_csv(const std::string& name, const std::string& csv) {
  write_text(name, tag_csv(csv, std::string(version()), calibration_hash_));
}

void RunRecorder::finish(const nlohmann::json& config_echo, const nlohmann::json& extra) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& [name, digest] : outputs_) files.push_back({{"file", name}, {"sha256", digest}});
  nlohmann::json timings = nlohmann::json::array();
  for (const auto& [name, seconds] : timings_) timings.push_back({{"stage", name}, {"seconds", seconds}});
  nlohmann::json m = {{"schema", "blissthc.run_manifest"},
                      {"version", 1},
                      {"command", command_},
                      {"tool_version", std::string(version())},
                      {"calibration_hash", calibration_hash_},
                      {"config", config_echo},
                      {"timings", timings},
                      {"outputs", files}};
  if (!extra.empty()) m["summary"] = extra;
  write_atomic(out_ / ("manifest_" + command_ + ".json"), m.dump(2) + "\n");
}

}  // namespace blissthc::cli
