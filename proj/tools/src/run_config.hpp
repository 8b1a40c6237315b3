#pragma once

#include <blissthc/arch.hpp>
#include <blissthc/blockenc.hpp>
#include <blissthc/logical_cost.hpp>
#include <blissthc/quantizer.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace blissthc::cli {

struct TargetRuntime {
  double alpha = 0.5;
  double hours = 1.0;
};

struct VerifyOptions {
  double tolerance = 1e-10;
  std::string source = "factorization";  // factorization | quantized | random
  std::size_t random_n = 2;
  std::size_t random_M = 2;
  bool one_body_only = false;
  std::optional<blockenc::SlotPerturbation> corrupt;
};

// Paths are resolved against the directory of the config file.
struct RunConfig {
  std::filesystem::path input;
  std::filesystem::path factorization;  // default <out>/factorization.json
  std::filesystem::path quantized;      // default <out>/quantized.json
  std::filesystem::path out = "out";

  std::vector<std::size_t> ranks;
  double rho = 0.0;
  std::vector<double> rhos;
  int max_iterations = 2000;
  double gradient_tolerance = 1e-9;
  bool optimize_shift = true;

  int aleph = 13;
  int beth = 13;
  std::vector<int> alephs;
  std::vector<int> beths;

  std::optional<std::string> preset;
  nlohmann::json circuit = nlohmann::json::object();  // overrides merged onto the derived parameters
  std::vector<std::optional<std::size_t>> batch_sizes;
  std::optional<std::vector<arch::HardwareParams>> hardware;
  std::vector<TargetRuntime> targets;
  double target_delay_m = 2000.0;

  quant::ErrorBudget budget;
  VerifyOptions verify;
  std::string sweep = "batching";  // batching | precision | rank | rho
  std::uint64_t seed = 1;

  nlohmann::json echo;  // effective configuration, recorded in the manifest

  static RunConfig from_json(const nlohmann::json& j, const std::filesystem::path& base);
  static RunConfig load(const std::filesystem::path& path);
  nlohmann::json to_json() const;
};

}  // namespace blissthc::cli
