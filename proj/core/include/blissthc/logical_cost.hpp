#pragma once

#include "blissthc/calibration.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace blissthc::cost {

enum class LoaderMode { qroam, qrom };
enum class Encoding { binary, unary };
enum class SelectVariant { prior_art, modified };

std::string to_string(LoaderMode m);
std::string to_string(Encoding e);
std::string to_string(SelectVariant v);
LoaderMode loader_mode_from_string(const std::string& s);
Encoding encoding_from_string(const std::string& s);
SelectVariant select_variant_from_string(const std::string& s);

struct CircuitParams {
  std::size_t N = 0;  // spin orbitals
  std::size_t M = 0;
  int aleph = 0;
  int beth = 0;
  std::optional<std::size_t> batch_size;  // empty: all n-1 angles at once
  LoaderMode loader_mode = LoaderMode::qroam;
  Encoding encoding = Encoding::binary;
  SelectVariant select_variant = SelectVariant::modified;
  double epsilon_pea = 1e-3;
  double lambda_thc = 0.0;

  std::size_t n_spatial() const { return N / 2; }
  void validate() const;
};

nlohmann::json to_json(const CircuitParams& p);
CircuitParams circuit_params_from_json(const nlohmann::json& j);

struct SubroutineCost {
  std::int64_t toffoli = 0;
  double av_blocks = 0.0;
  std::int64_t memory_highwater = 0;
};

struct LogicalCost {
  std::int64_t iterations = 1;
  std::int64_t toffoli = 0;
  std::int64_t t_residual = 0;
  std::int64_t t_count = 0;
  double av_blocks = 0.0;
  std::int64_t memory_qubits = 0;
  // totals over all iterations; keys: prepare, prepare_dagger, select, qpe_overhead (whichever apply)
  std::map<std::string, SubroutineCost> breakdown;
};

nlohmann::json to_json(const LogicalCost& c);

std::int64_t qpe_iterations(double lambda_thc, double epsilon_pea);
std::int64_t toffoli_to_t(std::int64_t toffoli, std::int64_t residual_t);

// Batch bookkeeping: B batches of r_eff = ceil(G / B) angles, the last holding s_last.
struct Batching {
  std::size_t angles = 0;  // G = n - 1
  std::size_t batches = 1;
  std::size_t r_eff = 0;
  std::size_t last = 0;
};
Batching batching(const CircuitParams& p);

std::int64_t angle_bits(const CircuitParams& p);  // b = beth (modified) or beth + 1
std::int64_t angle_register_qubits(const CircuitParams& p);
std::int64_t unary_conversion_qubits(const CircuitParams& p);

// Per-call costs (iterations = 1).
LogicalCost cost_select(const CircuitParams& p, const CostTable& t);
LogicalCost cost_prepare(const CircuitParams& p, const CostTable& t);
LogicalCost cost_prepare_dagger(const CircuitParams& p, const CostTable& t);
// Whole phase estimation: qpe_iterations walk steps.
LogicalCost cost_algorithm(const CircuitParams& p, const CostTable& t);

struct LoaderReport {
  LoaderMode mode = LoaderMode::qroam;
  std::int64_t k = 1;  // QROAM parallelism (1 for QROM)
  std::int64_t toffoli = 0;
  double av_blocks = 0.0;
  std::int64_t extra_qubits = 0;
};
LoaderReport prepare_loader(const CircuitParams& p, const CostTable& t);

std::int64_t qroam_qubits_estimate(std::size_t M, int aleph);  // round(M sqrt(aleph/2 + log2 M))
std::int64_t qrom_qubits_estimate(std::size_t M, int aleph);   // aleph + 2 ceil(log2 M)
double coefficient_accuracy(std::size_t M, std::size_t N, int aleph);  // 2^(1-aleph) / (M(M+1) + N)

struct TradeoffPoint {
  std::optional<std::size_t> r;
  std::size_t r_eff = 0;
  LoaderMode loader_mode = LoaderMode::qroam;
  Encoding encoding = Encoding::binary;
  std::int64_t memory_qubits = 0;
  std::int64_t toffoli = 0;
  std::int64_t t_count = 0;
  double av_blocks = 0.0;
};

// For each batch size the loader falls back to QROM when the QROAM scratch would raise the
// memory highwater above Select's. The unbatched entry keeps p.loader_mode.
std::vector<TradeoffPoint> batching_tradeoff(const CircuitParams& p, const std::vector<std::optional<std::size_t>>& rs,
                                             const CostTable& t);

std::string tradeoff_csv(const std::vector<TradeoffPoint>& pts, const std::string& tool_version,
                         const std::string& calibration_hash);

}  // namespace blissthc::cost
