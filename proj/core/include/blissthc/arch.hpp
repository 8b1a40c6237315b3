#pragma once

#include "blissthc/logical_cost.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <string>
#include <vector>

namespace blissthc::arch {

struct HardwareParams {
  double r_im = 1e9;          // resource states per second per interleaving module
  double c_fiber_km_s = 2e5;  // light speed in fiber
  double l_delay_m = 1.0;
  double alpha = 0.5;
  double p_fail = 0.1;

  double c_fiber_m_s() const { return c_fiber_km_s * 1e3; }
  // logical-cycle duration l / c
  double delay_s() const { return l_delay_m / c_fiber_m_s(); }
  void validate() const;
};

nlohmann::json to_json(const HardwareParams& hw);
HardwareParams hardware_from_json(const nlohmann::json& j);

enum class ArchKind { baseline, active_volume };
std::string to_string(ArchKind k);
ArchKind arch_kind_from_string(const std::string& s);

struct ArchitectureSpec {
  ArchKind kind = ArchKind::baseline;
  double memory_qubits = 0.0;
  double workspace_qubits = 0.0;
  int code_distance = 3;

  double total_qubits() const { return memory_qubits + workspace_qubits; }
  void validate() const;
};

struct PhysicalEstimate {
  ArchKind kind = ArchKind::baseline;
  double n_im = 0.0;
  double runtime_seconds = 0.0;
  double logical_qubits = 0.0;
  double memory_qubits = 0.0;
  int code_distance = 0;
  double logical_cycles = 0.0;
  double spacetime_volume = 0.0;
  bool reaction_limit_warning = false;  // more than 1e7 modules

  // Runtime recomputed from the stored fields.
  double recomputed_runtime(const HardwareParams& hw) const;
};

nlohmann::json to_json(const PhysicalEstimate& e);

inline constexpr double kReactionLimitIms = 1e7;

// Baseline consumes t_count with n = 2m; Active Volume consumes av_blocks with n / w.
double spacetime_volume(const ArchitectureSpec& arch, const cost::LogicalCost& c);

std::int64_t logical_qubits_from_ims(double n_im, int d, const HardwareParams& hw);
double logical_qubits_from_ims_exact(double n_im, int d, const HardwareParams& hw);
std::int64_t ims_required(double n, int d, const HardwareParams& hw);
double ims_required_exact(double n, int d, const HardwareParams& hw);

// Baseline: (l d / c) n_T. Active Volume: (l d / c) b / w.
double runtime(const ArchitectureSpec& arch, const cost::LogicalCost& c, const HardwareParams& hw);
// Active Volume with the workspace derived from an IM budget; throws InfeasibleError when w <= 0.
double runtime_av_from_ims(double av_blocks, double memory, double n_im, int d, const HardwareParams& hw);

inline constexpr int kMinDistance = 3;
inline constexpr int kMaxDistance = 100;

// Smallest d in [3, 100] whose block budget covers the computation. Baseline: 2 m n_T <= p_f
// 10^(alpha d / 2). Active Volume: b <= (w / n) p_f 10^(alpha d / 2) with n from the IM budget.
int min_distance(ArchKind kind, const cost::LogicalCost& c, const HardwareParams& hw, double memory, double n_im = 0.0);

PhysicalEstimate estimate_baseline(const cost::LogicalCost& c, const HardwareParams& hw);
// IM count fixed from outside (for example matched to a baseline run); distance minimized.
PhysicalEstimate estimate_active_volume(const cost::LogicalCost& c, double n_im, const HardwareParams& hw);

enum class SpeedupMode { fixed_qubits, fixed_footprint };

// fixed_qubits: (2 - m1/m0) m0 n_T0 / b1. fixed_footprint: baseline runtime over Active Volume
// runtime on the baseline's IM count, each with its own minimal distance.
double speedup(const cost::LogicalCost& c0, const cost::LogicalCost& c1, SpeedupMode mode,
               const HardwareParams& hw = {});

// Stage factors (b_{i-1}/w_{i-1}) / (b_i/w_i), w_i = 2 m0 - m_i; the first stage is baseline
// with b/w = n_T.
std::vector<double> speedup_decomposition(const std::vector<cost::LogicalCost>& stages, double m0);

struct ImSizing {
  std::int64_t n_im = 0;
  int code_distance = 0;
  double runtime_seconds = 0.0;
  double target_seconds = 0.0;
};

// Smallest IM count meeting the runtime target with a self-consistent minimal distance.
ImSizing min_ims_for_runtime(const cost::LogicalCost& c, const HardwareParams& hw, double target_seconds,
                             std::int64_t max_ims = 100'000'000);

// h:mm:ss with the seconds rounded up.
std::string format_hms(double seconds);

}  // namespace blissthc::arch
