#include "blissthc/arch.hpp"

#include "blissthc/errors.hpp"

#include <cmath>
#include <cstdio>
#include <limits>

namespace blissthc::arch {

namespace {

// ceil/floor that ignore last-ulp noise around exact integers
double ceil_tol(double v) { return std::ceil(v * (1.0 - 1e-12)); }
double floor_tol(double v) { return std::floor(v * (1.0 + 1e-12)); }

double block_budget(const HardwareParams& hw, int d) { return hw.p_fail * std::pow(10.0, hw.alpha * d / 2.0); }

}  // namespace

void HardwareParams::validate() const {
  if (!(r_im > 0.0) || !(c_fiber_km_s > 0.0) || !(l_delay_m > 0.0) || !(alpha > 0.0))
    throw DomainError("hardware parameters must be positive");
  if (!(p_fail > 0.0 && p_fail < 1.0)) throw DomainError("p_fail must lie in (0, 1)");
}

nlohmann::json to_json(const HardwareParams& hw) {
  return {{"r_im", hw.r_im},
          {"c_fiber_km_s", hw.c_fiber_km_s},
          {"l_delay_m", hw.l_delay_m},
          {"alpha", hw.alpha},
          {"p_fail", hw.p_fail}};
}

HardwareParams hardware_from_json(const nlohmann::json& j) {
  try {
    HardwareParams hw;
    hw.r_im = j.value("r_im", hw.r_im);
    hw.c_fiber_km_s = j.value("c_fiber_km_s", hw.c_fiber_km_s);
    hw.l_delay_m = j.value("l_delay_m", hw.l_delay_m);
    hw.alpha = j.value("alpha", hw.alpha);
    hw.p_fail = j.value("p_fail", hw.p_fail);
    hw.validate();
    return hw;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("hardware parameters: ") + e.what());
  }
}

std::string to_string(ArchKind k) { return k == ArchKind::baseline ? "baseline" : "active_volume"; }

ArchKind arch_kind_from_string(const std::string& s) {
  if (s == "baseline" || s == "BL") return ArchKind::baseline;
  if (s == "active_volume" || s == "AV") return ArchKind::active_volume;
  throw SchemaError("unknown architecture '" + s + "'");
}

void ArchitectureSpec::validate() const {
  if (code_distance < kMinDistance) throw DomainError("code distance must be >= 3");
  if (!(memory_qubits > 0.0)) throw DomainError("memory qubits must be positive");
  if (kind == ArchKind::baseline && workspace_qubits != memory_qubits)
    throw DomainError("baseline architecture requires w = m");
  if (kind == ArchKind::active_volume && !(workspace_qubits > 0.0)) throw InfeasibleError("workspace must be positive");
}

double PhysicalEstimate::recomputed_runtime(const HardwareParams& hw) const {
  return hw.delay_s() * code_distance * spacetime_volume / logical_qubits;
}

nlohmann::json to_json(const PhysicalEstimate& e) {
  return {{"architecture", to_string(e.kind)},
          {"n_im", e.n_im},
          {"runtime_seconds", e.runtime_seconds},
          {"runtime_hms", format_hms(e.runtime_seconds)},
          {"logical_qubits", e.logical_qubits},
          {"memory_qubits", e.memory_qubits},
          {"code_distance", e.code_distance},
          {"logical_cycles", e.logical_cycles},
          {"spacetime_volume", e.spacetime_volume},
          {"reaction_limit_warning", e.reaction_limit_warning}};
}

double spacetime_volume(const ArchitectureSpec& arch, const cost::LogicalCost& c) {
  if (arch.kind == ArchKind::baseline) return 2.0 * arch.memory_qubits * double(c.t_count);
  if (!(arch.workspace_qubits > 0.0)) throw InfeasibleError("workspace must be positive");
  return arch.total_qubits() / arch.workspace_qubits * c.av_blocks;
}

double logical_qubits_from_ims_exact(double n_im, int d, const HardwareParams& hw) {
  hw.validate();
  return n_im * hw.r_im * hw.delay_s() / (double(d) * d);
}

std::int64_t logical_qubits_from_ims(double n_im, int d, const HardwareParams& hw) {
  return std::int64_t(floor_tol(logical_qubits_from_ims_exact(n_im, d, hw)));
}

double ims_required_exact(double n, int d, const HardwareParams& hw) {
  hw.validate();
  return n * double(d) * d / (hw.r_im * hw.delay_s());
}

std::int64_t ims_required(double n, int d, const HardwareParams& hw) {
  return std::int64_t(ceil_tol(ims_required_exact(n, d, hw)));
}

double runtime(const ArchitectureSpec& arch, const cost::LogicalCost& c, const HardwareParams& hw) {
  arch.validate();
  hw.validate();
  const double cycle = hw.delay_s() * arch.code_distance;
  if (arch.kind == ArchKind::baseline) return cycle * double(c.t_count);
  return cycle * c.av_blocks / arch.workspace_qubits;
}

double runtime_av_from_ims(double av_blocks, double memory, double n_im, int d, const HardwareParams& hw) {
  const double n = double(logical_qubits_from_ims(n_im, d, hw));
  const double w = n - memory;
  if (!(w > 0.0)) throw InfeasibleError("memory exceeds the logical qubits supplied by the IM budget");
  return hw.delay_s() * d * av_blocks / w;
}

int min_distance(ArchKind kind, const cost::LogicalCost& c, const HardwareParams& hw, double memory, double n_im) {
  hw.validate();
  for (int d = kMinDistance; d <= kMaxDistance; ++d) {
    if (kind == ArchKind::baseline) {
      if (2.0 * memory * double(c.t_count) <= block_budget(hw, d)) return d;
    } else {
      const double n = double(logical_qubits_from_ims(n_im, d, hw));
      const double w = n - memory;
      if (w > 0.0 && c.av_blocks <= w / n * block_budget(hw, d)) return d;
    }
  }
  throw InfeasibleError("no code distance <= 100 meets the failure budget");
}

PhysicalEstimate estimate_baseline(const cost::LogicalCost& c, const HardwareParams& hw) {
  const double m = double(c.memory_qubits);
  PhysicalEstimate e;
  e.kind = ArchKind::baseline;
  e.code_distance = min_distance(ArchKind::baseline, c, hw, m);
  e.memory_qubits = m;
  e.logical_qubits = 2.0 * m;
  e.n_im = double(ims_required(e.logical_qubits, e.code_distance, hw));
  const ArchitectureSpec spec{ArchKind::baseline, m, m, e.code_distance};
  e.spacetime_volume = spacetime_volume(spec, c);
  e.logical_cycles = double(c.t_count);
  e.runtime_seconds = runtime(spec, c, hw);
  e.reaction_limit_warning = e.n_im > kReactionLimitIms;
  return e;
}

PhysicalEstimate estimate_active_volume(const cost::LogicalCost& c, double n_im, const HardwareParams& hw) {
  const double m = double(c.memory_qubits);
  PhysicalEstimate e;
  e.kind = ArchKind::active_volume;
  e.n_im = n_im;
  e.code_distance = min_distance(ArchKind::active_volume, c, hw, m, n_im);
  e.memory_qubits = m;
  e.logical_qubits = double(logical_qubits_from_ims(n_im, e.code_distance, hw));
  const ArchitectureSpec spec{ArchKind::active_volume, m, e.logical_qubits - m, e.code_distance};
  e.spacetime_volume = spacetime_volume(spec, c);
  e.logical_cycles = c.av_blocks / spec.workspace_qubits;
  e.runtime_seconds = runtime(spec, c, hw);
  e.reaction_limit_warning = n_im > kReactionLimitIms;
  return e;
}

double speedup(const cost::LogicalCost& c0, const cost::LogicalCost& c1, SpeedupMode mode, const HardwareParams& hw) {
  const double m0 = double(c0.memory_qubits), m1 = double(c1.memory_qubits);
  if (!(m0 > 0.0) || !(c1.av_blocks > 0.0)) throw DomainError("speedup needs positive memory and volume");
  if (m1 > 2.0 * m0) throw InfeasibleError("second computation leaves negative workspace");
  if (mode == SpeedupMode::fixed_qubits) return (2.0 - m1 / m0) * m0 * double(c0.t_count) / c1.av_blocks;
  const auto bl = estimate_baseline(c0, hw);
  const double matched = ims_required_exact(bl.logical_qubits, bl.code_distance, hw);
  const auto av = estimate_active_volume(c1, matched, hw);
  return bl.runtime_seconds / av.runtime_seconds;
}

std::vector<double> speedup_decomposition(const std::vector<cost::LogicalCost>& stages, double m0) {
  if (stages.empty()) throw DomainError("need at least one stage");
  if (stages.size() == 1) return {1.0};
  std::vector<double> per_cycle;
  per_cycle.push_back(double(stages.front().t_count));
  for (std::size_t i = 1; i < stages.size(); ++i) {
    const double w = 2.0 * m0 - double(stages[i].memory_qubits);
    if (!(w > 0.0)) throw InfeasibleError("stage memory leaves no workspace");
    per_cycle.push_back(stages[i].av_blocks / w);
  }
  std::vector<double> f;
  for (std::size_t i = 1; i < per_cycle.size(); ++i) f.push_back(per_cycle[i - 1] / per_cycle[i]);
  return f;
}

ImSizing min_ims_for_runtime(const cost::LogicalCost& c, const HardwareParams& hw, double target_seconds,
                             std::int64_t max_ims) {
  hw.validate();
  if (!(target_seconds > 0.0)) throw DomainError("target runtime must be positive");
  const double m = double(c.memory_qubits);
  // below this count even d = 3 leaves no workspace
  std::int64_t n_im = std::max<std::int64_t>(1, std::int64_t(ims_required_exact(m + 1.0, kMinDistance, hw)));
  for (; n_im <= max_ims; ++n_im) {
    int d = 0;
    try {
      d = min_distance(ArchKind::active_volume, c, hw, m, double(n_im));
    } catch (const InfeasibleError&) {
      continue;
    }
    const double t = runtime_av_from_ims(c.av_blocks, m, double(n_im), d, hw);
    if (t <= target_seconds) return {n_im, d, t, target_seconds};
  }
  throw InfeasibleError("runtime target not reachable within the IM limit");
}

std::string format_hms(double seconds) {
  if (!(seconds >= 0.0) || !std::isfinite(seconds)) throw DomainError("runtime must be finite and non-negative");
  const auto s = std::int64_t(std::ceil(seconds));
  char buf[64];
  std::snprintf(buf, sizeof buf, "%lld:%02lld:%02lld", static_cast<long long>(s / 3600),
                static_cast<long long>((s / 60) % 60), static_cast<long long>(s % 60));
  return buf;
}

}  // namespace blissthc::arch
