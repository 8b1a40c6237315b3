#pragma once

#include "blissthc/logical_cost.hpp"

#include <optional>
#include <string>
#include <vector>

namespace blissthc::presets {

// One published resource row (Toffolis, memory highwater, circuit volume, Active Volume).
struct PublishedRow {
  std::string hamiltonian;  // "THC", "THC*", "BLISS-THC"
  bool circuit_mods = false;
  double toffoli = 0.0;
  std::int64_t memory_qubits = 0;
  double circuit_volume = 0.0;
  double av_blocks = 0.0;

  // T count taken as four per Toffoli.
  cost::LogicalCost as_cost() const;
};

struct DeviceTarget {
  double alpha = 0.5;
  double target_hours = 1.0;
  std::int64_t published_ims = 0;
  std::optional<double> published_achieved_hours;
};

struct NamedCircuit {
  std::string hamiltonian;
  cost::CircuitParams params;
};

struct MoleculePreset {
  std::string name;
  std::size_t N = 0;
  std::vector<PublishedRow> rows;
  std::vector<NamedCircuit> circuits;  // published rank, precisions and 1-norm per variant
  std::vector<double> delay_lengths_m;        // runtime table columns
  std::vector<double> alphas;
  std::vector<DeviceTarget> device_targets;   // IM sizing at 2 km delay
  double device_delay_m = 2000.0;
  // Active Volume used for IM sizing; see the decisions log for how it was pinned.
  double device_av_blocks = 0.0;

  const PublishedRow& row(const std::string& hamiltonian, bool mods) const;
  const cost::CircuitParams& circuit(const std::string& hamiltonian, bool mods) const;
};

MoleculePreset p450();
MoleculePreset femoco();
std::vector<std::string> names();
MoleculePreset by_name(const std::string& name);

}  // namespace blissthc::presets
