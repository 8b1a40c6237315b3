#include "blissthc/presets.hpp"

#include "blissthc/errors.hpp"

#include <cmath>

namespace blissthc::presets {

namespace {

NamedCircuit circuit(const char* ham, std::size_t N, std::size_t M, int aleph, int beth, double lambda, bool mods) {
  cost::CircuitParams p;
  p.N = N;
  p.M = M;
  p.aleph = aleph;
  p.beth = beth;
  p.lambda_thc = lambda;
  p.select_variant = mods ? cost::SelectVariant::modified : cost::SelectVariant::prior_art;
  return {ham, p};
}

}  // namespace

cost::LogicalCost PublishedRow::as_cost() const {
  cost::LogicalCost c;
  c.toffoli = std::llround(toffoli);
  c.t_count = cost::toffoli_to_t(c.toffoli, 0);
  c.av_blocks = av_blocks;
  c.memory_qubits = memory_qubits;
  return c;
}

const PublishedRow& MoleculePreset::row(const std::string& hamiltonian, bool mods) const {
  for (const auto& r : rows)
    if (r.hamiltonian == hamiltonian && r.circuit_mods == mods) return r;
  throw DomainError("preset " + name + " has no row " + hamiltonian);
}

const cost::CircuitParams& MoleculePreset::circuit(const std::string& hamiltonian, bool mods) const {
  const auto variant = mods ? cost::SelectVariant::modified : cost::SelectVariant::prior_art;
  for (const auto& c : circuits)
    if (c.hamiltonian == hamiltonian && c.params.select_variant == variant) return c.params;
  throw DomainError("preset " + name + " has no circuit " + hamiltonian);
}

MoleculePreset p450() {
  MoleculePreset p;
  p.name = "p450";
  p.N = 116;
  p.rows = {{"THC", false, 7.786e9, 1357, 42.264e12, 1.678e12},
            {"THC", true, 7.647e9, 1298, 39.703e12, 1.594e12},
            {"BLISS-THC", false, 1.761e9, 1058, 7.450e12, 0.249e12},
            {"BLISS-THC", true, 1.714e9, 999, 6.848e12, 0.228e12}};
  p.circuits = {circuit("THC", 116, 320, 10, 18, 388.9, false), circuit("THC", 116, 320, 10, 18, 388.9, true),
                circuit("BLISS-THC", 116, 160, 13, 13, 130.9, false), circuit("BLISS-THC", 116, 160, 13, 13, 130.9, true)};
  p.delay_lengths_m = {1.0, 10.0, 100.0, 1000.0};
  p.alphas = {0.5, 1.0};
  p.device_targets = {{0.5, 1.0, 8184, std::nullopt},
                      {1.0, 1.0, 1055, std::nullopt},
                      {0.5, 72.0, 395, std::nullopt},
                      {1.0, 73.0, 88, 54.0}};
  p.device_av_blocks = 2.285e11;
  return p;
}

MoleculePreset femoco() {
  MoleculePreset p;
  p.name = "femoco";
  p.N = 152;
  p.rows = {{"THC", false, 31.767e9, 2163, 274.850e12, 8.762e12},
            {"THC", true, 31.201e9, 2163, 269.951e12, 8.392e12},
            {"THC*", false, 20.671e9, 2163, 178.841e12, 5.701e12},
            {"THC*", true, 20.302e9, 2163, 175.654e12, 5.460e12},
            {"BLISS-THC", false, 4.375e9, 1589, 27.809e12, 0.888e12},
            {"BLISS-THC", true, 4.282e9, 1512, 25.895e12, 0.837e12}};
  p.circuits = {circuit("THC", 152, 450, 10, 18, 1201.5, false), circuit("THC", 152, 450, 10, 18, 1201.5, true),
                circuit("BLISS-THC", 152, 290, 15, 16, 198.9, false), circuit("BLISS-THC", 152, 290, 15, 16, 198.9, true)};
  p.delay_lengths_m = {1.0, 10.0, 100.0, 1000.0};
  p.alphas = {0.5, 1.0};
  p.device_av_blocks = 0.837e12;
  return p;
}

std::vector<std::string> names() { return {"p450", "femoco"}; }

MoleculePreset by_name(const std::string& name) {
  if (name == "p450") return p450();
  if (name == "femoco") return femoco();
  throw DomainError("unknown preset '" + name + "'");
}

}  // namespace blissthc::presets
