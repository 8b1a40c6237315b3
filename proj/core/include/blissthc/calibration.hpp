#pragma once

#include <nlohmann/json.hpp>

#include <string>

namespace blissthc::cost {

// Logical-block cost of each primitive on an Active Volume architecture. The defaults were
// fitted to the published P450 totals; every entry is documented in data/calibration_v1.json.
struct CostTable {
  std::string name = "calibration_v1";
  int version = 1;
  double elbow = 40.0;                  // Toffoli computed into a fresh target (left elbow)
  double right_elbow = 2.0;             // measurement-based uncompute of an elbow
  double loader_bit = 0.7;              // per data bit written by a QROM/QROAM lookup
  double adder_clifford_per_bit = 14.0; // CNOT/Clifford bundle per bit of a phase-gradient adder
  double givens_clifford = 36.0;        // basis change around one Givens rotation
  double controlled_swap = 200.0;       // controlled swap of one qubit pair, incl. routing
  double comparator_bit = 22.0;         // per bit of an inequality test
  double unload_item = 7.0;             // per item of a measurement-based lookup uncompute
  double hadamard_bundle = 10.0;        // Hadamard layer per qubit of a uniform superposition
  double qpe_control = 100.0;           // control and phase-kickback overhead per walk step

  void validate() const;
  double elbow_pair() const { return elbow + right_elbow; }

  nlohmann::json to_json() const;
  static CostTable from_json(const nlohmann::json& j);
  static CostTable load(const std::string& path);
  // SHA-256 of the canonical JSON serialization.
  std::string hash() const;
};

}  // namespace blissthc::cost
