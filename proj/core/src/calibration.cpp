#include "blissthc/calibration.hpp"

#include "blissthc/errors.hpp"
#include "blissthc/hash.hpp"

#include <cmath>
#include <fstream>
#include <utility>
#include <vector>

namespace blissthc::cost {

namespace {

std::vector<std::pair<const char*, double CostTable::*>> fields() {
  return {{"elbow", &CostTable::elbow},
          {"right_elbow", &CostTable::right_elbow},
          {"loader_bit", &CostTable::loader_bit},
          {"adder_clifford_per_bit", &CostTable::adder_clifford_per_bit},
          {"givens_clifford", &CostTable::givens_clifford},
          {"controlled_swap", &CostTable::controlled_swap},
          {"comparator_bit", &CostTable::comparator_bit},
          {"unload_item", &CostTable::unload_item},
          {"hadamard_bundle", &CostTable::hadamard_bundle},
          {"qpe_control", &CostTable::qpe_control}};
}

}  // namespace

void CostTable::validate() const {
  for (const auto& [key, member] : fields()) {
    const double v = this->*member;
    if (!std::isfinite(v) || v < 0.0) throw DomainError(std::string("cost table entry '") + key + "' must be >= 0");
  }
}

nlohmann::json CostTable::to_json() const {
  nlohmann::json entries = nlohmann::json::object();
  for (const auto& [key, member] : fields()) entries[key] = this->*member;
  return {{"schema", "blissthc.cost_table"}, {"version", version}, {"name", name}, {"entries", entries}};
}

CostTable CostTable::from_json(const nlohmann::json& j) {
  try {
    if (j.at("schema").get<std::string>() != "blissthc.cost_table") throw SchemaError("wrong schema tag");
    CostTable t;
    t.version = j.at("version").get<int>();
    if (t.version != 1) throw SchemaError("unsupported cost table version");
    t.name = j.at("name").get<std::string>();
    const auto& e = j.at("entries");
    for (const auto& [key, member] : fields()) {
      const auto& v = e.at(key);
      // entries are either bare numbers or {"value": x, "doc": "..."}
      t.*member = v.is_object() ? v.at("value").get<double>() : v.get<double>();
    }
    t.validate();
    return t;
  } catch (const nlohmann::json::exception& ex) {
    throw SchemaError(std::string("cost table: ") + ex.what());
  }
}

CostTable CostTable::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open calibration file " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError(std::string("calibration file is not valid JSON: ") + e.what());
  }
  return from_json(j);
}

std::string CostTable::hash() const { return sha256_hex(to_json().dump()); }

}  // namespace blissthc::cost
