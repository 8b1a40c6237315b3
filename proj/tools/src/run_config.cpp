#include "run_config.hpp"

#include <blissthc/errors.hpp>

#include <algorithm>
#include <fstream>

namespace blissthc::cli {

namespace {

std::filesystem::path resolve(const std::filesystem::path& p, const std::filesystem::path& base) {
  if (p.empty() || p.is_absolute()) return p;
  return base / p;
}

const std::vector<std::string>& known_keys() {
  static const std::vector<std::string> keys = {
      "input",      "factorization", "quantized",      "out",     "ranks",    "rho",         "rhos",
      "max_iterations", "gradient_tolerance", "optimize_shift", "aleph", "beth",   "alephs",      "beths",
      "preset",     "circuit",       "batch_sizes",    "hardware", "targets", "target_delay_m", "error_budget",
      "verify",     "sweep",         "seed"};
  return keys;
}

}  // namespace

RunConfig RunConfig::from_json(const nlohmann::json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw SchemaError("config must be a JSON object");
  for (const auto& [key, _] : j.items())
    if (std::find(known_keys().begin(), known_keys().end(), key) == known_keys().end())
      throw SchemaError("unknown config key '" + key + "'");
  try {
    RunConfig c;
    if (j.contains("input")) c.input = resolve(j["input"].get<std::string>(), base);
    if (j.contains("out")) c.out = resolve(j["out"].get<std::string>(), base);
    if (j.contains("factorization")) c.factorization = resolve(j["factorization"].get<std::string>(), base);
    if (j.contains("quantized")) c.quantized = resolve(j["quantized"].get<std::string>(), base);
    c.ranks = j.value("ranks", c.ranks);
    c.rho = j.value("rho", c.rho);
    c.rhos = j.value("rhos", c.rhos);
    c.max_iterations = j.value("max_iterations", c.max_iterations);
    c.gradient_tolerance = j.value("gradient_tolerance", c.gradient_tolerance);
    c.optimize_shift = j.value("optimize_shift", c.optimize_shift);
    c.aleph = j.value("aleph", c.aleph);
    c.beth = j.value("beth", c.beth);
    c.alephs = j.value("alephs", c.alephs);
    c.beths = j.value("beths", c.beths);
    if (j.contains("preset")) c.preset = j["preset"].get<std::string>();
    if (j.contains("circuit")) {
      c.circuit = j["circuit"];
      if (!c.circuit.is_object()) throw SchemaError("'circuit' must be an object");
    }
    if (j.contains("batch_sizes"))
      for (const auto& r : j["batch_sizes"]) {
        if (r.is_string() && r == "all")
          c.batch_sizes.emplace_back(std::nullopt);
        else
          c.batch_sizes.emplace_back(r.get<std::size_t>());
      }
    if (j.contains("hardware")) {
      c.hardware.emplace();
      for (const auto& h : j["hardware"]) c.hardware->push_back(arch::hardware_from_json(h));
    }
    if (j.contains("targets"))
      for (const auto& t : j["targets"]) c.targets.push_back({t.at("alpha").get<double>(), t.at("hours").get<double>()});
    c.target_delay_m = j.value("target_delay_m", c.target_delay_m);
    if (j.contains("error_budget")) {
      const auto& b = j["error_budget"];
      c.budget = quant::ErrorBudget::from_total(b.value("epsilon_total", c.budget.epsilon_total),
                                                b.value("epsilon_pea", c.budget.epsilon_pea));
    }
    if (j.contains("verify")) {
      const auto& v = j["verify"];
      c.verify.tolerance = v.value("tolerance", c.verify.tolerance);
      c.verify.source = v.value("source", c.verify.source);
      c.verify.random_n = v.value("n_spatial", c.verify.random_n);
      c.verify.random_M = v.value("M", c.verify.random_M);
      c.verify.one_body_only = v.value("one_body_only", c.verify.one_body_only);
      if (v.contains("corrupt")) {
        const auto& k = v["corrupt"];
        c.verify.corrupt = blockenc::SlotPerturbation{k.value("row", std::size_t(0)), k.value("col", std::size_t(0)),
                                                      k.value("delta", 1e-3)};
      }
      if (c.verify.source != "factorization" && c.verify.source != "quantized" && c.verify.source != "random")
        throw SchemaError("verify.source must be factorization, quantized or random");
    }
    c.sweep = j.value("sweep", c.sweep);
    c.seed = j.value("seed", c.seed);
    c.budget.validate();
    return c;
  } catch (const nlohmann::json::exception& e) {
    throw SchemaError(std::string("config: ") + e.what());
  }
}

RunConfig RunConfig::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw SchemaError("config " + path.string() + " is not valid JSON: " + e.what());
  }
  return from_json(j, path.parent_path());
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j;
  j["input"] = input.string();
  j["factorization"] = factorization.string();
  j["quantized"] = quantized.string();
  j["out"] = out.string();
  j["ranks"] = ranks;
  j["rho"] = rho;
  j["rhos"] = rhos;
  j["max_iterations"] = max_iterations;
  j["gradient_tolerance"] = gradient_tolerance;
  j["optimize_shift"] = optimize_shift;
  j["aleph"] = aleph;
  j["beth"] = beth;
  j["alephs"] = alephs;
  j["beths"] = beths;
  j["preset"] = preset ? nlohmann::json(*preset) : nlohmann::json(nullptr);
  j["circuit"] = circuit;
  auto rs = nlohmann::json::array();
  for (const auto& r : batch_sizes) rs.push_back(r ? nlohmann::json(*r) : nlohmann::json("all"));
  j["batch_sizes"] = rs;
  if (hardware) {
    auto hw = nlohmann::json::array();
    for (const auto& h : *hardware) hw.push_back(arch::to_json(h));
    j["hardware"] = hw;
  }
  auto ts = nlohmann::json::array();
  for (const auto& t : targets) ts.push_back({{"alpha", t.alpha}, {"hours", t.hours}});
  j["targets"] = ts;
  j["target_delay_m"] = target_delay_m;
  j["error_budget"] = {{"epsilon_total", budget.epsilon_total}, {"epsilon_pea", budget.epsilon_pea},
                       {"epsilon_thc", budget.epsilon_thc}};
  nlohmann::json v = {{"tolerance", verify.tolerance},
                      {"source", verify.source},
                      {"n_spatial", verify.random_n},
                      {"M", verify.random_M},
                      {"one_body_only", verify.one_body_only}};
  if (verify.corrupt) v["corrupt"] = {{"row", verify.corrupt->row}, {"col", verify.corrupt->col}, {"delta", verify.corrupt->delta}};
  j["verify"] = v;
  j["sweep"] = sweep;
  j["seed"] = seed;
  return j;
}

}  // namespace blissthc::cli
