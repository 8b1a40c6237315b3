#include "commands.hpp"

#include "artifacts.hpp"

#include <blissthc/arch.hpp>
#include <blissthc/blockenc.hpp>
#include <blissthc/errors.hpp>
#include <blissthc/factorizer.hpp>
#include <blissthc/fcidump.hpp>
#include <blissthc/hash.hpp>
#include <blissthc/logical_cost.hpp>
#include <blissthc/presets.hpp>
#include <blissthc/quantizer.hpp>

#include <algorithm>
#include <cmath>
#include <iostream>
#include <sstream>

namespace blissthc::cli {

namespace fs = std::filesystem;
using tensor_core::ElectronicHamiltonian;

namespace {

Error missing(const std::string& what) { return Error(ErrorKind::input, what); }

std::string num(double v) {
  std::ostringstream s;
  s.precision(12);
  s << v;
  return s.str();
}

ElectronicHamiltonian load_hamiltonian(const RunConfig& c) {
  if (c.input.empty()) throw missing("config has no 'input' Hamiltonian");
  if (!fs::exists(c.input)) throw missing("input file " + c.input.string() + " does not exist");
  if (c.input.extension() == ".json") return tensor_core::hamiltonian_from_json(read_json(c.input));
  return tensor_core::load_fcidump_file(c.input.string());
}

fs::path factorization_path(const RunConfig& c) {
  return c.factorization.empty() ? c.out / "factorization.json" : c.factorization;
}
fs::path quantized_path(const RunConfig& c) { return c.quantized.empty() ? c.out / "quantized.json" : c.quantized; }

bliss::ThcFactorization load_factorization(const RunConfig& c) {
  const auto p = factorization_path(c);
  if (!fs::exists(p)) throw missing("factorization artifact " + p.string() + " not found; run 'factorize' first");
  return bliss::factorization_from_json(read_json(p));
}

quant::QuantizedEncoding load_quantized(const RunConfig& c) {
  const auto p = quantized_path(c);
  if (!fs::exists(p)) throw missing("quantized artifact " + p.string() + " not found; run 'quantize' first");
  return quant::quantized_from_json(read_json(p));
}

bliss::FactorizationConfig factorization_config(const RunConfig& c) {
  bliss::FactorizationConfig f;
  f.rho = c.rho;
  f.max_iterations = c.max_iterations;
  f.gradient_tolerance = c.gradient_tolerance;
  f.seed = c.seed;
  f.optimize_shift = c.optimize_shift;
  f.validate();
  return f;
}

nlohmann::json recorder_base(const Context& ctx) {
  auto echo = ctx.config.to_json();
  echo["calibration_source"] = ctx.calibration_source;
  return echo;
}

std::optional<presets::MoleculePreset> preset_of(const RunConfig& c) {
  if (!c.preset) return std::nullopt;
  return presets::by_name(*c.preset);
}

// Published rank/precision/1-norm for a preset, the quantized artifact otherwise, with
// config overrides merged last.
cost::CircuitParams derive_circuit(const RunConfig& c) {
  nlohmann::json base;
  if (const auto p = preset_of(c)) {
    const auto ham = c.circuit.value("hamiltonian", std::string("BLISS-THC"));
    const bool mods = c.circuit.value("select_variant", std::string("modified")) == "modified";
    base = cost::to_json(p->circuit(ham, mods));
  } else if (fs::exists(quantized_path(c))) {
    const auto Q = load_quantized(c);
    base = {{"N", 2 * Q.n_spatial}, {"M", Q.M}, {"aleph", Q.aleph}, {"beth", Q.beth}, {"lambda_thc", Q.lambda_thc}};
  } else if (!c.circuit.contains("M")) {
    throw missing("no circuit source: give a preset, a quantized artifact or a full 'circuit' block");
  }
  base["epsilon_pea"] = c.budget.epsilon_pea;
  for (const auto& [k, v] : c.circuit.items())
    if (k != "hamiltonian") base[k] = v;
  return cost::circuit_params_from_json(base);
}

double circuit_volume(const cost::LogicalCost& c) { return double(c.memory_qubits) * double(c.t_count); }

std::vector<arch::HardwareParams> scenarios(const RunConfig& c, const std::optional<presets::MoleculePreset>& p) {
  if (c.hardware) return *c.hardware;
  std::vector<arch::HardwareParams> out;
  const std::vector<double> alphas = p ? p->alphas : std::vector<double>{0.5, 1.0};
  const std::vector<double> delays = p ? p->delay_lengths_m : std::vector<double>{1.0, 10.0, 100.0, 1000.0};
  for (double a : alphas)
    for (double l : delays) {
      arch::HardwareParams hw;
      hw.alpha = a;
      hw.l_delay_m = l;
      out.push_back(hw);
    }
  return out;
}

std::string table3_header() { return "hamiltonian,circuit_mods,source,toffoli,memory_qubits,circuit_volume,av_blocks\n"; }

std::string table3_row(const std::string& ham, bool mods, const std::string& source, const cost::LogicalCost& c) {
  return ham + ',' + (mods ? "yes" : "no") + ',' + source + ',' + std::to_string(c.toffoli) + ',' +
         std::to_string(c.memory_qubits) + ',' + num(circuit_volume(c)) + ',' + num(c.av_blocks) + '\n';
}

std::string estimate_row(const std::string& algorithm, const arch::HardwareParams& hw, const arch::PhysicalEstimate& e,
                         double ims_shown) {
  return algorithm + ',' + arch::to_string(e.kind) + ',' + num(hw.alpha) + ',' + num(hw.l_delay_m) + ',' +
         std::to_string(e.code_distance) + ',' + num(ims_shown) + ',' + num(e.runtime_seconds) + ',' +
         arch::format_hms(e.runtime_seconds) + ',' + (e.reaction_limit_warning ? "true" : "false") + '\n';
}

// Baseline run and Active Volume run on the same (rounded up) IM count.
std::string table4(const std::string& bl_name, const cost::LogicalCost& bl, const std::string& av_name,
                   const cost::LogicalCost& av, const std::vector<arch::HardwareParams>& hws) {
  std::string csv = "algorithm,architecture,alpha,l_delay_m,code_distance,ims,runtime_s,runtime_hms,reaction_limit_warning\n";
  for (const auto& hw : hws) {
    const auto b = arch::estimate_baseline(bl, hw);
    const double matched = arch::ims_required_exact(b.logical_qubits, b.code_distance, hw);
    const auto a = arch::estimate_active_volume(av, matched, hw);
    const double shown = double(arch::ims_required(b.logical_qubits, b.code_distance, hw));
    csv += estimate_row(bl_name, hw, b, shown);
    csv += estimate_row(av_name, hw, a, shown);
  }
  return csv;
}

struct SizingTarget {
  double alpha;
  double hours;
  std::optional<std::int64_t> published;
};

std::string table5(const cost::LogicalCost& c, double delay_m, const std::vector<SizingTarget>& targets) {
  std::string csv = "alpha,target_hours,l_delay_m,ims,code_distance,runtime_hours,published_ims\n";
  for (const auto& t : targets) {
    arch::HardwareParams hw;
    hw.alpha = t.alpha;
    hw.l_delay_m = delay_m;
    const auto s = arch::min_ims_for_runtime(c, hw, t.hours * 3600.0);
    csv += num(t.alpha) + ',' + num(t.hours) + ',' + num(delay_m) + ',' + std::to_string(s.n_im) + ',' +
           std::to_string(s.code_distance) + ',' + num(s.runtime_seconds / 3600.0) + ',' +
           (t.published ? std::to_string(*t.published) : std::string()) + '\n';
  }
  return csv;
}

std::vector<SizingTarget> config_targets(const RunConfig& c) {
  std::vector<SizingTarget> out;
  for (const auto& t : c.targets) out.push_back({t.alpha, t.hours, std::nullopt});
  return out;
}

}  // namespace

int cmd_factorize(const Context& ctx) {
  const auto& c = ctx.config;
  RunRecorder rec("factorize", c.out, ctx.table.hash());
  const auto H = rec.stage("load", [&] { return load_hamiltonian(c); });
  auto ranks = c.ranks;
  if (ranks.empty()) ranks.push_back(H.n_spatial());
  const auto rows = rec.stage("rank_sweep", [&] { return bliss::rank_sweep(H, ranks, factorization_config(c)); });

  std::string csv = bliss::rank_sweep_csv_header() + "\n";
  nlohmann::json per_rank = nlohmann::json::array();
  for (const auto& r : rows) {
    csv += bliss::rank_sweep_csv_row(r) + "\n";
    auto j = bliss::to_json(r.report);
    j["M"] = r.M;
    per_rank.push_back(j);
    if (rows.size() > 1) rec.write_json("factorization_M" + std::to_string(r.M) + ".json", bliss::to_json(r.factorization));
  }
  rec.write_json("factorization.json", bliss::to_json(rows.back().factorization));
  rec.write_csv("rank_sweep.csv", csv);
  const nlohmann::json report = {{"n_spatial", H.n_spatial()}, {"eta", H.eta()}, {"seed", c.seed},
                                 {"ranks", per_rank}, {"final", bliss::to_json(rows.back().report)}};
  rec.write_json("factorize_report.json", report);
  rec.finish(recorder_base(ctx), {{"M", rows.back().M}, {"l2_error", rows.back().report.l2_error},
                                  {"lambda_thc", rows.back().report.lambda_thc}});
  std::cout << "factorize: M=" << rows.back().M << " l2_error=" << num(rows.back().report.l2_error)
            << " lambda_thc=" << num(rows.back().report.lambda_thc) << "\n";
  return 0;
}

int cmd_quantize(const Context& ctx) {
  const auto& c = ctx.config;
  RunRecorder rec("quantize", c.out, ctx.table.hash());
  const auto H = rec.stage("load", [&] { return load_hamiltonian(c); });
  const auto F = load_factorization(c);
  const auto Q = rec.stage("quantize", [&] { return quant::quantize(H, F, c.aleph, c.beth); });
  rec.write_json("quantized.json", quant::to_json(Q));
  const auto point = quant::precision_grid(H, F, {c.aleph}, {c.beth}).points.front();
  nlohmann::json report = {{"aleph", c.aleph},
                           {"beth", c.beth},
                           {"lambda_thc", Q.lambda_thc},
                           {"offset_x", Q.x},
                           {"deficit", Q.deficit},
                           {"l2_two_body", point.l2_two_body},
                           {"l2_one_body", point.l2_one_body},
                           {"lambda_change", point.lambda_change},
                           {"error", point.error},
                           {"epsilon_thc", c.budget.epsilon_thc},
                           {"within_budget", point.error <= c.budget.epsilon_thc}};
  if (!c.alephs.empty() && !c.beths.empty()) {
    const auto grid = rec.stage("precision_grid", [&] { return quant::precision_grid(H, F, c.alephs, c.beths); });
    rec.write_csv("precision_grid.csv", quant::precision_grid_csv(grid));
  }
  rec.write_json("quantize_report.json", report);
  rec.finish(recorder_base(ctx), report);
  std::cout << "quantize: aleph=" << c.aleph << " beth=" << c.beth << " error=" << num(point.error)
            << " deficit=" << Q.deficit << "\n";
  return 0;
}

int cmd_verify(const Context& ctx) {
  const auto& c = ctx.config;
  RunRecorder rec("verify", c.out, ctx.table.hash());
  const auto inst = rec.stage("instance", [&] {
    if (c.verify.source == "random")
      return blockenc::BlockEncodingInstance::random(c.verify.random_n, c.verify.random_M, c.seed, c.verify.one_body_only);
    if (c.verify.source == "quantized") return blockenc::BlockEncodingInstance::from_quantized(load_quantized(c));
    const auto H = load_hamiltonian(c);
    if (H.n_spatial() > blockenc::kMaxOrbitals)
      throw SizeLimitError("verification builds 4^n matrices and is limited to n_spatial <= 4 (input has " +
                           std::to_string(H.n_spatial()) + "); use a smaller active space or 'verify.source: random'");
    return blockenc::BlockEncodingInstance::from_factorization(H, load_factorization(c));
  });
  const auto r = rec.stage("verify", [&] { return blockenc::verify_block_encoding(inst, c.verify.tolerance, c.verify.corrupt); });
  const auto j = blockenc::to_json(r);
  rec.write_json("residual.json", j);
  rec.finish(recorder_base(ctx), j);
  std::cout << "verify: n_spatial=" << r.n_spatial << " M=" << r.M << " residual=" << num(r.residual)
            << " norm_bound=" << (r.norm_bound_holds ? "ok" : "violated") << "\n";
  if (!r.passed) throw VerificationError("residual " + num(r.residual) + " exceeds tolerance " + num(r.tolerance));
  if (!r.norm_bound_holds) throw VerificationError("operator norm exceeds lambda_thc");
  return 0;
}

int cmd_cost(const Context& ctx) {
  const auto& c = ctx.config;
  RunRecorder rec("cost", c.out, ctx.table.hash());
  const auto params = derive_circuit(c);
  const auto cost = rec.stage("cost", [&] { return cost::cost_algorithm(params, ctx.table); });
  const auto loader = cost::prepare_loader(params, ctx.table);
  nlohmann::json j = {{"circuit", cost::to_json(params)},
                      {"cost", cost::to_json(cost)},
                      {"circuit_volume", circuit_volume(cost)},
                      {"loader", {{"mode", cost::to_string(loader.mode)}, {"k", loader.k}, {"toffoli", loader.toffoli},
                                  {"av_blocks", loader.av_blocks}, {"extra_qubits", loader.extra_qubits}}},
                      {"anchors", {{"angle_register_qubits", cost::angle_register_qubits(params)},
                                   {"unary_conversion_qubits", cost::unary_conversion_qubits(params)},
                                   {"coefficient_accuracy", cost::coefficient_accuracy(params.M, params.N, params.aleph)}}},
                      {"calibration", {{"name", ctx.table.name}, {"version", ctx.table.version},
                                       {"hash", ctx.table.hash()}}}};
  rec.write_json("cost.json", j);
  const bool mods = params.select_variant == cost::SelectVariant::modified;
  rec.write_csv("cost.csv", table3_header() + table3_row(c.circuit.value("hamiltonian", std::string("BLISS-THC")), mods, "model", cost));
  rec.finish(recorder_base(ctx), {{"toffoli", cost.toffoli}, {"av_blocks", cost.av_blocks}, {"memory_qubits", cost.memory_qubits}});
  std::cout << "cost: toffoli=" << cost.toffoli << " av_blocks=" << num(cost.av_blocks)
            << " memory_qubits=" << cost.memory_qubits << "\n";
  return 0;
}

int cmd_estimate(const Context& ctx) {
  const auto& c = ctx.config;
  RunRecorder rec("estimate", c.out, ctx.table.hash());
  const auto preset = preset_of(c);
  const auto hws = scenarios(c, preset);
  if (hws.empty()) std::cerr << "warning: empty hardware scenario list; Table-4 output has no rows\n";
  nlohmann::json speed;

  if (preset) {
    std::string t3 = table3_header();
    for (const auto& row : preset->rows) {
      t3 += table3_row(row.hamiltonian, row.circuit_mods, "published", row.as_cost());
      for (const auto& nc : preset->circuits)
        if (nc.hamiltonian == row.hamiltonian &&
            (nc.params.select_variant == cost::SelectVariant::modified) == row.circuit_mods) {
          auto p = nc.params;
          p.epsilon_pea = c.budget.epsilon_pea;
          t3 += table3_row(row.hamiltonian, row.circuit_mods, "model", cost::cost_algorithm(p, ctx.table));
        }
    }
    rec.write_csv("table3.csv", t3);

    const auto thc = preset->row("THC", false).as_cost();
    const auto bliss_mods = preset->row("BLISS-THC", true).as_cost();
    rec.write_csv("table4.csv", rec.stage("table4", [&] { return table4("THC", thc, "BLISS-THC", bliss_mods, hws); }));

    std::vector<SizingTarget> targets = config_targets(c);
    if (targets.empty())
      for (const auto& t : preset->device_targets) targets.push_back({t.alpha, t.target_hours, t.published_ims});
    auto sized = bliss_mods;
    sized.av_blocks = preset->device_av_blocks;
    rec.write_csv("table5.csv", rec.stage("table5", [&] { return table5(sized, preset->device_delay_m, targets); }));

    speed["preset"] = preset->name;
    speed["fixed_qubits"] = arch::speedup(thc, bliss_mods, arch::SpeedupMode::fixed_qubits);
    nlohmann::json ff = nlohmann::json::array();
    for (double a : preset->alphas) {
      arch::HardwareParams hw;
      hw.alpha = a;
      ff.push_back({{"alpha", a}, {"speedup", arch::speedup(thc, bliss_mods, arch::SpeedupMode::fixed_footprint, hw)}});
    }
    speed["fixed_footprint"] = ff;
    const auto stages = arch::speedup_decomposition(
        {thc, thc, preset->row("BLISS-THC", false).as_cost(), bliss_mods}, double(thc.memory_qubits));
    speed["decomposition"] = {{"av_compilation", stages[0]}, {"bliss_thc", stages[1]}, {"circuit_mods", stages[2]}};
    nlohmann::json totals = nlohmann::json::object();
    for (const auto& row : preset->rows)
      if (!row.circuit_mods && row.hamiltonian != "BLISS-THC")
        totals[row.hamiltonian] = arch::speedup(row.as_cost(), bliss_mods, arch::SpeedupMode::fixed_qubits);
    speed["totals_vs_bliss_thc"] = totals;
  } else {
    const auto params = derive_circuit(c);
    const auto cost = cost::cost_algorithm(params, ctx.table);
    const bool mods = params.select_variant == cost::SelectVariant::modified;
    rec.write_csv("table3.csv", table3_header() + table3_row("input", mods, "model", cost));
    rec.write_csv("table4.csv", rec.stage("table4", [&] { return table4("input", cost, "input", cost, hws); }));
    rec.write_csv("table5.csv", table5(cost, c.target_delay_m, config_targets(c)));
    speed["fixed_qubits"] = arch::speedup(cost, cost, arch::SpeedupMode::fixed_qubits);
  }
  rec.write_json("speedup.json", speed);
  rec.finish(recorder_base(ctx), speed);
  std::cout << "estimate: fixed_qubits speedup=" << num(speed["fixed_qubits"].get<double>()) << "\n";
  return 0;
}

int cmd_sweep(const Context& ctx) {
  const auto& c = ctx.config;
  RunRecorder rec("sweep", c.out, ctx.table.hash());
  nlohmann::json summary = {{"kind", c.sweep}};
  if (c.sweep == "batching") {
    const auto params = derive_circuit(c);
    auto rs = c.batch_sizes;
    if (rs.empty()) {
      rs.emplace_back(std::nullopt);
      const std::size_t G = params.n_spatial() - 1;
      for (std::size_t r = 1; r < G; r *= 2) rs.emplace_back(r);
      rs.emplace_back(G);
    }
    const auto pts = rec.stage("batching", [&] { return cost::batching_tradeoff(params, rs, ctx.table); });
    rec.write_text("tradeoff.csv", cost::tradeoff_csv(pts, std::string(version()), ctx.table.hash()));
    summary["points"] = pts.size();
  } else if (c.sweep == "precision") {
    if (c.alephs.empty() || c.beths.empty()) throw missing("precision sweep needs 'alephs' and 'beths'");
    const auto H = load_hamiltonian(c);
    const auto F = load_factorization(c);
    const auto grid = rec.stage("precision", [&] { return quant::precision_grid(H, F, c.alephs, c.beths); });
    rec.write_csv("precision_grid.csv", quant::precision_grid_csv(grid));
    summary["points"] = grid.points.size();
  } else if (c.sweep == "rank") {
    if (c.ranks.empty()) throw missing("rank sweep needs 'ranks'");
    const auto H = load_hamiltonian(c);
    const auto rows = rec.stage("rank", [&] { return bliss::rank_sweep(H, c.ranks, factorization_config(c)); });
    std::string csv = bliss::rank_sweep_csv_header() + "\n";
    for (const auto& r : rows) csv += bliss::rank_sweep_csv_row(r) + "\n";
    rec.write_csv("rank_sweep.csv", csv);
    summary["points"] = rows.size();
  } else if (c.sweep == "rho") {
    if (c.rhos.empty() || c.ranks.empty()) throw missing("rho sweep needs 'rhos' and a rank in 'ranks'");
    const auto H = load_hamiltonian(c);
    const auto path = rec.stage("rho", [&] {
      return bliss::regularization_path(H, c.ranks.back(), c.rhos, factorization_config(c));
    });
    std::ostringstream csv;
    csv.precision(17);
    csv << "rho,l2_error,lambda_thc,iterations,converged\n";
    for (const auto& p : path)
      csv << p.rho << ',' << p.report.l2_error << ',' << p.report.lambda_thc << ',' << p.report.iterations << ','
          << (p.report.converged ? "true" : "false") << '\n';
    rec.write_csv("rho_path.csv", csv.str());
    summary["points"] = path.size();
  } else {
    throw SchemaError("unknown sweep kind '" + c.sweep + "' (batching, precision, rank, rho)");
  }
  rec.finish(recorder_base(ctx), summary);
  std::cout << "sweep: " << c.sweep << " points=" << summary["points"] << "\n";
  return 0;
}

int cmd_report(const Context& ctx) {
  const auto& out = ctx.config.out;
  if (!fs::is_directory(out)) throw missing("output directory " + out.string() + " does not exist");
  std::vector<fs::path> manifests;
  for (const auto& e : fs::directory_iterator(out)) {
    const auto name = e.path().filename().string();
    if (name.rfind("manifest_", 0) == 0 && e.path().extension() == ".json" && name != "manifest_report.json")
      manifests.push_back(e.path());
  }
  std::sort(manifests.begin(), manifests.end());
  if (manifests.empty()) throw missing("no run manifests in " + out.string());

  nlohmann::json commands = nlohmann::json::object();
  for (const auto& m : manifests) {
    const auto j = read_json(m);
    for (const auto& f : j.at("outputs")) {
      const auto path = out / f.at("file").get<std::string>();
      if (!fs::exists(path)) throw IntegrityError(path.string() + " listed in " + m.filename().string() + " is missing");
      if (sha256_hex(read_text(path)) != f.at("sha256").get<std::string>())
        throw IntegrityError(path.string() + " does not match its manifest digest");
    }
    commands[j.at("command").get<std::string>()] = {{"calibration_hash", j.at("calibration_hash")},
                                                    {"tool_version", j.at("tool_version")},
                                                    {"outputs", j.at("outputs").size()},
                                                    {"summary", j.value("summary", nlohmann::json::object())}};
  }
  RunRecorder rec("report", out, ctx.table.hash());
  const nlohmann::json report = {{"schema", "blissthc.report"}, {"version", 1}, {"commands", commands}};
  rec.write_json("report.json", report);
  rec.finish(recorder_base(ctx));
  for (const auto& [name, entry] : commands.items())
    std::cout << name << ": " << entry["summary"].dump() << "\n";
  return 0;
}

}  // namespace blissthc::cli
