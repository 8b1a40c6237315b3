#include "commands.hpp"

#include <blissthc/errors.hpp>
#include <blissthc/hash.hpp>

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

namespace {

namespace fs = std::filesystem;
using namespace blissthc;

// Exit codes. Stable; documented in README.
constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitIo = 3;
constexpr int kExitVerification = 4;

int exit_code(ErrorKind k) {
  switch (k) {
    case ErrorKind::input: return kExitInput;
    case ErrorKind::numerical: return kExitNumerical;
    case ErrorKind::io: return kExitIo;
    case ErrorKind::verification: return kExitVerification;
  }
  return kExitNumerical;
}

struct Options {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string calibration;
  std::string preset;
};

std::pair<cost::CostTable, std::string> load_calibration(const std::string& flag) {
  if (!flag.empty()) return {cost::CostTable::load(flag), flag};
  if (const char* env = std::getenv("BLISSTHC_CALIBRATION"); env && *env) return {cost::CostTable::load(env), env};
  for (const char* p : {BLISSTHC_SOURCE_CALIBRATION, BLISSTHC_INSTALLED_CALIBRATION})
    if (fs::exists(p)) return {cost::CostTable::load(p), p};
  return {cost::CostTable{}, "built-in"};
}

cli::Context make_context(const Options& o) {
  cli::Context ctx;
  ctx.config = o.config.empty() ? cli::RunConfig::from_json(nlohmann::json::object(), fs::current_path())
                                : cli::RunConfig::load(o.config);
  if (o.seed) ctx.config.seed = *o.seed;
  if (!o.out.empty()) ctx.config.out = o.out;
  if (!o.preset.empty()) ctx.config.preset = o.preset;
  std::tie(ctx.table, ctx.calibration_source) = load_calibration(o.calibration);
  return ctx;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BLISS-THC factorization, block-encoding verification and resource estimation"};
  app.set_version_flag("--version", std::string(blissthc::version()));
  app.require_subcommand(1);

  Options opts;
  const std::map<std::string, std::pair<std::string, std::function<int(const cli::Context&)>>> commands = {
      {"factorize", {"Fit a (BLISS-)THC factorization, optionally over a rank list", cli::cmd_factorize}},
      {"quantize", {"Round a factorization to aleph/beth bit precision", cli::cmd_quantize}},
      {"verify", {"Check the block-encoding identity on the full Fock space (n_spatial <= 4)", cli::cmd_verify}},
      {"cost", {"Logical Toffoli / Active Volume / memory cost of one circuit", cli::cmd_cost}},
      {"estimate", {"Physical runtimes, IM sizing and speedups", cli::cmd_estimate}},
      {"sweep", {"Batching, precision, rank or rho sweep", cli::cmd_sweep}},
      {"report", {"Validate manifests in --out and summarize them", cli::cmd_report}},
  };
  std::function<int(const cli::Context&)> selected;
  for (const auto& [name, entry] : commands) {
    auto* sub = app.add_subcommand(name, entry.first);
    sub->add_option("--config", opts.config, "JSON run configuration")->check(CLI::ExistingFile);
    sub->add_option("--seed", opts.seed, "RNG seed (overrides the config)");
    sub->add_option("--out", opts.out, "Output directory (overrides the config)");
    sub->add_option("--calibration", opts.calibration, "Cost table JSON (default: $BLISSTHC_CALIBRATION)");
    if (name == "cost" || name == "estimate" || name == "sweep")
      sub->add_option("--preset", opts.preset, "Published parameter preset (p450, femoco)");
    sub->callback([&selected, fn = entry.second] { selected = fn; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitInput;
  }

  try {
    return selected(make_context(opts));
  } catch (const blissthc::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: malformed JSON input: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  }
}
