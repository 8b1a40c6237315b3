#pragma once

#include "run_config.hpp"

#include <blissthc/calibration.hpp>

#include <string>

namespace blissthc::cli {

struct Context {
  RunConfig config;
  cost::CostTable table;
  std::string calibration_source;  // file path or "built-in"
};

// Each command writes its artifacts plus manifest_<name>.json under config.out and returns
// the process exit code. Failures are thrown as blissthc::Error.
int cmd_factorize(const Context& ctx);
int cmd_quantize(const Context& ctx);
int cmd_verify(const Context& ctx);
int cmd_cost(const Context& ctx);
int cmd_estimate(const Context& ctx);
int cmd_sweep(const Context& ctx);
int cmd_report(const Context& ctx);

}  // namespace blissthc::cli
