#pragma once

#include <string>
#include <vector>

#include "cli/config.hpp"
#include "cvwit/states.hpp"

namespace cvwit::cli {

/// Runs `witness`, `scan`, `shots` or `m0` and returns the rendered output.
/// Throws cvwit::Error (or a subclass) on any validation or numerical failure.
[[nodiscard]] std::string run_command(const std::string& command, const RunConfig& config);

/// State family described by the config keys.
[[nodiscard]] StateFamily family_from_config(const RunConfig& config);

/// Evenly spaced axis values, endpoints included.
[[nodiscard]] std::vector<double> axis_values(const Json& axis);

/// Sets a scan parameter on a config; besides numeric keys this accepts
/// ref_amp (gamma = delta = x), ref_product (gamma delta = x) and eta (eta1 = eta2 = x).
void apply_scan_param(RunConfig& config, const std::string& param, double value);

}  // namespace cvwit::cli
