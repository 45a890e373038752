#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "kacpoly/experiment.hpp"

namespace kacpoly {

/// Parses `key = value` lines; `#` starts a comment. Keys: scheme, dist,
/// degrees, regions, trials, workers, method, kacrice, quad_tol, moments,
/// label, ratio_band, growth_band, z_sigma, flat_tolerance,
/// max_failure_rate. Lists are comma separated; bands are "lo,hi" and
/// ratio_band also accepts "none". The seed is not a config key.
/// Throws std::invalid_argument naming the line.
ExperimentConfig parse_experiment_config(std::string_view text);
ExperimentConfig load_experiment_config(const std::filesystem::path& path);

/// Inverse of the parser, seed and workers excluded.
std::string to_config_text(const ExperimentConfig& config);

}  // namespace kacpoly
