#pragma once

#include <string>

#include <nlohmann/json.hpp>

namespace kgm {

// Reads a TOML (flat subset: key = value, strings, numbers, booleans and
// arrays) or JSON config file, by extension.
nlohmann::json parse_config_file(const std::string& path);

// Runs the experiment described by `config` and writes its artifacts under
// out_dir. Config problems throw ArgumentError; per-task failures are
// recorded in the returned manifest (and written to out_dir/manifest.json).
nlohmann::json run_experiment(const nlohmann::json& config, const std::string& out_dir);

// kinds: sweep, thresholds, gradients, correlations, heatmap.
// Writes one or more SVG files derived from out_path (per-group suffixes).
void plot_csv(const std::string& kind, const std::string& csv_path,
              const std::string& out_path);

}  // namespace kgm
