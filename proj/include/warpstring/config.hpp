#pragma once

#include <string>
#include <vector>

#include "warpstring/census.hpp"
#include "warpstring/geometry.hpp"

namespace warpstring {

/// Batch run configuration, read from a JSON file. Numeric fields left out
/// fall back to the documented defaults; zeros in solver tolerances mean
/// "derive from n and the fiber length".
struct RunConfig {
  std::string profile_text;
  bool is_family = false;

  FiberModel fiber = FiberModel::circle(2.0 * 3.14159265358979323846);
  HomotopyClass cls{1};
  Window window;
  CensusOptions census;
  int membership_grid_n = 0;
  int uniform_k = 2;

  std::vector<double> family_samples;

  std::string out_format = "json";  // json | csv
  std::string out_path;             // empty -> stdout
};

/// Parse and validate a config document. Throws ConfigError on malformed
/// JSON, missing keys, or out-of-range values.
RunConfig parse_config(const std::string& json_text);

RunConfig load_config_file(const std::string& path);

}  // namespace warpstring
