#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "cwb/newton.hpp"
#include "cwb/smalldiv.hpp"

namespace cwb {

/// Full run configuration, sourced from a flat key = value file. Unknown keys
/// are rejected; every value is validated against the module preconditions
/// before any compute starts.
struct RunConfig {
  NewtonSettings newton;

  DiophantineSpec dio;
  bool prefilter = true;

  long long sweep_samples = 0;
  long long filter_samples = 1000;
  bool rm_enable = false;
  int rm_M = 2;
  double rm_tau = 0.0;  // default b + 2
  int rm_grid_exponent = 6;

  uint64_t seed = 0;
  bool seed_set = false;
  int workers = 1;
  bool dump_operator = false;
};

/// Parses `key = value` lines; '#' starts a comment; duplicate keys rejected.
std::map<std::string, std::string> parse_config_text(const std::string& text);
std::map<std::string, std::string> parse_config_file(const std::string& path);

/// Builds and validates a RunConfig. Throws ConfigError with the offending
/// field path on any violation.
RunConfig make_run_config(const std::map<std::string, std::string>& kv);

}  // namespace cwb
