// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO
//
// JSON pipeline configuration. Scenario keys live at the top level; the
// amplitude model, impairments, filter and metrics options are nested blocks.
// Unknown keys are rejected so that typos do not silently fall back to defaults.

#pragma once

#include <filesystem>
#include <string>

#include "ddtrack/channel_sim.hpp"
#include "ddtrack/metrics.hpp"
#include "ddtrack/scenario.hpp"
#include "ddtrack/tracker.hpp"

namespace ddtrack {

struct PipelineConfig {
  ScenarioConfig scenario;
  AmplitudeModel amplitude;
  double snr_db = 15.0;  // per subcarrier
  ImpairmentSchedule impairments;
  FilterConfig filter;
  ConvergenceOptions metrics;
  std::size_t runs = 1;
  std::filesystem::path output_dir = "ddtrack_out";

  void validate() const;
};

/// Throws ConfigError naming the offending key.
PipelineConfig parse_pipeline_config(const std::string& json_text);

/// Relative `output_dir` values are resolved against the config file's directory.
PipelineConfig load_pipeline_config(const std::filesystem::path& path);

}  // namespace ddtrack
