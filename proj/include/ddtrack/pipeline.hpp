// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO
//
// The simulate / track / evaluate / e2e commands behind the CLI. Each command
// throws the library's error types; the front end maps them to exit codes.

#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "ddtrack/config.hpp"
#include "ddtrack/io.hpp"
#include "ddtrack/metrics.hpp"

namespace ddtrack {

/// Trajectory, anchors and CSI of one realization, seeded by `scenario.seed`.
CsiDataset simulate_dataset(const PipelineConfig& config);

/// Pairs estimate rows with ground truth by step index. Throws
/// InvalidInputError when a step is outside the truth or its time disagrees.
std::vector<StepRecord> step_records(std::span<const EstimateRow> estimates,
                                     const GroundTruthTrack& truth);
std::vector<StepRecord> step_records(std::span<const TrackEstimate> estimates,
                                     const GroundTruthTrack& truth);

std::vector<EstimateRow> to_rows(std::span<const TrackEstimate> estimates);

struct EvaluationSummary {
  std::size_t runs = 0;
  std::size_t converged_runs = 0;
  std::size_t diverged_runs = 0;
  std::size_t post_convergence_steps = 0;
  double rmse_m = std::numeric_limits<double>::quiet_NaN();  // NaN: undefined
  double mean_abs_error_m = std::numeric_limits<double>::quiet_NaN();
  double median_m = std::numeric_limits<double>::quiet_NaN();
  double p90_m = std::numeric_limits<double>::quiet_NaN();
  double p95_m = std::numeric_limits<double>::quiet_NaN();
  std::vector<std::optional<std::int64_t>> convergence;  // per run
  std::vector<double> run_rmse_m;                        // per run, NaN if not converged
};

/// `diverged` flags runs whose filter aborted; their RunMetrics are empty.
EvaluationSummary summarize(std::span<const RunMetrics> runs, std::span<const char> diverged = {});

/// key=value lines.
void write_summary(std::ostream& out, const EvaluationSummary& summary,
                   const ConvergenceOptions& options);

struct SimulateArgs {
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  bool quiet = false;
};

struct TrackArgs {
  std::filesystem::path csi;
  std::filesystem::path config;
  std::filesystem::path out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> particles;
  std::optional<int> threads;
  bool quiet = false;
};

struct EvaluateArgs {
  std::vector<std::filesystem::path> estimates;
  std::optional<std::filesystem::path> csi;
  std::optional<std::filesystem::path> truth;
  std::optional<std::filesystem::path> config;  // metrics options only
  std::filesystem::path out;                    // output directory
  bool quiet = false;
};

struct E2eArgs {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::optional<std::size_t> particles;
  std::optional<int> threads;
  bool keep_csi = false;
  bool quiet = false;
};

void cmd_simulate(const SimulateArgs& args, std::ostream& log);
void cmd_track(const TrackArgs& args, std::ostream& log);
EvaluationSummary cmd_evaluate(const EvaluateArgs& args, std::ostream& log);
/// Runs every realization; a diverged run is recorded in the summary and the
/// remaining runs continue. Throws DivergenceError after writing all outputs
/// if any run diverged.
EvaluationSummary cmd_e2e(const E2eArgs& args, std::ostream& log);

}  // namespace ddtrack
