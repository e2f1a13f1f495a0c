// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO
//
// Exit codes: 0 success, 1 I/O or other failure, 2 configuration or usage
// error, 3 malformed input file, 4 filter divergence.

#include <iostream>

#include <CLI11.hpp>

#include "ddtrack/pipeline.hpp"

namespace {

enum ExitCode { kOk = 0, kFailure = 1, kConfig = 2, kFormat = 3, kDivergence = 4 };

}  // namespace

int main(int argc, char** argv) {
  using namespace ddtrack;

  CLI::App app{"Delay-Doppler direct positioning: CSI simulation and particle-filter tracking"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "ddtrack 1.0");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Synthesize a CSI1 dataset with embedded ground truth");
  simulate->add_option("--config", sim.config, "Pipeline config (JSON)")->required();
  simulate->add_option("--out", sim.out, "Output CSI1 file")->required();
  simulate->add_option("--seed", sim.seed, "Scenario seed (anchor phases, noise)");
  simulate->add_flag("--quiet", sim.quiet, "Suppress the dataset summary");

  TrackArgs trk;
  auto* track = app.add_subcommand("track", "Run the particle filter on a CSI1 dataset");
  track->add_option("--csi", trk.csi, "Input CSI1 file")->required();
  track->add_option("--config", trk.config, "Pipeline config (JSON)")->required();
  track->add_option("--out", trk.out, "Output estimates CSV")->required();
  track->add_option("--seed", trk.seed, "Filter seed");
  track->add_option("--particles", trk.particles, "Number of particles")->check(CLI::PositiveNumber);
  track->add_option("--threads", trk.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  track->add_flag("--quiet", trk.quiet, "Suppress progress output");

  EvaluateArgs ev;
  std::string csi_path, truth_path, eval_config;
  auto* evaluate = app.add_subcommand("evaluate", "Compute metrics of estimate CSVs against ground truth");
  evaluate->add_option("--estimates", ev.estimates, "Estimates CSV (one per run)")->required();
  evaluate->add_option("--csi", csi_path, "CSI1 file with embedded ground truth");
  evaluate->add_option("--truth", truth_path, "Ground-truth CSV");
  evaluate->add_option("--config", eval_config, "Pipeline config (metrics block is used)");
  evaluate->add_option("--out", ev.out, "Output directory")->required();
  evaluate->add_flag("--quiet", ev.quiet, "Suppress the printed summary");

  E2eArgs e2e;
  std::string e2e_out;
  auto* end_to_end = app.add_subcommand("e2e", "Simulate, track and evaluate Monte-Carlo runs");
  end_to_end->add_option("--config", e2e.config, "Pipeline config (JSON)")->required();
  end_to_end->add_option("--out", e2e_out, "Output directory (default: config output_dir)");
  end_to_end->add_option("--seed", e2e.seed, "Base seed; run r uses base + r");
  end_to_end->add_option("--runs", e2e.runs, "Monte-Carlo runs")->check(CLI::PositiveNumber);
  end_to_end->add_option("--particles", e2e.particles, "Number of particles")->check(CLI::PositiveNumber);
  end_to_end->add_option("--threads", e2e.threads, "Worker threads (0: all cores)")->check(CLI::NonNegativeNumber);
  end_to_end->add_flag("--keep-csi", e2e.keep_csi, "Also write each run's CSI1 dataset");
  end_to_end->add_flag("--quiet", e2e.quiet, "Suppress progress output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*simulate) {
      cmd_simulate(sim, std::cerr);
    } else if (*track) {
      cmd_track(trk, std::cerr);
    } else if (*evaluate) {
      if (!csi_path.empty()) ev.csi = csi_path;
      if (!truth_path.empty()) ev.truth = truth_path;
      if (!eval_config.empty()) ev.config = eval_config;
      cmd_evaluate(ev, std::cout);
    } else if (*end_to_end) {
      if (!e2e_out.empty()) e2e.out = e2e_out;
      cmd_e2e(e2e, std::cerr);
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const FormatError& e) {
    std::cerr << "format error: " << e.what() << '\n';
    return kFormat;
  } catch (const DivergenceError& e) {
    std::cerr << "filter diverged at step " << e.step() << ": " << e.what() << '\n';
    return kDivergence;
  } catch (const DegeneracyError& e) {
    std::cerr << "filter degenerated at step " << e.step() << ": " << e.what() << '\n';
    return kDivergence;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailure;
  }
  return kOk;
}
