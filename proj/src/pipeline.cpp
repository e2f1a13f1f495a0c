// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include "ddtrack/pipeline.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace ddtrack {

namespace {

constexpr double kTimeTolerance = 1e-9;

std::string run_tag(std::size_t r) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "run%03zu", r);
  return buf;
}

template <typename Row>
std::vector<StepRecord> pair_with_truth(std::span<const Row> rows, const GroundTruthTrack& truth,
                                        auto&& planar_trace) {
  std::vector<StepRecord> records;
  records.reserve(rows.size());
  for (const Row& row : rows) {
    if (row.step < 0 || static_cast<std::size_t>(row.step) >= truth.size())
      throw InvalidInputError("estimate step " + std::to_string(row.step) +
                              " is outside the ground truth (" + std::to_string(truth.size()) +
                              " steps)");
    const auto k = static_cast<std::size_t>(row.step);
    if (std::abs(row.time_s - truth.times[k]) > kTimeTolerance * std::max(1.0, truth.times[k]))
      throw InvalidInputError("estimate time at step " + std::to_string(row.step) +
                              " does not match the ground truth sample interval");
    StepRecord rec;
    rec.step = row.step;
    rec.time_s = row.time_s;
    rec.error_m = planar_error(row.mean, truth.positions[k]);
    rec.planar_cov_trace = planar_trace(row);
    records.push_back(rec);
  }
  return records;
}

double elapsed_s(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void print_dataset_summary(std::ostream& log, const CsiDataset& data, double snr_db) {
  const CsiMeta& m = data.meta();
  log << "M=" << m.anchor_count() << " N_f=" << m.subcarrier_count << " K=" << m.step_count
      << " duration_s=" << format_double(static_cast<double>(m.step_count) * m.dt_s)
      << " snr_db=" << format_double(snr_db) << '\n';
}

void apply_overrides(FilterConfig& f, std::optional<std::size_t> particles, std::optional<int> threads) {
  if (particles) f.particles = *particles;
  if (threads) f.threads = *threads;
  f.validate();
}

}  // namespace

CsiDataset simulate_dataset(const PipelineConfig& config) {
  const ScenarioConfig& s = config.scenario;
  s.validate();
  const GroundTruthTrack track = generate_trajectory(s.trajectory, s.dt_s, s.v_max_mps);
  const AnchorSet anchors = build_anchor_set(s.anchors, s.seed);
  config.impairments.validate(anchors.size(), track.size());
  return synthesize_csi(s, track, anchors, config.amplitude, config.impairments, config.snr_db, s.seed);
}

std::vector<StepRecord> step_records(std::span<const EstimateRow> estimates,
                                     const GroundTruthTrack& truth) {
  return pair_with_truth(estimates, truth, [](const EstimateRow& r) { return r.planar_cov_trace; });
}

std::vector<StepRecord> step_records(std::span<const TrackEstimate> estimates,
                                     const GroundTruthTrack& truth) {
  return pair_with_truth(estimates, truth,
                         [](const TrackEstimate& e) { return e.planar_cov_trace(); });
}

std::vector<EstimateRow> to_rows(std::span<const TrackEstimate> estimates) {
  std::vector<EstimateRow> rows;
  rows.reserve(estimates.size());
  for (const TrackEstimate& e : estimates) {
    rows.push_back({e.step, e.time_s, e.mean, e.planar_cov_trace(), e.ess, e.log_normalizer});
  }
  return rows;
}

EvaluationSummary summarize(std::span<const RunMetrics> runs, std::span<const char> diverged) {
  EvaluationSummary s;
  s.runs = runs.size();
  for (char d : diverged) s.diverged_runs += d ? 1 : 0;
  std::vector<double> pooled;
  for (const RunMetrics& run : runs) {
    s.convergence.push_back(run.convergence);
    if (run.converged()) ++s.converged_runs;
    if (run.post_convergence_errors.empty()) {
      s.run_rmse_m.push_back(std::numeric_limits<double>::quiet_NaN());
      continue;
    }
    double sq = 0.0;
    for (double e : run.post_convergence_errors) sq += e * e;
    s.run_rmse_m.push_back(std::sqrt(sq / static_cast<double>(run.post_convergence_errors.size())));
    pooled.insert(pooled.end(), run.post_convergence_errors.begin(), run.post_convergence_errors.end());
  }
  s.post_convergence_steps = pooled.size();
  if (!pooled.empty()) {
    s.rmse_m = pooled_rmse(runs);
    double abs_sum = 0.0;
    for (double e : pooled) abs_sum += e;
    s.mean_abs_error_m = abs_sum / static_cast<double>(pooled.size());
    s.median_m = quantile(pooled, 0.5);
    s.p90_m = quantile(pooled, 0.9);
    s.p95_m = quantile(pooled, 0.95);
  }
  return s;
}

void write_summary(std::ostream& out, const EvaluationSummary& s, const ConvergenceOptions& options) {
  out << "# ddtrack-summary v1\n";
  out << "convergence_mode=" << (options.mode == ConvergenceMode::covariance ? "covariance" : "fixed")
      << '\n';
  if (options.mode == ConvergenceMode::covariance) {
    out << "convergence_threshold_m=" << format_double(options.threshold_m) << '\n';
    out << "convergence_hold_steps=" << options.hold_steps << '\n';
  } else {
    out << "convergence_skip_s=" << format_double(options.skip_s) << '\n';
  }
  out << "runs=" << s.runs << '\n';
  out << "converged_runs=" << s.converged_runs << '\n';
  out << "diverged_runs=" << s.diverged_runs << '\n';
  out << "post_convergence_steps=" << s.post_convergence_steps << '\n';
  out << "rmse_m=" << format_double(s.rmse_m) << '\n';
  out << "mean_abs_error_m=" << format_double(s.mean_abs_error_m) << '\n';
  out << "median_error_m=" << format_double(s.median_m) << '\n';
  out << "p90_error_m=" << format_double(s.p90_m) << '\n';
  out << "p95_error_m=" << format_double(s.p95_m) << '\n';
  for (std::size_t r = 0; r < s.convergence.size(); ++r) {
    out << run_tag(r) << ".k_conv=" << (s.convergence[r] ? std::to_string(*s.convergence[r]) : "none")
        << '\n';
    out << run_tag(r) << ".rmse_m=" << format_double(s.run_rmse_m[r]) << '\n';
  }
}

void cmd_simulate(const SimulateArgs& args, std::ostream& log) {
  PipelineConfig cfg = load_pipeline_config(args.config);
  if (args.seed) cfg.scenario.seed = *args.seed;
  const CsiDataset data = simulate_dataset(cfg);
  save_csi1(args.out, data);
  if (!args.quiet) print_dataset_summary(log, data, cfg.snr_db);
}

void cmd_track(const TrackArgs& args, std::ostream& log) {
  PipelineConfig cfg = load_pipeline_config(args.config);
  if (args.seed) cfg.filter.seed = *args.seed;
  apply_overrides(cfg.filter, args.particles, args.threads);
  const CsiDataset data = load_csi1(args.csi);
  data.validate();
  const auto start = std::chrono::steady_clock::now();
  ProgressCallback progress;
  if (!args.quiet) {
    progress = [&log, every = std::size_t{0}](const TrackEstimate& e) mutable {
      if (++every % 100 == 0)
        log << "k=" << e.step << " x=" << format_double(e.mean[0]) << " y=" << format_double(e.mean[1])
            << " ess=" << format_double(e.ess) << '\n';
    };
  }
  const std::vector<TrackEstimate> estimates = run_filter(data, cfg.filter, progress);
  write_file_atomically(args.out, [&](std::ostream& out) { write_estimates_csv(out, estimates); });
  if (!args.quiet)
    log << "steps=" << estimates.size() << " particles=" << cfg.filter.particles
        << " elapsed_s=" << format_double(elapsed_s(start)) << '\n';
}

EvaluationSummary cmd_evaluate(const EvaluateArgs& args, std::ostream& log) {
  if (args.estimates.empty()) throw ConfigError("evaluate needs at least one estimates CSV");
  ConvergenceOptions options;
  if (args.config) options = load_pipeline_config(*args.config).metrics;

  GroundTruthTrack truth;
  if (args.truth) {
    truth = load_truth_csv(*args.truth);
  } else if (args.csi) {
    CsiDataset data = load_csi1(*args.csi);
    if (!data.ground_truth)
      throw InvalidInputError("'" + args.csi->string() + "' carries no ground truth; metrics need it");
    truth = std::move(*data.ground_truth);
  } else {
    throw ConfigError("evaluate needs ground truth: pass --truth or a CSI file with embedded truth");
  }

  std::filesystem::create_directories(args.out);
  std::vector<RunMetrics> runs;
  for (std::size_t r = 0; r < args.estimates.size(); ++r) {
    const auto rows = load_estimates_csv(args.estimates[r]);
    runs.push_back(evaluate_run(step_records(rows, truth), options));
    write_file_atomically(args.out / ("errors_" + run_tag(r) + ".csv"),
                          [&](std::ostream& out) { write_errors_csv(out, runs.back()); });
  }
  const EvaluationSummary summary = summarize(runs);
  std::vector<double> pooled;
  for (const RunMetrics& run : runs)
    pooled.insert(pooled.end(), run.post_convergence_errors.begin(), run.post_convergence_errors.end());
  if (!pooled.empty()) {
    const auto cdf = error_cdf(pooled);
    write_file_atomically(args.out / "cdf.csv", [&](std::ostream& out) { write_cdf_csv(out, cdf); });
  }
  write_file_atomically(args.out / "summary.txt",
                        [&](std::ostream& out) { write_summary(out, summary, options); });
  if (!args.quiet) write_summary(log, summary, options);
  return summary;
}

EvaluationSummary cmd_e2e(const E2eArgs& args, std::ostream& log) {
  PipelineConfig cfg = load_pipeline_config(args.config);
  if (args.seed) {
    cfg.scenario.seed = *args.seed;
    cfg.filter.seed = *args.seed;
  }
  if (args.runs) cfg.runs = *args.runs;
  if (cfg.runs < 1) throw ConfigError("'runs' must be at least 1");
  apply_overrides(cfg.filter, args.particles, args.threads);
  const std::filesystem::path dir = args.out ? *args.out : cfg.output_dir;
  std::filesystem::create_directories(dir);

  std::vector<RunMetrics> runs;
  std::vector<char> diverged;
  std::optional<DivergenceError> first_divergence;
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    const auto start = std::chrono::steady_clock::now();
    PipelineConfig run_cfg = cfg;
    run_cfg.scenario.seed = cfg.scenario.seed + r;
    run_cfg.filter.seed = cfg.filter.seed + r;
    const CsiDataset data = simulate_dataset(run_cfg);
    const std::string tag = run_tag(r);
    if (args.keep_csi) save_csi1(dir / ("csi_" + tag + ".csi1"), data);
    write_file_atomically(dir / ("truth_" + tag + ".csv"),
                          [&](std::ostream& out) { write_truth_csv(out, *data.ground_truth); });

    std::vector<TrackEstimate> estimates;
    runs.emplace_back();
    diverged.push_back(1);
    try {
      estimates = run_filter(data, run_cfg.filter);
    } catch (const DivergenceError& e) {
      if (!first_divergence) first_divergence = e;
      if (!args.quiet) log << tag << " diverged at step " << e.step() << ": " << e.what() << '\n';
      continue;
    } catch (const DegeneracyError& e) {
      if (!first_divergence) first_divergence = DivergenceError(e.what(), e.step());
      if (!args.quiet) log << tag << " degenerate at step " << e.step() << ": " << e.what() << '\n';
      continue;
    }
    write_file_atomically(dir / ("estimates_" + tag + ".csv"),
                          [&](std::ostream& out) { write_estimates_csv(out, estimates); });
    diverged.back() = 0;
    runs.back() = evaluate_run(step_records(estimates, *data.ground_truth), cfg.metrics);
    write_file_atomically(dir / ("errors_" + tag + ".csv"),
                          [&](std::ostream& out) { write_errors_csv(out, runs.back()); });
    if (!args.quiet) {
      const RunMetrics& m = runs.back();
      log << tag << " converged="
          << (m.convergence ? "k" + std::to_string(*m.convergence) : std::string("no"));
      if (!m.post_convergence_errors.empty())
        log << " rmse_m=" << format_double(rmse_after_convergence(m.records, *m.convergence));
      log << " elapsed_s=" << format_double(elapsed_s(start)) << '\n';
    }
  }

  const EvaluationSummary summary = summarize(runs, diverged);
  std::vector<double> pooled;
  for (const RunMetrics& run : runs)
    pooled.insert(pooled.end(), run.post_convergence_errors.begin(), run.post_convergence_errors.end());
  if (!pooled.empty()) {
    const auto cdf = error_cdf(pooled);
    write_file_atomically(dir / "cdf.csv", [&](std::ostream& out) { write_cdf_csv(out, cdf); });
  }
  write_file_atomically(dir / "summary.txt",
                        [&](std::ostream& out) { write_summary(out, summary, cfg.metrics); });
  if (!args.quiet) write_summary(log, summary, cfg.metrics);
  if (first_divergence) throw *first_divergence;
  return summary;
}

}  // namespace ddtrack
