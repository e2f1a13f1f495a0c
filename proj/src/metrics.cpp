// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include "ddtrack/metrics.hpp"

#include <algorithm>
#include <cmath>

namespace ddtrack {

double planar_error(const StateVector& estimate, const Vec3& truth_position) {
  return std::hypot(estimate[0] - truth_position.x(), estimate[1] - truth_position.y());
}

std::optional<std::int64_t> detect_convergence(std::span<const StepRecord> records,
                                               double threshold_m, std::size_t hold_steps) {
  const std::size_t hold = std::max<std::size_t>(hold_steps, 1);
  std::size_t run = 0;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const double spread = std::sqrt(std::max(0.0, records[i].planar_cov_trace));
    run = spread < threshold_m ? run + 1 : 0;
    if (run == hold) return records[i + 1 - hold].step;
  }
  // runs shorter than the hold window converge only if they never exceed it
  if (run > 0 && run == records.size()) return records.front().step;
  return std::nullopt;
}

std::optional<std::int64_t> convergence_step(std::span<const StepRecord> records,
                                             const ConvergenceOptions& options) {
  if (options.mode == ConvergenceMode::covariance)
    return detect_convergence(records, options.threshold_m, options.hold_steps);
  for (const StepRecord& r : records) {
    if (r.time_s >= options.skip_s) return r.step;
  }
  return std::nullopt;
}

double rmse_after_convergence(std::span<const StepRecord> records, std::int64_t k_conv) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const StepRecord& r : records) {
    if (r.step < k_conv) continue;
    sum += r.error_m * r.error_m;
    ++count;
  }
  if (count == 0) throw InvalidInputError("no post-convergence steps; RMSE undefined");
  return std::sqrt(sum / static_cast<double>(count));
}

RunMetrics evaluate_run(std::vector<StepRecord> records, const ConvergenceOptions& options) {
  RunMetrics run;
  run.records = std::move(records);
  run.convergence = convergence_step(run.records, options);
  if (run.convergence) {
    for (const StepRecord& r : run.records) {
      if (r.step >= *run.convergence) run.post_convergence_errors.push_back(r.error_m);
    }
  }
  return run;
}

double pooled_rmse(std::span<const RunMetrics> runs) {
  double sum = 0.0;
  std::size_t count = 0;
  for (const RunMetrics& run : runs) {
    for (double e : run.post_convergence_errors) {
      sum += e * e;
      ++count;
    }
  }
  if (count == 0) throw InvalidInputError("no post-convergence steps in any run; RMSE undefined");
  return std::sqrt(sum / static_cast<double>(count));
}

std::vector<std::pair<double, double>> error_cdf(std::span<const double> errors) {
  if (errors.empty()) throw InvalidInputError("error CDF needs at least one sample");
  std::vector<double> sorted(errors.begin(), errors.end());
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<std::pair<double, double>> cdf;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    if (i + 1 < sorted.size() && sorted[i + 1] == sorted[i]) continue;
    cdf.emplace_back(sorted[i], static_cast<double>(i + 1) / n);
  }
  return cdf;
}

double cdf_at(std::span<const std::pair<double, double>> cdf, double x) {
  auto it = std::upper_bound(cdf.begin(), cdf.end(), x,
                             [](double v, const std::pair<double, double>& p) { return v < p.first; });
  return it == cdf.begin() ? 0.0 : std::prev(it)->second;
}

double quantile(std::span<const double> values, double q) {
  if (values.empty()) throw InvalidInputError("quantile of an empty sample");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double pos = std::clamp(q, 0.0, 1.0) * static_cast<double>(sorted.size() - 1);
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

}  // namespace ddtrack
