// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "ddtrack/common.hpp"

namespace ddtrack {

/// Horizontal distance between the estimated and true positions (height ignored).
double planar_error(const StateVector& estimate, const Vec3& truth_position);

enum class ConvergenceMode { covariance, fixed };

struct ConvergenceOptions {
  ConvergenceMode mode = ConvergenceMode::covariance;
  double threshold_m = 0.5;     // on sqrt(trace of the planar covariance block)
  std::size_t hold_steps = 50;  // consecutive processed steps below threshold
  double skip_s = 2.0;          // fixed mode: discard the first skip_s seconds
};

/// Per processed step of one run.
struct StepRecord {
  std::int64_t step = 0;
  double time_s = 0.0;
  double error_m = 0.0;
  double planar_cov_trace = 0.0;
};

/// First step whose planar posterior spread stays below the threshold for
/// `hold_steps` consecutive records. A run shorter than `hold_steps` converges
/// at its first step only if every record is below the threshold.
std::optional<std::int64_t> detect_convergence(std::span<const StepRecord> records,
                                               double threshold_m, std::size_t hold_steps);

std::optional<std::int64_t> convergence_step(std::span<const StepRecord> records,
                                             const ConvergenceOptions& options);

/// sqrt(mean(e^2)) over records with step >= k_conv. Throws InvalidInputError
/// when no record qualifies.
double rmse_after_convergence(std::span<const StepRecord> records, std::int64_t k_conv);

struct RunMetrics {
  std::vector<StepRecord> records;
  std::optional<std::int64_t> convergence;
  std::vector<double> post_convergence_errors;

  bool converged() const { return convergence.has_value(); }
};

RunMetrics evaluate_run(std::vector<StepRecord> records, const ConvergenceOptions& options);

/// RMSE pooled over the post-convergence steps of every converged run.
/// Throws InvalidInputError when no run contributes a step.
double pooled_rmse(std::span<const RunMetrics> runs);

/// Empirical CDF points (value, fraction of samples <= value), one per
/// distinct value, ascending. Throws InvalidInputError on empty input.
std::vector<std::pair<double, double>> error_cdf(std::span<const double> errors);

/// Evaluates a CDF produced by error_cdf at x.
double cdf_at(std::span<const std::pair<double, double>> cdf, double x);

/// Linear-interpolation quantile, q in [0, 1].
double quantile(std::span<const double> values, double q);

}  // namespace ddtrack
