// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO
//
// Regularized particle filter over the nearly-constant-velocity state
// [x, y, z, v_x, v_y, noise variance]. Weights are kept in the log domain.

#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ddtrack/channel_sim.hpp"
#include "ddtrack/common.hpp"
#include "ddtrack/likelihood.hpp"
#include "ddtrack/rng.hpp"

namespace ddtrack {

struct ProcessNoise {
  double position_m = 0.3e-3;  // sigma_p, per axis in the plane
  double height_m = 0.02;      // sigma_h
  double velocity_mps = 0.03;  // sigma_v
  double noise_var = 0.3;      // sigma_S, same units as the noise variance
};

enum class BandwidthMode { optimal, fixed };
enum class ResamplingMode { every_step, ess_triggered };
enum class DivergencePolicy { abort, reinitialize };

/// Bartlett-score weighting for the first `steps` updates. The temperature is
/// interpolated geometrically from `temperature` to `final_temperature`.
struct BurnIn {
  std::size_t steps = 10;
  double temperature = 1.0;
  double final_temperature = 0.0;  // <= 0: constant temperature

  double temperature_at(std::size_t update) const;
};

struct FilterConfig {
  std::size_t particles = 16000;
  StateVector init_min = (StateVector() << 0.0, 0.0, 0.0, -1.0, -1.0, 1e-6).finished();
  StateVector init_max = (StateVector() << 30.0, 15.0, 2.5, 1.0, 1.0, 1e2).finished();
  bool noise_var_log_uniform = true;
  ProcessNoise process_noise;
  BandwidthMode bandwidth_mode = BandwidthMode::optimal;
  double fixed_bandwidth = 0.0;
  BurnIn burn_in;
  std::size_t update_stride = 1;
  WindowOptions window;
  ResamplingMode resampling = ResamplingMode::every_step;
  double ess_threshold = 0.5;  // fraction of N, ess_triggered mode only
  DivergencePolicy on_divergence = DivergencePolicy::abort;
  double noise_var_floor = 1e-12;
  std::uint64_t seed = 1;
  int threads = 0;  // 0: OpenMP default

  /// Throws ConfigError when the invariants do not hold.
  void validate() const;
};

struct ParticleEnsemble {
  std::vector<StateVector> states;
  std::vector<double> log_weights;
  std::int64_t step = -1;

  std::size_t size() const { return states.size(); }
  /// 1 / sum w^2
  double effective_sample_size() const;
};

struct TransitionModel {
  StateMatrix phi = StateMatrix::Identity();
  StateVector noise_std = StateVector::Zero();

  static TransitionModel constant_velocity(double dt_s, const ProcessNoise& noise);
};

struct TrackEstimate {
  std::int64_t step = 0;
  double time_s = 0.0;
  StateVector mean = StateVector::Zero();
  StateMatrix covariance = StateMatrix::Zero();
  double ess = 0.0;
  double log_normalizer = 0.0;  // log c_k
  bool burn_in = false;

  double planar_cov_trace() const { return covariance(0, 0) + covariance(1, 1); }
};

/// Uniform draws over [init_min, init_max] (log-uniform noise variance when
/// configured); log-weights -ln N.
ParticleEnsemble init_ensemble(const FilterConfig& config, std::uint64_t seed,
                               Stage stage = Stage::init, std::uint64_t counter = 0);

/// Applies x <- Phi x + w `substeps` times. The noise-variance component is
/// reflected at `noise_var_floor`. Weights are unchanged.
void predict(ParticleEnsemble& ensemble, const TransitionModel& transition, std::uint64_t seed,
             std::int64_t step, std::size_t substeps, double noise_var_floor);

/// Adds the log-likelihood increments and renormalizes; returns log c_k.
/// Throws DivergenceError if no particle has positive weight.
double reweight(ParticleEnsemble& ensemble, std::span<const double> increments);

/// Weighted mean and symmetrized weighted covariance.
std::pair<StateVector, StateMatrix> mmse_estimate(const ParticleEnsemble& ensemble);

/// Offspring parent indices of systematic resampling with offset u in [0, 1).
std::vector<std::size_t> systematic_offspring(std::span<const double> weights, double u);

/// Replaces the ensemble by its systematic resample; returns parent indices.
std::vector<std::size_t> systematic_resample(ParticleEnsemble& ensemble, Stream& rng);

/// Gaussian-kernel bandwidth (4 / (d + 2))^(1 / (d + 4)) * N^(-1 / (d + 4)).
double optimal_bandwidth(int dimension, std::size_t particles);

/// Factor L with L L^T = covariance: the lower Cholesky factor, escalating
/// diagonal jitter lambda * mean(diag) for lambda in {1e-12, 1e-9, 1e-6}, and
/// the symmetric eigen square root when every jittered attempt fails. A zero
/// matrix yields a zero factor. Throws DegeneracyError on non-finite input.
StateMatrix regularization_factor(const StateMatrix& covariance, std::int64_t step = -1);

/// x <- x + h L eps with eps ~ N(0, I) per particle.
void regularize(ParticleEnsemble& ensemble, const StateMatrix& factor, double bandwidth,
                std::uint64_t seed, std::int64_t step, double noise_var_floor);

/// Computes per-particle log-weight increments.
using WeightFunction = std::function<void(std::span<const StateVector>, std::span<double>)>;

class RegularizedParticleFilter {
 public:
  RegularizedParticleFilter(FilterConfig config, double dt_s);

  /// One predict / reweight / estimate / resample / regularize cycle at step k.
  /// `substeps` transition steps of dt are applied before weighting.
  TrackEstimate update(std::int64_t k, double time_s, std::size_t substeps,
                       const WeightFunction& weigh, bool burn_in = false);

  const ParticleEnsemble& ensemble() const { return ensemble_; }
  const FilterConfig& config() const { return config_; }

 private:
  FilterConfig config_;
  TransitionModel transition_;
  ParticleEnsemble ensemble_;
  double bandwidth_;
};

/// Progress callback invoked after every processed step.
using ProgressCallback = std::function<void(const TrackEstimate&)>;

/// Runs the filter over the dataset, processing steps N_t - 1, N_t - 1 + s, ...
/// (0-based) with update stride s. Throws DivergenceError with the step index.
std::vector<TrackEstimate> run_filter(const CsiDataset& dataset, const FilterConfig& config,
                                      const ProgressCallback& progress = {});

}  // namespace ddtrack
