// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include "ddtrack/tracker.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <omp.h>

namespace ddtrack {

double BurnIn::temperature_at(std::size_t update) const {
  if (final_temperature <= 0.0 || steps <= 1) return temperature;
  const double frac = static_cast<double>(std::min(update, steps - 1)) /
                      static_cast<double>(steps - 1);
  return temperature * std::pow(final_temperature / temperature, frac);
}

void FilterConfig::validate() const {
  if (particles < 2) throw ConfigError("filter particles must be >= 2");
  for (int c = 0; c < kStateDim; ++c) {
    if (!std::isfinite(init_min[c]) || !std::isfinite(init_max[c]) || init_min[c] > init_max[c])
      throw ConfigError("filter init bounds must be finite with x_min <= x_max");
  }
  if (noise_var_log_uniform && !(init_min[5] > 0.0))
    throw ConfigError("log-uniform noise variance initialization needs a positive lower bound");
  const ProcessNoise& q = process_noise;
  if (!(q.position_m >= 0.0) || !(q.height_m >= 0.0) || !(q.velocity_mps >= 0.0) ||
      !(q.noise_var >= 0.0))
    throw ConfigError("process noise standard deviations must be >= 0");
  if (bandwidth_mode == BandwidthMode::fixed && !(fixed_bandwidth >= 0.0))
    throw ConfigError("fixed kernel bandwidth must be >= 0");
  if (burn_in.steps > 0 && !(burn_in.temperature > 0.0))
    throw ConfigError("burn-in temperature must be > 0");
  if (update_stride < 1) throw ConfigError("update_stride must be >= 1");
  if (window.length < 1 || window.time_stride < 1 || window.subcarrier_stride < 1)
    throw ConfigError("window length and strides must be >= 1");
  if (!(ess_threshold > 0.0 && ess_threshold <= 1.0))
    throw ConfigError("ess_threshold must be in (0, 1]");
  if (!(noise_var_floor > 0.0)) throw ConfigError("noise_var_floor must be > 0");
}

double ParticleEnsemble::effective_sample_size() const {
  double sum2 = 0.0;
  for (double lw : log_weights) {
    const double w = std::exp(lw);
    sum2 += w * w;
  }
  return sum2 > 0.0 ? 1.0 / sum2 : 0.0;
}

TransitionModel TransitionModel::constant_velocity(double dt_s, const ProcessNoise& noise) {
  TransitionModel t;
  t.phi(0, 3) = dt_s;
  t.phi(1, 4) = dt_s;
  t.noise_std << noise.position_m, noise.position_m, noise.height_m, noise.velocity_mps,
      noise.velocity_mps, noise.noise_var;
  return t;
}

ParticleEnsemble init_ensemble(const FilterConfig& config, std::uint64_t seed, Stage stage,
                               std::uint64_t counter) {
  config.validate();
  const std::size_t n = config.particles;
  ParticleEnsemble e;
  e.states.resize(n);
  e.log_weights.assign(n, -std::log(static_cast<double>(n)));
  const double log_lo = config.noise_var_log_uniform ? std::log(config.init_min[5]) : 0.0;
  const double log_hi = config.noise_var_log_uniform ? std::log(config.init_max[5]) : 0.0;

#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(n); ++i) {
    Stream rng(seed, stage, counter, static_cast<std::uint64_t>(i));
    StateVector& x = e.states[static_cast<std::size_t>(i)];
    for (int c = 0; c < kStateDim; ++c) {
      const double lo = config.init_min[c];
      const double hi = config.init_max[c];
      const double u = rng.uniform();
      if (lo == hi)
        x[c] = lo;
      else if (c == 5 && config.noise_var_log_uniform)
        x[c] = std::exp(log_lo + u * (log_hi - log_lo));
      else
        x[c] = lo + u * (hi - lo);
    }
  }
  return e;
}

namespace {

double reflect_at_floor(double value, double floor) {
  return value < floor ? 2.0 * floor - value : value;
}

double log_sum_exp(std::span<const double> v) {
  double top = -std::numeric_limits<double>::infinity();
  for (double x : v) top = std::max(top, x);
  if (!std::isfinite(top)) return top;
  double sum = 0.0;
  for (double x : v) sum += std::exp(x - top);
  return top + std::log(sum);
}

}  // namespace

void predict(ParticleEnsemble& ensemble, const TransitionModel& transition, std::uint64_t seed,
             std::int64_t step, std::size_t substeps, double noise_var_floor) {
  const auto n = static_cast<std::int64_t>(ensemble.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    Stream rng(seed, Stage::predict, static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(i));
    StateVector& x = ensemble.states[static_cast<std::size_t>(i)];
    for (std::size_t s = 0; s < substeps; ++s) {
      StateVector w;
      for (int c = 0; c < kStateDim; ++c) w[c] = transition.noise_std[c] * rng.normal();
      x = (transition.phi * x + w).eval();
      x[5] = reflect_at_floor(x[5], noise_var_floor);
    }
  }
  ensemble.step = step;
}

double reweight(ParticleEnsemble& ensemble, std::span<const double> increments) {
  if (increments.size() != ensemble.size())
    throw InvalidInputError("one log-likelihood increment per particle required");
  std::vector<double>& lw = ensemble.log_weights;
  for (std::size_t i = 0; i < lw.size(); ++i) {
    const double inc = increments[i];
    lw[i] = std::isnan(inc) ? -std::numeric_limits<double>::infinity() : lw[i] + inc;
  }
  const double log_c = log_sum_exp(lw);
  if (!std::isfinite(log_c))
    throw DivergenceError("all particle weights vanished", ensemble.step);
  for (double& x : lw) x -= log_c;
  return log_c;
}

std::pair<StateVector, StateMatrix> mmse_estimate(const ParticleEnsemble& ensemble) {
  StateVector mean = StateVector::Zero();
  std::vector<double> w(ensemble.size());
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    w[i] = std::exp(ensemble.log_weights[i]);
    mean += w[i] * ensemble.states[i];
  }
  StateMatrix cov = StateMatrix::Zero();
  for (std::size_t i = 0; i < ensemble.size(); ++i) {
    if (w[i] == 0.0) continue;
    const StateVector d = ensemble.states[i] - mean;
    cov.noalias() += w[i] * d * d.transpose();
  }
  cov = (0.5 * (cov + cov.transpose())).eval();
  return {mean, cov};
}

std::vector<std::size_t> systematic_offspring(std::span<const double> weights, double u) {
  const std::size_t n = weights.size();
  if (n == 0) return {};
  if (!(u >= 0.0 && u < 1.0)) throw InvalidInputError("systematic resampling offset must be in [0, 1)");
  double total = 0.0;
  for (double w : weights) total += w;
  if (!(total > 0.0)) throw InvalidInputError("weights must have a positive sum");

  // cumulative sums scaled to [0, N]; thresholds are u + j. Sums within a few
  // ulps of an integer are compared as that integer, so integer expected
  // counts give exact offspring counts for every u.
  const double scale = static_cast<double>(n) / total;
  const auto snapped = [](double c) {
    const double r = std::round(c);
    return std::abs(c - r) <= 64 * std::numeric_limits<double>::epsilon() * std::max(1.0, r) ? r : c;
  };
  std::vector<std::size_t> parents(n);
  double cumulative = weights[0] * scale;
  std::size_t i = 0;
  for (std::size_t j = 0; j < n; ++j) {
    const double threshold = u + static_cast<double>(j);
    while (i + 1 < n && snapped(cumulative) <= threshold) {
      ++i;
      cumulative += weights[i] * scale;
    }
    parents[j] = i;
  }
  return parents;
}

std::vector<std::size_t> systematic_resample(ParticleEnsemble& ensemble, Stream& rng) {
  std::vector<double> w(ensemble.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = std::exp(ensemble.log_weights[i]);
  std::vector<std::size_t> parents = systematic_offspring(w, rng.uniform());
  std::vector<StateVector> next(parents.size());
  for (std::size_t j = 0; j < parents.size(); ++j) next[j] = ensemble.states[parents[j]];
  ensemble.states = std::move(next);
  std::fill(ensemble.log_weights.begin(), ensemble.log_weights.end(),
            -std::log(static_cast<double>(ensemble.size())));
  return parents;
}

double optimal_bandwidth(int dimension, std::size_t particles) {
  const double d = dimension;
  const double a = std::pow(4.0 / (d + 2.0), 1.0 / (d + 4.0));
  return a * std::pow(static_cast<double>(particles), -1.0 / (d + 4.0));
}

StateMatrix regularization_factor(const StateMatrix& covariance, std::int64_t step) {
  if (!covariance.allFinite())
    throw DegeneracyError("posterior covariance is not finite", step);
  if (covariance.isZero(0.0)) return StateMatrix::Zero();
  const double scale = covariance.diagonal().mean();
  for (double lambda : {0.0, 1e-12, 1e-9, 1e-6}) {
    Eigen::LLT<StateMatrix> llt(covariance + lambda * scale * StateMatrix::Identity());
    if (llt.info() == Eigen::Success) return llt.matrixL();
  }
  // symmetric square root V sqrt(max(lambda, 0)); covers matrices whose
  // entries underflow the Cholesky pivots
  Eigen::SelfAdjointEigenSolver<StateMatrix> eig(covariance);
  if (eig.info() != Eigen::Success)
    throw DegeneracyError("posterior covariance could not be factorized", step);
  const StateVector root = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return eig.eigenvectors() * root.asDiagonal();
}

void regularize(ParticleEnsemble& ensemble, const StateMatrix& factor, double bandwidth,
                std::uint64_t seed, std::int64_t step, double noise_var_floor) {
  if (bandwidth == 0.0) return;
  const StateMatrix scaled = bandwidth * factor;
  const auto n = static_cast<std::int64_t>(ensemble.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    Stream rng(seed, Stage::regularize, static_cast<std::uint64_t>(step), static_cast<std::uint64_t>(i));
    StateVector eps;
    for (int c = 0; c < kStateDim; ++c) eps[c] = rng.normal();
    StateVector& x = ensemble.states[static_cast<std::size_t>(i)];
    x += scaled * eps;
    x[5] = reflect_at_floor(x[5], noise_var_floor);
  }
}

RegularizedParticleFilter::RegularizedParticleFilter(FilterConfig config, double dt_s)
    : config_(std::move(config)),
      transition_(TransitionModel::constant_velocity(dt_s, config_.process_noise)) {
  config_.validate();
  if (!(dt_s > 0.0)) throw ConfigError("dt_s must be positive");
  ensemble_ = init_ensemble(config_, config_.seed);
  bandwidth_ = config_.bandwidth_mode == BandwidthMode::optimal
                   ? optimal_bandwidth(kStateDim, config_.particles)
                   : config_.fixed_bandwidth;
}

TrackEstimate RegularizedParticleFilter::update(std::int64_t k, double time_s,
                                                std::size_t substeps, const WeightFunction& weigh,
                                                bool burn_in) {
  const std::uint64_t seed = config_.seed;
  predict(ensemble_, transition_, seed, k, substeps, config_.noise_var_floor);

  std::vector<double> increments(ensemble_.size());
  weigh(ensemble_.states, increments);
  double log_c = 0.0;
  try {
    log_c = reweight(ensemble_, increments);
  } catch (const DivergenceError&) {
    if (config_.on_divergence != DivergencePolicy::reinitialize)
      throw DivergenceError("all particle weights vanished at step " + std::to_string(k), k);
    ensemble_ = init_ensemble(config_, seed, Stage::reinit, static_cast<std::uint64_t>(k));
    ensemble_.step = k;
    weigh(ensemble_.states, increments);
    try {
      log_c = reweight(ensemble_, increments);
    } catch (const DivergenceError&) {
      throw DivergenceError("all particle weights vanished at step " + std::to_string(k) +
                                " after re-initialization",
                            k);
    }
  }

  TrackEstimate est;
  est.step = k;
  est.time_s = time_s;
  std::tie(est.mean, est.covariance) = mmse_estimate(ensemble_);
  est.ess = ensemble_.effective_sample_size();
  est.log_normalizer = log_c;
  est.burn_in = burn_in;

  const bool resample = config_.resampling == ResamplingMode::every_step ||
                        est.ess < config_.ess_threshold * static_cast<double>(ensemble_.size());
  if (resample) {
    Stream rng(seed, Stage::resample, static_cast<std::uint64_t>(k));
    systematic_resample(ensemble_, rng);
    if (bandwidth_ > 0.0) {
      const StateMatrix factor = regularization_factor(est.covariance, k);
      regularize(ensemble_, factor, bandwidth_, seed, k, config_.noise_var_floor);
    }
  }
  return est;
}

std::vector<TrackEstimate> run_filter(const CsiDataset& dataset, const FilterConfig& config,
                                      const ProgressCallback& progress) {
  config.validate();
  const CsiMeta& meta = dataset.meta();
  const std::size_t window = config.window.length;
  if (meta.step_count < window)
    throw ConfigError("dataset has " + std::to_string(meta.step_count) +
                      " snapshots, fewer than the window length " + std::to_string(window));
  if (config.threads > 0) omp_set_num_threads(config.threads);

  RegularizedParticleFilter filter(config, meta.dt_s);
  std::vector<TrackEstimate> out;
  const std::size_t first = window - 1;
  std::size_t update = 0;
  for (std::size_t k = first; k < meta.step_count; k += config.update_stride, ++update) {
    const ObservationWindow obs = ObservationWindow::from_dataset(dataset, k, config.window);
    const bool burn = update < config.burn_in.steps;
    const WeightingMode mode = burn ? WeightingMode::bartlett : WeightingMode::likelihood;
    const double temperature = burn ? config.burn_in.temperature_at(update) : 1.0;
    const WeightFunction weigh = [&](std::span<const StateVector> states, std::span<double> inc) {
      evaluate_states(obs, states, mode, temperature, inc);
    };
    const std::size_t substeps = k == first ? 1 : config.update_stride;
    out.push_back(filter.update(static_cast<std::int64_t>(k), meta.time(k), substeps, weigh, burn));
    if (progress) progress(out.back());
  }
  return out;
}

}  // namespace ddtrack
