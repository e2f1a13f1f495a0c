// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ddtrack/common.hpp"
#include "ddtrack/scenario.hpp"

namespace ddtrack {

/// Centered baseband grid: f_j = (j - (n - 1) / 2) * spacing.
std::vector<double> baseband_frequencies(int count, double spacing_hz);

/// exp(-i 2pi |p_a - p| / c * f_j) for every baseband frequency.
Eigen::VectorXcd delay_response(const Vec3& anchor_pos, const Vec3& agent_pos,
                                std::span<const double> baseband_freqs);

/// exp(+i 2pi f_c / c * v_r * t_n) for every sample time.
Eigen::VectorXcd doppler_response(const Vec3& anchor_pos, const Vec3& agent_pos,
                                  const Vec3& agent_vel, double carrier_hz,
                                  std::span<const double> times);

/// Rank-one channel block alpha * b * c^T (N_f x N_t).
Eigen::MatrixXcd noise_free_block(const Vec3& anchor_pos, const Vec3& agent_pos,
                                  const Vec3& agent_vel, cdouble amplitude,
                                  std::span<const double> baseband_freqs, double carrier_hz,
                                  std::span<const double> times);

enum class PathLoss { unit, free_space };

struct AmplitudeModel {
  PathLoss mode = PathLoss::free_space;
  /// |alpha| for unit mode; |alpha| at 1 m for free-space mode (|alpha| ~ 1/d).
  double reference_amplitude = 1.0;
  bool carrier_phase = true;
};

/// Anchor `anchor` is attenuated over steps k_start..k_end (inclusive, 0-based).
struct Blockage {
  std::size_t anchor = 0;
  std::int64_t k_start = 0;
  std::int64_t k_end = 0;
  double attenuation_db = 0.0;
};

/// Point scatterer adding the specular path agent -> scatterer -> anchor.
struct Scatterer {
  Vec3 position = Vec3::Zero();
  cdouble gain{0.0, 0.0};
};

struct ImpairmentSchedule {
  std::vector<Blockage> blockages;
  std::vector<Scatterer> scatterers;

  void validate(std::size_t anchor_count, std::size_t step_count) const;
  /// Linear amplitude factor applied to the direct path of (k, m).
  double direct_path_gain(std::size_t k, std::size_t m) const;
  bool blocked(std::size_t k, std::size_t m) const;
};

struct CsiMeta {
  double carrier_hz = 0.0;
  double dt_s = 0.0;
  double freq0_hz = 0.0;
  double freq_spacing_hz = 0.0;
  std::uint32_t subcarrier_count = 0;
  std::uint64_t step_count = 0;
  std::vector<Vec3> anchors;

  std::size_t anchor_count() const { return anchors.size(); }
  std::vector<double> baseband_freqs() const;
  double time(std::size_t k) const { return static_cast<double>(k) * dt_s; }
};

/// Time-indexed per-anchor CSI snapshots, stored as complex64 in k-major, then
/// anchor, then subcarrier order (the layout of the CSI1 file body).
class CsiDataset {
 public:
  CsiDataset() = default;
  explicit CsiDataset(CsiMeta meta);

  const CsiMeta& meta() const { return meta_; }
  CsiMeta& meta() { return meta_; }

  std::span<const cfloat> snapshot(std::size_t k, std::size_t m) const;
  std::span<cfloat> snapshot(std::size_t k, std::size_t m);
  std::span<const cfloat> samples() const { return samples_; }
  std::span<cfloat> samples() { return samples_; }

  std::optional<GroundTruthTrack> ground_truth;
  /// Configured noise variance (not persisted).
  double noise_variance = 0.0;

  /// Throws FormatError on non-finite samples or inconsistent shapes.
  void validate() const;

 private:
  CsiMeta meta_;
  std::vector<cfloat> samples_;
};

/// Computes the double-precision snapshots that `synthesize_csi` stores.
class CsiSynthesizer {
 public:
  CsiSynthesizer(const ScenarioConfig& scenario, const GroundTruthTrack& track,
                 const AnchorSet& anchors, const AmplitudeModel& amplitude,
                 const ImpairmentSchedule& impairments, double snr_db_per_subcarrier,
                 std::uint64_t seed);

  /// Direct-path complex amplitude of (k, m) including blockage.
  cdouble amplitude(std::size_t k, std::size_t m) const;
  Eigen::VectorXcd noise_free(std::size_t k, std::size_t m) const;
  Eigen::VectorXcd snapshot(std::size_t k, std::size_t m) const;
  double noise_variance() const { return noise_var_; }
  const std::vector<double>& baseband_freqs() const { return freqs_; }

 private:
  double path_magnitude(double distance) const;

  double carrier_hz_;
  std::vector<double> freqs_;
  GroundTruthTrack track_;
  AnchorSet anchors_;
  AmplitudeModel amplitude_;
  ImpairmentSchedule impairments_;
  std::uint64_t seed_;
  double noise_var_ = 0.0;
};

CsiDataset synthesize_csi(const ScenarioConfig& scenario, const GroundTruthTrack& track,
                          const AnchorSet& anchors, const AmplitudeModel& amplitude,
                          const ImpairmentSchedule& impairments, double snr_db_per_subcarrier,
                          std::uint64_t seed);

}  // namespace ddtrack
