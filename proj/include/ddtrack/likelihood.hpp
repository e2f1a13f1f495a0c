// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO
//
// Profile (amplitude-concentrated) likelihood of a window of CSI snapshots
// under the rank-one delay-Doppler channel model, and the normalized
// matched-filter (Bartlett) score used during filter burn-in.

#pragma once

#include <span>
#include <vector>

#include <Eigen/Core>

#include "ddtrack/channel_sim.hpp"
#include "ddtrack/common.hpp"

namespace ddtrack {

/// Which instant of the window the delay/Doppler geometry is evaluated at.
/// `window_end` evaluates at the hypothesized position p_k itself;
/// `window_center` first moves p_k back along the hypothesized velocity to the
/// mean sample time of the window.
enum class GeometryReference { window_end, window_center };

struct WindowOptions {
  std::size_t length = 200;           // N_t, snapshots ending at step k
  std::size_t time_stride = 1;        // keep every s-th snapshot, newest included
  std::size_t subcarrier_stride = 1;  // keep every s-th subcarrier, symmetric about the center
  GeometryReference reference = GeometryReference::window_center;
};

/// Per-anchor N_f x N_t CSI blocks plus the sample times and frequencies they
/// were taken at. Times and frequencies must be uniformly spaced.
class ObservationWindow {
 public:
  ObservationWindow(std::vector<Eigen::MatrixXcd> blocks, std::vector<double> times,
                    std::vector<double> baseband_freqs, double carrier_hz,
                    std::vector<Vec3> anchors,
                    GeometryReference reference = GeometryReference::window_end);

  /// Window of the `options.length` snapshots ending at step `k_end` (0-based).
  static ObservationWindow from_dataset(const CsiDataset& data, std::size_t k_end,
                                        const WindowOptions& options);

  std::size_t anchor_count() const { return anchors_.size(); }
  std::size_t subcarrier_count() const { return freqs_.size(); }
  std::size_t snapshot_count() const { return times_.size(); }

  const Eigen::MatrixXcd& block(std::size_t m) const { return blocks_[m]; }
  const std::vector<double>& times() const { return times_; }
  const std::vector<double>& baseband_freqs() const { return freqs_; }
  double carrier_hz() const { return carrier_hz_; }
  const std::vector<Vec3>& anchors() const { return anchors_; }
  /// ||y_m||^2
  double energy(std::size_t m) const { return energy_[m]; }

  GeometryReference reference() const { return reference_; }
  /// Seconds between the newest sample and the geometry reference instant.
  double reference_lag_s() const { return reference_lag_s_; }

  // Row-major (subcarrier, snapshot) real/imaginary planes of anchor m.
  const double* real_plane(std::size_t m) const { return re_.data() + m * plane_size(); }
  const double* imag_plane(std::size_t m) const { return im_.data() + m * plane_size(); }

 private:
  std::size_t plane_size() const { return freqs_.size() * times_.size(); }

  std::vector<Eigen::MatrixXcd> blocks_;
  std::vector<double> times_;
  std::vector<double> freqs_;
  double carrier_hz_;
  std::vector<Vec3> anchors_;
  GeometryReference reference_;
  double reference_lag_s_ = 0.0;
  std::vector<double> energy_;
  std::vector<double> re_;
  std::vector<double> im_;
};

/// Agent position, planar velocity and channel noise variance.
struct StateHypothesis {
  Vec3 position = Vec3::Zero();
  Eigen::Vector2d velocity = Eigen::Vector2d::Zero();
  double noise_var = 1.0;

  Vec3 velocity3() const { return Vec3(velocity.x(), velocity.y(), 0.0); }
  static StateHypothesis from_vector(const StateVector& x);
  StateVector to_vector() const;
};

struct LikelihoodResult {
  double log_likelihood = 0.0;
  std::vector<double> residuals;    // ||P_perp y_m||^2 per anchor
  std::vector<cdouble> amplitudes;  // concentrated amplitude per anchor
  double bartlett_score = 0.0;
};

/// vec(b c^T) with column stacking: entry (j, n) sits at j + n * N_f.
Eigen::VectorXcd delay_doppler_response(const StateHypothesis& state, const Vec3& anchor_pos,
                                        std::span<const double> baseband_freqs, double carrier_hz,
                                        std::span<const double> times);

/// psi^H y / ||psi||^2, the amplitude maximizing the Gaussian likelihood.
cdouble concentrate_amplitude(const Eigen::VectorXcd& y, const Eigen::VectorXcd& psi);

/// ||y||^2 - |psi^H y|^2 / ||psi||^2, clamped at zero.
double residual_energy(const Eigen::VectorXcd& y, const Eigen::VectorXcd& psi);

/// Natural-log profile likelihood of the window. Throws InvalidInputError for a
/// non-positive noise variance and GeometryError for a state on an anchor.
LikelihoodResult profile_log_likelihood(const ObservationWindow& window,
                                        const StateHypothesis& state);

/// Sum over anchors of |psi_m^H y_m|^2 / (||psi_m||^2 ||y_m||^2), in [0, M].
/// Anchors with an all-zero window are skipped.
double bartlett_score(const ObservationWindow& window, const StateHypothesis& state);

enum class WeightingMode { likelihood, bartlett };

/// Evaluates every state of `states` in parallel. In likelihood mode `out`
/// receives the profile log-likelihood; in Bartlett mode it receives
/// `temperature * bartlett_score`. Invalid states (noise variance <= 0 in
/// likelihood mode, or a position on an anchor) receive -infinity.
void evaluate_states(const ObservationWindow& window, std::span<const StateVector> states,
                     WeightingMode mode, double temperature, std::span<double> out);

}  // namespace ddtrack
