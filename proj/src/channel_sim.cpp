// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include "ddtrack/channel_sim.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ddtrack/rng.hpp"

namespace ddtrack {

std::vector<double> baseband_frequencies(int count, double spacing_hz) {
  std::vector<double> f(static_cast<std::size_t>(count));
  const double center = 0.5 * (count - 1);
  for (int j = 0; j < count; ++j) f[j] = (j - center) * spacing_hz;
  return f;
}

namespace {

double checked_distance(const Vec3& anchor_pos, const Vec3& agent_pos) {
  const double d = (anchor_pos - agent_pos).norm();
  if (!(d > 0.0)) throw GeometryError("agent position coincides with anchor");
  return d;
}

}  // namespace

Eigen::VectorXcd delay_response(const Vec3& anchor_pos, const Vec3& agent_pos,
                                std::span<const double> baseband_freqs) {
  const double tau = checked_distance(anchor_pos, agent_pos) / kSpeedOfLight;
  Eigen::VectorXcd b(static_cast<Eigen::Index>(baseband_freqs.size()));
  for (std::size_t j = 0; j < baseband_freqs.size(); ++j)
    b[j] = std::polar(1.0, -kTwoPi * tau * baseband_freqs[j]);
  return b;
}

Eigen::VectorXcd doppler_response(const Vec3& anchor_pos, const Vec3& agent_pos,
                                  const Vec3& agent_vel, double carrier_hz,
                                  std::span<const double> times) {
  checked_distance(anchor_pos, agent_pos);
  const double doppler_hz = carrier_hz / kSpeedOfLight * radial_velocity(anchor_pos, agent_pos, agent_vel);
  Eigen::VectorXcd c(static_cast<Eigen::Index>(times.size()));
  for (std::size_t n = 0; n < times.size(); ++n)
    c[n] = std::polar(1.0, kTwoPi * doppler_hz * times[n]);
  return c;
}

Eigen::MatrixXcd noise_free_block(const Vec3& anchor_pos, const Vec3& agent_pos,
                                  const Vec3& agent_vel, cdouble amplitude,
                                  std::span<const double> baseband_freqs, double carrier_hz,
                                  std::span<const double> times) {
  const Eigen::VectorXcd b = delay_response(anchor_pos, agent_pos, baseband_freqs);
  const Eigen::VectorXcd c = doppler_response(anchor_pos, agent_pos, agent_vel, carrier_hz, times);
  return amplitude * b * c.transpose();
}

void ImpairmentSchedule::validate(std::size_t anchor_count, std::size_t step_count) const {
  for (const Blockage& b : blockages) {
    if (b.anchor >= anchor_count)
      throw ConfigError("blockage references anchor " + std::to_string(b.anchor) +
                        " but only " + std::to_string(anchor_count) + " exist");
    if (b.k_start < 0 || b.k_end < b.k_start || b.k_end >= static_cast<std::int64_t>(step_count))
      throw ConfigError("blockage interval [" + std::to_string(b.k_start) + ", " +
                        std::to_string(b.k_end) + "] outside the track");
    if (!(b.attenuation_db >= 0.0)) throw ConfigError("blockage attenuation_db must be >= 0");
  }
  for (const Scatterer& s : scatterers) {
    if (!s.position.allFinite() || !std::isfinite(s.gain.real()) || !std::isfinite(s.gain.imag()))
      throw ConfigError("scatterer position and gain must be finite");
  }
}

double ImpairmentSchedule::direct_path_gain(std::size_t k, std::size_t m) const {
  double db = 0.0;
  for (const Blockage& b : blockages) {
    const auto kk = static_cast<std::int64_t>(k);
    if (b.anchor == m && kk >= b.k_start && kk <= b.k_end) db += b.attenuation_db;
  }
  return db == 0.0 ? 1.0 : std::pow(10.0, -db / 20.0);
}

bool ImpairmentSchedule::blocked(std::size_t k, std::size_t m) const {
  return direct_path_gain(k, m) < 1.0;
}

std::vector<double> CsiMeta::baseband_freqs() const {
  std::vector<double> f(subcarrier_count);
  for (std::uint32_t j = 0; j < subcarrier_count; ++j) f[j] = freq0_hz + j * freq_spacing_hz;
  return f;
}

CsiDataset::CsiDataset(CsiMeta meta) : meta_(std::move(meta)) {
  samples_.assign(meta_.step_count * meta_.anchor_count() * meta_.subcarrier_count, cfloat{});
}

std::span<const cfloat> CsiDataset::snapshot(std::size_t k, std::size_t m) const {
  const std::size_t nf = meta_.subcarrier_count;
  return std::span<const cfloat>(samples_).subspan((k * meta_.anchor_count() + m) * nf, nf);
}

std::span<cfloat> CsiDataset::snapshot(std::size_t k, std::size_t m) {
  const std::size_t nf = meta_.subcarrier_count;
  return std::span<cfloat>(samples_).subspan((k * meta_.anchor_count() + m) * nf, nf);
}

void CsiDataset::validate() const {
  if (meta_.anchors.empty() || meta_.subcarrier_count == 0)
    throw FormatError("dataset has no anchors or subcarriers");
  if (samples_.size() != meta_.step_count * meta_.anchor_count() * meta_.subcarrier_count)
    throw FormatError("dataset sample count does not match K * M * N_f");
  for (const cfloat& v : samples_) {
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw FormatError("dataset contains non-finite samples");
  }
  if (ground_truth && ground_truth->size() != meta_.step_count)
    throw FormatError("ground truth length does not match K");
}

CsiSynthesizer::CsiSynthesizer(const ScenarioConfig& scenario, const GroundTruthTrack& track,
                               const AnchorSet& anchors, const AmplitudeModel& amplitude,
                               const ImpairmentSchedule& impairments,
                               double snr_db_per_subcarrier, std::uint64_t seed)
    : carrier_hz_(scenario.carrier_hz),
      freqs_(baseband_frequencies(scenario.subcarrier_count, scenario.subcarrier_spacing_hz)),
      track_(track),
      anchors_(anchors),
      amplitude_(amplitude),
      impairments_(impairments),
      seed_(seed) {
  scenario.validate();
  anchors.validate();
  impairments.validate(anchors.size(), track.size());
  if (track.size() == 0) throw ConfigError("ground-truth track is empty");
  if (std::isnan(snr_db_per_subcarrier)) throw ConfigError("snr_db must be a number");
  if (!(amplitude.reference_amplitude > 0.0))
    throw ConfigError("amplitude reference_amplitude must be > 0");

  double power = 0.0;
  std::size_t links = 0;
  for (std::size_t k = 0; k < track.size(); ++k) {
    for (std::size_t m = 0; m < anchors.size(); ++m) {
      if (impairments.blocked(k, m)) continue;
      const double mag =
          path_magnitude(checked_distance(anchors.positions[m], track.positions[k]));
      power += mag * mag;
      ++links;
    }
  }
  if (links == 0) throw ConfigError("every link is blocked at every step; SNR is undefined");
  if (std::isinf(snr_db_per_subcarrier) && snr_db_per_subcarrier > 0.0) {
    noise_var_ = 0.0;
  } else {
    noise_var_ = (power / static_cast<double>(links)) / std::pow(10.0, snr_db_per_subcarrier / 10.0);
  }
}

double CsiSynthesizer::path_magnitude(double distance) const {
  if (amplitude_.mode == PathLoss::unit) return amplitude_.reference_amplitude;
  return amplitude_.reference_amplitude / distance;
}

cdouble CsiSynthesizer::amplitude(std::size_t k, std::size_t m) const {
  const double d = checked_distance(anchors_.positions[m], track_.positions[k]);
  double phase = anchors_.phase_offsets[m];
  if (amplitude_.carrier_phase) phase -= kTwoPi * carrier_hz_ * d / kSpeedOfLight;
  return std::polar(path_magnitude(d) * impairments_.direct_path_gain(k, m), phase);
}

Eigen::VectorXcd CsiSynthesizer::noise_free(std::size_t k, std::size_t m) const {
  const Vec3& pa = anchors_.positions[m];
  const Vec3& p = track_.positions[k];
  Eigen::VectorXcd h = amplitude(k, m) * delay_response(pa, p, freqs_);
  const cdouble offset = std::polar(1.0, anchors_.phase_offsets[m]);
  for (const Scatterer& s : impairments_.scatterers) {
    const double path = (s.position - p).norm() + (pa - s.position).norm();
    const double tau = path / kSpeedOfLight;
    for (std::size_t j = 0; j < freqs_.size(); ++j)
      h[j] += s.gain * offset * std::polar(1.0, -kTwoPi * (carrier_hz_ + freqs_[j]) * tau);
  }
  return h;
}

Eigen::VectorXcd CsiSynthesizer::snapshot(std::size_t k, std::size_t m) const {
  Eigen::VectorXcd h = noise_free(k, m);
  if (noise_var_ > 0.0) {
    Stream rng(seed_, Stage::noise, k, m);
    const double sd = std::sqrt(0.5 * noise_var_);
    for (Eigen::Index j = 0; j < h.size(); ++j) {
      const double re = rng.normal();
      const double im = rng.normal();
      h[j] += cdouble(sd * re, sd * im);
    }
  }
  return h;
}

CsiDataset synthesize_csi(const ScenarioConfig& scenario, const GroundTruthTrack& track,
                          const AnchorSet& anchors, const AmplitudeModel& amplitude,
                          const ImpairmentSchedule& impairments, double snr_db_per_subcarrier,
                          std::uint64_t seed) {
  const CsiSynthesizer synth(scenario, track, anchors, amplitude, impairments,
                             snr_db_per_subcarrier, seed);
  CsiMeta meta;
  meta.carrier_hz = scenario.carrier_hz;
  meta.dt_s = scenario.dt_s;
  meta.subcarrier_count = static_cast<std::uint32_t>(scenario.subcarrier_count);
  meta.freq_spacing_hz = scenario.subcarrier_spacing_hz;
  meta.freq0_hz = synth.baseband_freqs().front();
  meta.step_count = track.size();
  meta.anchors = anchors.positions;

  CsiDataset data(std::move(meta));
  const std::size_t steps = track.size();
  const std::size_t anchor_count = anchors.size();
#pragma omp parallel for schedule(static)
  for (std::int64_t k = 0; k < static_cast<std::int64_t>(steps); ++k) {
    for (std::size_t m = 0; m < anchor_count; ++m) {
      const Eigen::VectorXcd h = synth.snapshot(static_cast<std::size_t>(k), m);
      auto out = data.snapshot(static_cast<std::size_t>(k), m);
      for (std::size_t j = 0; j < out.size(); ++j)
        out[j] = cfloat(static_cast<float>(h[j].real()), static_cast<float>(h[j].imag()));
    }
  }
  data.ground_truth = track;
  data.noise_variance = synth.noise_variance();
  return data;
}

}  // namespace ddtrack
