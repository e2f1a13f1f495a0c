// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO
//
// Persistence: the CSI1 binary dataset format and the CSV files exchanged
// between the track and evaluate stages.
//
// CSI1 layout (little-endian):
//   "CSI1" | u32 version | u32 M | u32 N_f | u64 K |
//   f64 carrier_hz | f64 dt_s | f64 freq0_hz | f64 freq_spacing_hz |
//   M x 3 f64 anchor positions |
//   K * M * N_f complex64 (f32 re, f32 im), k-major, then anchor, then subcarrier |
//   optional: u8 flag (1 = present), K x 6 f64 (x, y, z, vx, vy, vz)
// Baseband frequencies are freq0_hz + j * freq_spacing_hz, sample times k * dt_s.

#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "ddtrack/channel_sim.hpp"
#include "ddtrack/metrics.hpp"
#include "ddtrack/tracker.hpp"

namespace ddtrack {

inline constexpr std::uint32_t kCsi1Version = 1;

/// Size in bytes of a CSI1 file with the given dimensions.
std::uint64_t csi1_file_size(std::uint32_t anchors, std::uint32_t subcarriers,
                             std::uint64_t steps, bool with_truth);

void write_csi1(std::ostream& out, const CsiDataset& data);
/// Throws FormatError on bad magic, unknown version, truncation or trailing bytes.
CsiDataset read_csi1(std::istream& in);

void save_csi1(const std::filesystem::path& path, const CsiDataset& data);
CsiDataset load_csi1(const std::filesystem::path& path);

/// Writes through a temporary sibling file and renames it into place, so a
/// failed or interrupted write leaves no partial file at `path`.
void write_file_atomically(const std::filesystem::path& path,
                           const std::function<void(std::ostream&)>& writer);

/// One row of an estimates CSV.
struct EstimateRow {
  std::int64_t step = 0;
  double time_s = 0.0;
  StateVector mean = StateVector::Zero();
  double planar_cov_trace = 0.0;
  double ess = 0.0;
  double log_normalizer = 0.0;
};

inline constexpr const char* kEstimatesTag = "# ddtrack-estimates v1";
inline constexpr const char* kTruthTag = "# ddtrack-truth v1";

void write_estimates_csv(std::ostream& out, const std::vector<TrackEstimate>& estimates);
std::vector<EstimateRow> read_estimates_csv(std::istream& in);
std::vector<EstimateRow> load_estimates_csv(const std::filesystem::path& path);

void write_truth_csv(std::ostream& out, const GroundTruthTrack& track);
GroundTruthTrack read_truth_csv(std::istream& in);
GroundTruthTrack load_truth_csv(const std::filesystem::path& path);

/// Per-step (k, t, error, planar covariance trace) CSV of one run.
void write_errors_csv(std::ostream& out, const RunMetrics& run);
void write_cdf_csv(std::ostream& out, const std::vector<std::pair<double, double>>& cdf);

/// Shortest round-trip decimal representation of a double.
std::string format_double(double v);

}  // namespace ddtrack
