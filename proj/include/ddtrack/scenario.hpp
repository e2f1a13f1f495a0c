// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#pragma once

#include <cstdint>
#include <optional>
#include <variant>
#include <vector>

#include "ddtrack/common.hpp"

namespace ddtrack {

/// Known anchor positions (m) and per-anchor carrier phase offsets (rad, [0, 2pi)).
struct AnchorSet {
  std::vector<Vec3> positions;
  std::vector<double> phase_offsets;

  std::size_t size() const { return positions.size(); }
  /// Throws ConfigError when the invariants do not hold.
  void validate() const;
};

/// Two parallel walls along x (at y = 0 and y = hall width), `per_wall` anchors
/// each, centered in equal segments of the hall length.
struct WallLayout {
  double hall_length_m = 30.0;
  double hall_width_m = 12.0;
  double height_m = 4.0;
  int per_wall = 6;
};

struct AnchorLayoutSpec {
  std::vector<Vec3> positions;        // explicit coordinates, or empty
  std::vector<double> phase_offsets;  // empty: drawn uniformly
  std::optional<WallLayout> walls;    // generator, used when positions is empty
};

AnchorSet build_anchor_set(const AnchorLayoutSpec& spec, std::uint64_t seed);

struct GroundTruthTrack {
  std::vector<double> times;  // s, t_k = k * dt
  std::vector<Vec3> positions;
  std::vector<Vec3> velocities;  // z component is exactly 0

  std::size_t size() const { return times.size(); }
};

struct LineTrajectory {
  Vec3 start = Vec3::Zero();
  Vec3 end = Vec3::Zero();
  double speed_mps = 1.0;
};

/// Horizontal circle, counter-clockwise for positive angular speed.
struct CircleTrajectory {
  Vec3 center = Vec3::Zero();
  double radius_m = 1.0;
  double angular_speed_radps = 0.5;
  double duration_s = 10.0;
  double start_angle_rad = 0.0;
};

/// Polyline traversed at constant speed.
struct WaypointTrajectory {
  std::vector<Vec3> waypoints;
  double speed_mps = 1.0;
};

using TrajectorySpec = std::variant<LineTrajectory, CircleTrajectory, WaypointTrajectory>;

/// Samples the trajectory every dt seconds. Velocities are the analytic
/// derivatives of the curve. Throws ConfigError if the speed exceeds v_max, the
/// duration is not positive, or the motion is not horizontal.
GroundTruthTrack generate_trajectory(const TrajectorySpec& spec, double dt_s, double v_max_mps);

/// <(p_a - p)/|p_a - p|, v>; positive when the agent approaches the anchor.
double radial_velocity(const Vec3& anchor_pos, const Vec3& agent_pos, const Vec3& agent_vel);

struct ScenarioConfig {
  double carrier_hz = 3.75e9;
  int subcarrier_count = 449;
  double subcarrier_spacing_hz = 78.125e3;
  double dt_s = 0.005;
  double v_max_mps = 1.0;
  AnchorLayoutSpec anchors;
  TrajectorySpec trajectory;
  std::uint64_t seed = 1;

  void validate() const;
};

}  // namespace ddtrack
