// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include "ddtrack/scenario.hpp"

#include <cmath>
#include <string>

#include "ddtrack/rng.hpp"

namespace ddtrack {

void AnchorSet::validate() const {
  if (positions.empty()) throw ConfigError("invalid anchor layout: no anchors");
  if (phase_offsets.size() != positions.size())
    throw ConfigError("invalid anchor layout: phase_offsets must have one entry per anchor");
  for (std::size_t m = 0; m < positions.size(); ++m) {
    if (!positions[m].allFinite())
      throw ConfigError("invalid anchor layout: anchor " + std::to_string(m) + " is not finite");
    const double phi = phase_offsets[m];
    if (!(phi >= 0.0 && phi < kTwoPi))
      throw ConfigError("invalid anchor layout: phase offset of anchor " + std::to_string(m) +
                        " outside [0, 2pi)");
    for (std::size_t n = 0; n < m; ++n) {
      if (positions[m] == positions[n])
        throw ConfigError("invalid anchor layout: anchors " + std::to_string(n) + " and " +
                          std::to_string(m) + " coincide");
    }
  }
}

AnchorSet build_anchor_set(const AnchorLayoutSpec& spec, std::uint64_t seed) {
  AnchorSet set;
  if (!spec.positions.empty()) {
    set.positions = spec.positions;
  } else if (spec.walls) {
    const WallLayout& w = *spec.walls;
    if (w.per_wall < 1 || !(w.hall_length_m > 0.0))
      throw ConfigError("invalid anchor layout: wall generator needs per_wall >= 1 and length > 0");
    const double spacing = w.hall_length_m / w.per_wall;
    for (double y : {0.0, w.hall_width_m}) {
      for (int i = 0; i < w.per_wall; ++i)
        set.positions.emplace_back((i + 0.5) * spacing, y, w.height_m);
    }
  } else {
    throw ConfigError("invalid anchor layout: no anchors");
  }

  if (!spec.phase_offsets.empty()) {
    set.phase_offsets = spec.phase_offsets;
  } else {
    set.phase_offsets.resize(set.positions.size());
    for (std::size_t m = 0; m < set.positions.size(); ++m) {
      Stream rng(seed, Stage::anchors, m);
      set.phase_offsets[m] = kTwoPi * rng.uniform();
    }
  }
  set.validate();
  return set;
}

namespace {

constexpr double kSpeedTolerance = 1e-12;

std::size_t sample_count(double duration_s, double dt_s) {
  return static_cast<std::size_t>(std::floor(duration_s / dt_s + 1e-9)) + 1;
}

void check_speed(double speed, double v_max) {
  if (!(speed >= 0.0)) throw ConfigError("trajectory speed must be non-negative");
  if (speed > v_max + kSpeedTolerance)
    throw ConfigError("trajectory speed " + std::to_string(speed) + " m/s exceeds v_max " +
                      std::to_string(v_max) + " m/s");
}

struct Sampler {
  double dt;
  GroundTruthTrack track;

  void reserve(std::size_t k) {
    track.times.reserve(k);
    track.positions.reserve(k);
    track.velocities.reserve(k);
  }
  void push(std::size_t k, const Vec3& p, const Vec3& v) {
    track.times.push_back(static_cast<double>(k) * dt);
    track.positions.push_back(p);
    track.velocities.push_back(v);
  }
};

GroundTruthTrack sample(const LineTrajectory& line, double dt, double v_max) {
  check_speed(line.speed_mps, v_max);
  if (line.start.z() != line.end.z()) throw ConfigError("line trajectory must be horizontal");
  const Vec3 delta = line.end - line.start;
  const double length = delta.norm();
  if (!(line.speed_mps > 0.0) || !(length > 0.0))
    throw ConfigError("trajectory duration must be positive");
  const double duration = length / line.speed_mps;
  const Vec3 vel = delta / length * line.speed_mps;

  Sampler s{dt, {}};
  const std::size_t count = sample_count(duration, dt);
  s.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) * dt;
    Vec3 v = vel;
    v.z() = 0.0;
    s.push(k, line.start + vel * t, v);
  }
  return std::move(s.track);
}

GroundTruthTrack sample(const CircleTrajectory& c, double dt, double v_max) {
  check_speed(std::abs(c.radius_m * c.angular_speed_radps), v_max);
  if (!(c.duration_s > 0.0)) throw ConfigError("trajectory duration must be positive");
  if (!(c.radius_m > 0.0)) throw ConfigError("circle radius must be positive");

  Sampler s{dt, {}};
  const std::size_t count = sample_count(c.duration_s, dt);
  s.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = static_cast<double>(k) * dt;
    const double phi = c.start_angle_rad + c.angular_speed_radps * t;
    const Vec3 p = c.center + c.radius_m * Vec3(std::cos(phi), std::sin(phi), 0.0);
    const double w = c.angular_speed_radps * c.radius_m;
    s.push(k, p, Vec3(-w * std::sin(phi), w * std::cos(phi), 0.0));
  }
  return std::move(s.track);
}

GroundTruthTrack sample(const WaypointTrajectory& wp, double dt, double v_max) {
  check_speed(wp.speed_mps, v_max);
  if (wp.waypoints.size() < 2) throw ConfigError("waypoint trajectory needs at least two points");
  std::vector<double> cumulative{0.0};
  for (std::size_t i = 1; i < wp.waypoints.size(); ++i) {
    if (wp.waypoints[i].z() != wp.waypoints[0].z())
      throw ConfigError("waypoint trajectory must be horizontal");
    cumulative.push_back(cumulative.back() + (wp.waypoints[i] - wp.waypoints[i - 1]).norm());
  }
  if (!(wp.speed_mps > 0.0) || !(cumulative.back() > 0.0))
    throw ConfigError("trajectory duration must be positive");
  const double duration = cumulative.back() / wp.speed_mps;

  Sampler s{dt, {}};
  const std::size_t count = sample_count(duration, dt);
  s.reserve(count);
  std::size_t seg = 0;
  for (std::size_t k = 0; k < count; ++k) {
    const double arc = std::min(static_cast<double>(k) * dt * wp.speed_mps, cumulative.back());
    while (seg + 2 < cumulative.size() && arc >= cumulative[seg + 1]) ++seg;
    // zero-length segments carry no direction; skip them
    while (seg + 2 < cumulative.size() && cumulative[seg + 1] == cumulative[seg]) ++seg;
    const Vec3& a = wp.waypoints[seg];
    const Vec3& b = wp.waypoints[seg + 1];
    const double len = cumulative[seg + 1] - cumulative[seg];
    const Vec3 dir = len > 0.0 ? Vec3((b - a) / len) : Vec3::Zero();
    Vec3 v = dir * wp.speed_mps;
    v.z() = 0.0;
    s.push(k, a + dir * (arc - cumulative[seg]), v);
  }
  return std::move(s.track);
}

}  // namespace

GroundTruthTrack generate_trajectory(const TrajectorySpec& spec, double dt_s, double v_max_mps) {
  if (!(dt_s > 0.0)) throw ConfigError("dt_s must be positive");
  return std::visit([&](const auto& s) { return sample(s, dt_s, v_max_mps); }, spec);
}

double radial_velocity(const Vec3& anchor_pos, const Vec3& agent_pos, const Vec3& agent_vel) {
  const Vec3 los = anchor_pos - agent_pos;
  const double dist = los.norm();
  if (!(dist > 0.0)) throw GeometryError("agent position coincides with anchor");
  return los.dot(agent_vel) / dist;
}

void ScenarioConfig::validate() const {
  if (subcarrier_count < 1) throw ConfigError("subcarrier_count must be >= 1");
  if (!(subcarrier_spacing_hz > 0.0)) throw ConfigError("subcarrier_spacing_hz must be > 0");
  if (!(dt_s > 0.0)) throw ConfigError("dt_s must be > 0");
  if (!(carrier_hz > subcarrier_count * subcarrier_spacing_hz))
    throw ConfigError("carrier_hz must exceed the occupied bandwidth");
  if (!(v_max_mps > 0.0)) throw ConfigError("v_max_mps must be > 0");
}

}  // namespace ddtrack
