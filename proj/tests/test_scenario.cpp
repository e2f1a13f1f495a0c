// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include <doctest.h>

#include <cmath>
#include <random>

#include "ddtrack/scenario.hpp"

using namespace ddtrack;

TEST_CASE("radial velocity: stationary agent gives zero") {
  CHECK(radial_velocity(Vec3(10, 0, 4), Vec3(0, 0, 1.35), Vec3::Zero()) == 0.0);
}

TEST_CASE("radial velocity: straight approach equals speed") {
  CHECK(radial_velocity(Vec3(10, 0, 0), Vec3(0, 0, 0), Vec3(1, 0, 0)) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("radial velocity: elevated anchor projects onto the line of sight") {
  // unit-vector projection evaluated independently: 10 / sqrt(10^2 + 2.65^2)
  const double expected = 0.9666348622178217;
  CHECK(radial_velocity(Vec3(10, 0, 4), Vec3(0, 0, 1.35), Vec3(1, 0, 0)) ==
        doctest::Approx(expected).epsilon(1e-14));
}

TEST_CASE("radial velocity: coincident positions are rejected") {
  CHECK_THROWS_AS(radial_velocity(Vec3(1, 2, 3), Vec3(1, 2, 3), Vec3(1, 0, 0)), GeometryError);
}

TEST_CASE("radial velocity: bounded by speed and translation invariant") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-20.0, 20.0);
  for (int i = 0; i < 1000; ++i) {
    const Vec3 a(u(gen), u(gen), u(gen));
    const Vec3 p(u(gen), u(gen), u(gen));
    const Vec3 v(u(gen) / 20, u(gen) / 20, 0.0);
    const Vec3 shift(u(gen), u(gen), u(gen));
    const double vr = radial_velocity(a, p, v);
    CHECK(std::abs(vr) <= v.norm() * (1 + 1e-14));
    CHECK(radial_velocity(a + shift, p + shift, v) == doctest::Approx(vr).epsilon(1e-9));
  }
}

TEST_CASE("anchor set: explicit twelve anchors along two walls") {
  AnchorLayoutSpec spec;
  for (int i = 0; i < 6; ++i) {
    spec.positions.emplace_back(2.5 + 5 * i, 0.0, 4.0);
    spec.positions.emplace_back(2.5 + 5 * i, 12.0, 4.0);
  }
  const AnchorSet set = build_anchor_set(spec, 3);
  CHECK(set.size() == 12);
  REQUIRE(set.phase_offsets.size() == 12);
  for (double phi : set.phase_offsets) {
    CHECK(phi >= 0.0);
    CHECK(phi < kTwoPi);
  }
}

TEST_CASE("anchor set: single anchor with explicit zero phase") {
  AnchorLayoutSpec spec;
  spec.positions = {Vec3::Zero()};
  spec.phase_offsets = {0.0};
  const AnchorSet set = build_anchor_set(spec, 1);
  CHECK(set.size() == 1);
  CHECK(set.phase_offsets[0] == 0.0);
}

TEST_CASE("anchor set: wall generator spacing") {
  AnchorLayoutSpec spec;
  spec.walls = WallLayout{30.0, 12.0, 4.0, 6};
  const AnchorSet set = build_anchor_set(spec, 1);
  REQUIRE(set.size() == 12);
  // centered in six 5 m segments: x = 2.5, 7.5, ..., 27.5 on y = 0 and y = 12
  int on_near = 0, on_far = 0;
  for (const Vec3& p : set.positions) {
    CHECK(p.z() == 4.0);
    const double slot = (p.x() - 2.5) / 5.0;
    CHECK(slot == doctest::Approx(std::round(slot)).epsilon(1e-12));
    CHECK(slot >= -1e-12);
    CHECK(slot <= 5 + 1e-12);
    if (p.y() == 0.0) ++on_near;
    if (p.y() == 12.0) ++on_far;
  }
  CHECK(on_near == 6);
  CHECK(on_far == 6);
}

TEST_CASE("anchor set: phases are a deterministic function of the seed") {
  AnchorLayoutSpec spec;
  spec.walls = WallLayout{};
  CHECK(build_anchor_set(spec, 5).phase_offsets == build_anchor_set(spec, 5).phase_offsets);
  CHECK(build_anchor_set(spec, 5).phase_offsets != build_anchor_set(spec, 6).phase_offsets);
}

TEST_CASE("anchor set: invalid layouts") {
  AnchorLayoutSpec empty;
  CHECK_THROWS_AS(build_anchor_set(empty, 1), ConfigError);

  AnchorLayoutSpec dup;
  dup.positions = {Vec3(1, 2, 3), Vec3(1, 2, 3)};
  CHECK_THROWS_AS(build_anchor_set(dup, 1), ConfigError);

  AnchorLayoutSpec bad_phase;
  bad_phase.positions = {Vec3(1, 2, 3)};
  bad_phase.phase_offsets = {kTwoPi};
  CHECK_THROWS_AS(build_anchor_set(bad_phase, 1), ConfigError);
}

TEST_CASE("trajectory: 10 m line at 1 m/s") {
  const auto track = generate_trajectory(LineTrajectory{Vec3(0, 0, 1.35), Vec3(10, 0, 1.35), 1.0}, 0.005, 1.0);
  REQUIRE(track.size() == 2001);
  for (std::size_t k = 0; k < track.size(); ++k) {
    CHECK(track.velocities[k] == Vec3(1, 0, 0));
    CHECK(track.positions[k].z() == 1.35);
  }
  CHECK(track.positions.back().x() == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("trajectory: 30 m line has duration 30 s") {
  const auto track = generate_trajectory(LineTrajectory{Vec3(0, 0, 1.35), Vec3(30, 0, 1.35), 1.0}, 0.005, 1.0);
  // K = duration / dt + 1
  CHECK(track.size() == 6001);
  CHECK(track.times.back() == doctest::Approx(30.0).epsilon(1e-12));
}

TEST_CASE("trajectory: circle has constant speed tangent to the radius") {
  const CircleTrajectory spec{Vec3(10, 6, 1.35), 2.0, 0.5, 20.0, 0.0};
  const auto track = generate_trajectory(spec, 0.005, 1.0);
  for (std::size_t k = 0; k < track.size(); ++k) {
    CHECK(track.velocities[k].norm() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(std::abs(track.velocities[k].dot(track.positions[k] - spec.center)) < 1e-12);
  }
}

TEST_CASE("trajectory: analytic velocity agrees with central differences") {
  const double dt = 0.005;
  const auto track = generate_trajectory(CircleTrajectory{Vec3(10, 6, 1.35), 2.0, 0.5, 20.0, 0.3}, dt, 1.0);
  double worst = 0.0;
  for (std::size_t k = 1; k + 1 < track.size(); ++k) {
    const Vec3 fd = (track.positions[k + 1] - track.positions[k - 1]) / (2 * dt);
    worst = std::max(worst, (fd - track.velocities[k]).norm());
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("trajectory: waypoints keep horizontal constant-speed motion") {
  WaypointTrajectory spec{{Vec3(0, 0, 1.35), Vec3(3, 4, 1.35), Vec3(3, 10, 1.35)}, 0.8};
  const auto track = generate_trajectory(spec, 0.005, 1.0);
  CHECK(track.times.back() == doctest::Approx(11.0 / 0.8).epsilon(1e-3));
  for (std::size_t k = 0; k < track.size(); ++k) {
    CHECK(track.velocities[k].z() == 0.0);
    CHECK(track.velocities[k].norm() == doctest::Approx(0.8).epsilon(1e-12));
  }
}

TEST_CASE("trajectory: uniform times and zero vertical velocity") {
  const auto track = generate_trajectory(LineTrajectory{Vec3(1, 1, 1.35), Vec3(4, 5, 1.35), 0.7}, 0.005, 1.0);
  for (std::size_t k = 0; k + 1 < track.size(); ++k) {
    CHECK(std::abs(track.times[k + 1] - track.times[k] - 0.005) <= 1e-12);
    CHECK(track.velocities[k].z() == 0.0);
  }
}

TEST_CASE("trajectory: invalid specifications") {
  CHECK_THROWS_AS(generate_trajectory(LineTrajectory{Vec3::Zero(), Vec3(10, 0, 0), 1.5}, 0.005, 1.0), ConfigError);
  CHECK_THROWS_AS(generate_trajectory(LineTrajectory{Vec3::Zero(), Vec3::Zero(), 1.0}, 0.005, 1.0), ConfigError);
  CHECK_THROWS_AS(generate_trajectory(CircleTrajectory{Vec3::Zero(), 2.0, 0.5, 0.0, 0.0}, 0.005, 1.0), ConfigError);
  CHECK_THROWS_AS(generate_trajectory(CircleTrajectory{Vec3::Zero(), 4.0, 0.5, 5.0, 0.0}, 0.005, 1.0), ConfigError);
  CHECK_THROWS_AS(generate_trajectory(LineTrajectory{Vec3::Zero(), Vec3(3, 0, 1), 1.0}, 0.005, 1.0), ConfigError);
}

TEST_CASE("scenario config: baseband must fit under the carrier") {
  ScenarioConfig cfg;
  cfg.anchors.walls = WallLayout{};
  cfg.trajectory = LineTrajectory{Vec3(0, 0, 1.35), Vec3(1, 0, 1.35), 1.0};
  CHECK_NOTHROW(cfg.validate());
  cfg.carrier_hz = 449 * 78.125e3;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
  cfg.carrier_hz = 3.75e9;
  cfg.dt_s = 0.0;
  CHECK_THROWS_AS(cfg.validate(), ConfigError);
}
