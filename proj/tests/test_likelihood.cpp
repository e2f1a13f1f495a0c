// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include <doctest.h>

#include <bit>
#include <cmath>
#include <random>

#include "ddtrack/likelihood.hpp"
#include "oracles.hpp"

using namespace ddtrack;

namespace {

std::vector<double> uniform_times(std::size_t n, double t0, double dt) {
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = t0 + dt * static_cast<double>(i);
  return t;
}

struct Toy {
  std::vector<Vec3> anchors;
  std::vector<double> freqs;
  std::vector<double> times;
  double carrier = 3.75e9;
};

Toy toy(std::size_t m, std::size_t nf, std::size_t nt) {
  Toy t;
  const Vec3 pool[] = {Vec3(2.5, 0, 4), Vec3(12.5, 12, 4), Vec3(22.5, 0, 4), Vec3(7.5, 12, 4)};
  for (std::size_t i = 0; i < m; ++i) t.anchors.push_back(pool[i]);
  t.freqs = baseband_frequencies(static_cast<int>(nf), 4.375e6);
  t.times = uniform_times(nt, 1.0, 0.005);
  return t;
}

/// Blocks alpha_m * b c^T generated at `state` (window-end geometry) plus noise.
std::vector<Eigen::MatrixXcd> model_blocks(const Toy& t, const StateHypothesis& state,
                                           std::mt19937_64& gen, double noise_std,
                                           const std::vector<cdouble>& alphas) {
  std::vector<Eigen::MatrixXcd> blocks;
  std::normal_distribution<double> g(0.0, noise_std / std::sqrt(2.0));
  for (std::size_t m = 0; m < t.anchors.size(); ++m) {
    Eigen::MatrixXcd b = noise_free_block(t.anchors[m], state.position, state.velocity3(),
                                          alphas[m], t.freqs, t.carrier, t.times);
    if (noise_std > 0)
      for (Eigen::Index i = 0; i < b.size(); ++i) b(i) += cdouble(g(gen), g(gen));
    blocks.push_back(b);
  }
  return blocks;
}

Eigen::VectorXcd vec(const Eigen::MatrixXcd& block) {
  return Eigen::Map<const Eigen::VectorXcd>(block.data(), block.size());
}

StateHypothesis make_state(Vec3 p, double vx, double vy, double var) {
  StateHypothesis s;
  s.position = p;
  s.velocity = Eigen::Vector2d(vx, vy);
  s.noise_var = var;
  return s;
}

}  // namespace

TEST_CASE("delay-Doppler response: stationary agent repeats b") {
  const Toy t = toy(1, 6, 4);
  const StateHypothesis s = make_state(Vec3(3, 4, 1.35), 0, 0, 1);
  const auto psi = delay_doppler_response(s, t.anchors[0], t.freqs, t.carrier, t.times);
  const auto b = delay_response(t.anchors[0], s.position, t.freqs);
  for (Eigen::Index n = 0; n < 4; ++n) CHECK((psi.segment(n * 6, 6) - b).norm() < 1e-15);
}

TEST_CASE("delay-Doppler response: squared norm is N_f * N_t") {
  const auto f = baseband_frequencies(449, 78.125e3);
  const auto times = uniform_times(200, 0.0, 0.005);
  const auto psi = delay_doppler_response(make_state(Vec3(3, 4, 1.35), 0.5, -0.5, 1), Vec3(27.5, 12, 4),
                                          f, 3.75e9, times);
  CHECK(psi.squaredNorm() == doctest::Approx(89800.0).epsilon(1e-12));
}

TEST_CASE("delay-Doppler response matches the elementwise construction") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const Toy t = toy(1, 9, 7);
  for (int trial = 0; trial < 20; ++trial) {
    const StateHypothesis s = make_state(Vec3(30 * u(gen), 12 * u(gen), 2.5 * u(gen)), 2 * u(gen) - 1,
                                         2 * u(gen) - 1, 1);
    const auto psi = delay_doppler_response(s, t.anchors[0], t.freqs, t.carrier, t.times);
    const auto ref = oracle::elementwise_response(t.anchors[0], s.position, s.velocity3(), t.freqs,
                                                  t.carrier, t.times);
    CHECK((psi - ref).norm() / ref.norm() < 1e-12);
  }
}

TEST_CASE("concentrated amplitude: noise-free inversion and orthogonal case") {
  std::mt19937_64 gen(3);
  const Eigen::VectorXcd psi = oracle::random_vector(gen, 32);
  const cdouble alpha(0.8, -1.9);
  CHECK(std::abs(concentrate_amplitude(alpha * psi, psi) - alpha) <= 1e-12 * std::abs(alpha));

  Eigen::VectorXcd y = oracle::random_vector(gen, 32);
  y -= (psi.dot(y) / psi.squaredNorm()) * psi;
  CHECK(std::abs(concentrate_amplitude(y, psi)) < 1e-12);
  CHECK_THROWS_AS(concentrate_amplitude(y, Eigen::VectorXcd::Zero(32)), InvalidInputError);
}

TEST_CASE("concentrated amplitude maximizes the likelihood on a 2D grid") {
  std::mt19937_64 gen(21);
  for (int trial = 0; trial < 10; ++trial) {
    const Eigen::VectorXcd psi = oracle::random_vector(gen, 24);
    const Eigen::VectorXcd y = oracle::random_vector(gen, 24, 2.0);
    const cdouble closed = concentrate_amplitude(y, psi);
    const auto grid = oracle::grid_minimize_misfit(y, psi);
    CHECK(std::abs(closed.real() - grid.argmin.real()) <= grid.pitch);
    CHECK(std::abs(closed.imag() - grid.argmin.imag()) <= grid.pitch);
  }
}

TEST_CASE("residual energy: model and orthogonal cases") {
  std::mt19937_64 gen(4);
  const Eigen::VectorXcd psi = oracle::random_vector(gen, 12);
  CHECK(residual_energy(cdouble(2, 1) * psi, psi) <= 1e-12 * psi.squaredNorm());
  Eigen::VectorXcd y = oracle::random_vector(gen, 12);
  y -= (psi.dot(y) / psi.squaredNorm()) * psi;
  CHECK(residual_energy(y, psi) == doctest::Approx(y.squaredNorm()).epsilon(1e-12));
}

TEST_CASE("residual energy equals the dense projector at N_f = 4, N_t = 3") {
  std::mt19937_64 gen(5);
  const Toy t = toy(1, 4, 3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const StateHypothesis s = make_state(Vec3(30 * u(gen), 12 * u(gen), 2), u(gen), -u(gen), 1);
    const auto psi = delay_doppler_response(s, t.anchors[0], t.freqs, t.carrier, t.times);
    const Eigen::VectorXcd y = oracle::random_vector(gen, 12);
    CHECK(std::abs(residual_energy(y, psi) - oracle::dense_projector_residual(y, psi)) <= 1e-10);
  }
}

TEST_CASE("projection identities hold on random instances") {
  std::mt19937_64 gen(6);
  for (int trial = 0; trial < 200; ++trial) {
    const Eigen::VectorXcd psi = oracle::random_vector(gen, 20);
    const Eigen::VectorXcd y = oracle::random_vector(gen, 20, 3.0);
    const double proj = std::norm(psi.dot(y)) / psi.squaredNorm();
    CHECK(std::abs(residual_energy(y, psi) + proj - y.squaredNorm()) <= 1e-9 * y.squaredNorm());
    const Eigen::VectorXcd r = y - concentrate_amplitude(y, psi) * psi;
    CHECK(std::abs(psi.dot(r)) <= 1e-9 * y.norm() * psi.norm());
  }
}

TEST_CASE("profile likelihood: zero residual at the generating state") {
  std::mt19937_64 gen(8);
  const Toy t = toy(1, 8, 4);
  const StateHypothesis truth = make_state(Vec3(6, 5, 1.35), 0.4, 0.7, 0.25);
  const ObservationWindow w(model_blocks(t, truth, gen, 0.0, {cdouble(3, -1)}), t.times, t.freqs,
                            t.carrier, t.anchors);
  const auto r = profile_log_likelihood(w, truth);
  CHECK(r.residuals[0] <= 1e-9 * w.energy(0));
  CHECK(r.log_likelihood == doctest::Approx(-1.0 * 4 * 8 * std::log(kPi * 0.25)).epsilon(1e-9));
  CHECK(std::abs(r.amplitudes[0] - cdouble(3, -1)) < 1e-9);
  CHECK(r.bartlett_score == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("profile likelihood decreases with the residual at fixed noise variance") {
  std::mt19937_64 gen(9);
  const Toy t = toy(2, 8, 4);
  const StateHypothesis truth = make_state(Vec3(6, 5, 1.35), 0.4, 0.7, 0.5);
  const ObservationWindow w(model_blocks(t, truth, gen, 0.3, {cdouble(1, 0), cdouble(0, 2)}), t.times,
                            t.freqs, t.carrier, t.anchors);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  for (int trial = 0; trial < 50; ++trial) {
    StateHypothesis a = truth, b = truth;
    a.position += Vec3(u(gen), u(gen), 0);
    b.position += Vec3(u(gen), u(gen), 0);
    const auto ra = profile_log_likelihood(w, a);
    const auto rb = profile_log_likelihood(w, b);
    const double sa = ra.residuals[0] + ra.residuals[1];
    const double sb = rb.residuals[0] + rb.residuals[1];
    if (sa < sb) CHECK(ra.log_likelihood > rb.log_likelihood);
    if (sa > sb) CHECK(ra.log_likelihood < rb.log_likelihood);
  }
}

TEST_CASE("profile likelihood equals the amplitude-maximized joint likelihood") {
  std::mt19937_64 gen(10);
  const Toy t = toy(2, 8, 4);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 10; ++trial) {
    const StateHypothesis truth = make_state(Vec3(3 + 24 * u(gen), 1 + 10 * u(gen), 1.35), u(gen), -u(gen), 0.4);
    const ObservationWindow w(model_blocks(t, truth, gen, 0.6, {cdouble(1, 1), cdouble(-2, 0.5)}), t.times,
                              t.freqs, t.carrier, t.anchors);
    StateHypothesis probe = truth;
    probe.position += Vec3(0.3 * u(gen), -0.2 * u(gen), 0.1);
    probe.noise_var = 0.3 + u(gen);

    double joint = -2.0 * 8 * 4 * std::log(kPi * probe.noise_var);
    for (std::size_t m = 0; m < 2; ++m) {
      const auto psi = oracle::elementwise_response(t.anchors[m], probe.position, probe.velocity3(), t.freqs,
                                                    t.carrier, t.times);
      joint -= oracle::grid_minimize_misfit(vec(w.block(m)), psi, 1e-4).value / probe.noise_var;
    }
    const double profile = profile_log_likelihood(w, probe).log_likelihood;
    CHECK(std::abs(profile - joint) <= 1e-6 * std::abs(joint));
  }
}

TEST_CASE("profile likelihood rejects invalid states") {
  std::mt19937_64 gen(12);
  const Toy t = toy(1, 4, 3);
  const StateHypothesis truth = make_state(Vec3(6, 5, 1.35), 0, 0, 1);
  const ObservationWindow w(model_blocks(t, truth, gen, 0.1, {cdouble(1, 0)}), t.times, t.freqs, t.carrier,
                            t.anchors);
  StateHypothesis bad = truth;
  bad.noise_var = 0.0;
  CHECK_THROWS_AS(profile_log_likelihood(w, bad), InvalidInputError);
  bad = truth;
  bad.position = t.anchors[0];
  CHECK_THROWS_AS(profile_log_likelihood(w, bad), GeometryError);

  std::vector<StateVector> states{truth.to_vector(), bad.to_vector(), truth.to_vector()};
  states[2][5] = -1.0;
  std::vector<double> out(3);
  evaluate_states(w, states, WeightingMode::likelihood, 1.0, out);
  CHECK(std::isfinite(out[0]));
  CHECK(out[1] == -INFINITY);
  CHECK(out[2] == -INFINITY);
}

TEST_CASE("Bartlett score: perfect match, orthogonal data and a direct oracle") {
  std::mt19937_64 gen(13);
  const Toy t = toy(3, 8, 4);
  const StateHypothesis truth = make_state(Vec3(6, 5, 1.35), 0.4, 0.7, 1);
  const ObservationWindow perfect(model_blocks(t, truth, gen, 0.0, {cdouble(1, 0), cdouble(0, 3), cdouble(-2, 1)}),
                                  t.times, t.freqs, t.carrier, t.anchors);
  CHECK(bartlett_score(perfect, truth) == doctest::Approx(3.0).epsilon(1e-12));

  std::vector<Eigen::MatrixXcd> ortho;
  for (std::size_t m = 0; m < 3; ++m) {
    const auto psi = oracle::elementwise_response(t.anchors[m], truth.position, truth.velocity3(), t.freqs,
                                                  t.carrier, t.times);
    Eigen::VectorXcd y = oracle::random_vector(gen, psi.size());
    y -= (psi.dot(y) / psi.squaredNorm()) * psi;
    ortho.push_back(Eigen::Map<Eigen::MatrixXcd>(y.data(), 8, 4));
  }
  const ObservationWindow orth(ortho, t.times, t.freqs, t.carrier, t.anchors);
  CHECK(bartlett_score(orth, truth) < 1e-12);

  const Toy one = toy(1, 8, 4);
  const Eigen::VectorXcd y = oracle::random_vector(gen, 32);
  const ObservationWindow single({Eigen::Map<const Eigen::MatrixXcd>(y.data(), 8, 4)}, one.times, one.freqs,
                                 one.carrier, one.anchors);
  const auto psi = oracle::elementwise_response(one.anchors[0], truth.position, truth.velocity3(), one.freqs,
                                                one.carrier, one.times);
  const double direct = std::norm(psi.dot(y)) / (psi.squaredNorm() * y.squaredNorm());
  CHECK(bartlett_score(single, truth) == doctest::Approx(direct).epsilon(1e-10));
}

TEST_CASE("Bartlett score skips anchors without signal") {
  std::mt19937_64 gen(14);
  const Toy t = toy(2, 8, 4);
  const StateHypothesis truth = make_state(Vec3(6, 5, 1.35), 0.4, 0.7, 1);
  auto blocks = model_blocks(t, truth, gen, 0.0, {cdouble(1, 0), cdouble(1, 0)});
  blocks[1].setZero();
  const ObservationWindow w(blocks, t.times, t.freqs, t.carrier, t.anchors);
  CHECK(bartlett_score(w, truth) == doctest::Approx(1.0).epsilon(1e-12));
  std::vector<StateVector> states{truth.to_vector()};
  std::vector<double> out(1);
  evaluate_states(w, states, WeightingMode::bartlett, 7.0, out);
  CHECK(out[0] == doctest::Approx(7.0).epsilon(1e-12));
}

TEST_CASE("factorized kernel matches the vectorized reference") {
  std::mt19937_64 gen(15);
  const Toy t = toy(3, 12, 9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const StateHypothesis truth = make_state(Vec3(6, 5, 1.35), 0.4, 0.7, 1);
  const ObservationWindow w(model_blocks(t, truth, gen, 1.0, {cdouble(1, 0), cdouble(0, 2), cdouble(3, 1)}),
                            t.times, t.freqs, t.carrier, t.anchors, GeometryReference::window_end);
  for (int trial = 0; trial < 30; ++trial) {
    const StateHypothesis s = make_state(Vec3(30 * u(gen), 12 * u(gen), 2.5 * u(gen)), 2 * u(gen) - 1,
                                         2 * u(gen) - 1, 0.2 + u(gen));
    double residual = 0.0;
    for (std::size_t m = 0; m < 3; ++m) {
      const auto psi = delay_doppler_response(s, t.anchors[m], t.freqs, t.carrier, t.times);
      residual += residual_energy(vec(w.block(m)), psi);
    }
    const double naive = -residual / s.noise_var - 3.0 * 12 * 9 * std::log(kPi * s.noise_var);
    const double fast = profile_log_likelihood(w, s).log_likelihood;
    CHECK(std::abs(fast - naive) <= 1e-10 * std::abs(naive));
    std::vector<StateVector> states{s.to_vector()};
    std::vector<double> out(1);
    evaluate_states(w, states, WeightingMode::likelihood, 1.0, out);
    CHECK(std::abs(out[0] - naive) <= 1e-10 * std::abs(naive));
  }
}

TEST_CASE("profile likelihood is invariant to per-anchor phase rotations") {
  std::mt19937_64 gen(16);
  const Toy t = toy(3, 8, 6);
  const StateHypothesis truth = make_state(Vec3(6, 5, 1.35), 0.4, 0.7, 1);
  auto blocks = model_blocks(t, truth, gen, 0.5, {cdouble(1, 0), cdouble(0, 2), cdouble(3, 1)});
  const ObservationWindow w(blocks, t.times, t.freqs, t.carrier, t.anchors);
  blocks[1] *= std::polar(1.0, 2.17);
  blocks[2] *= std::polar(1.0, -0.4);
  const ObservationWindow rotated(blocks, t.times, t.freqs, t.carrier, t.anchors);
  StateHypothesis probe = truth;
  probe.position += Vec3(0.4, -0.3, 0.2);
  CHECK(std::abs(profile_log_likelihood(w, probe).log_likelihood -
                 profile_log_likelihood(rotated, probe).log_likelihood) <= 1e-9);
}

TEST_CASE("quarter-turn anchor rotations leave the kernel output bit-identical") {
  std::mt19937_64 gen(17);
  const Toy t = toy(2, 10, 7);
  const StateHypothesis truth = make_state(Vec3(6, 5, 1.35), 0.4, 0.7, 1);
  auto blocks = model_blocks(t, truth, gen, 0.5, {cdouble(1, 0), cdouble(0, 2)});
  const ObservationWindow w(blocks, t.times, t.freqs, t.carrier, t.anchors);
  blocks[0] *= cdouble(0, 1);
  blocks[1] *= cdouble(-1, 0);
  const ObservationWindow rotated(blocks, t.times, t.freqs, t.carrier, t.anchors);
  std::vector<StateVector> states;
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 50; ++i)
    states.push_back(make_state(Vec3(30 * u(gen), 12 * u(gen), 2.5 * u(gen)), u(gen), -u(gen), 0.5 + u(gen)).to_vector());
  for (WeightingMode mode : {WeightingMode::likelihood, WeightingMode::bartlett}) {
    std::vector<double> a(states.size()), b(states.size());
    evaluate_states(w, states, mode, 3.0, a);
    evaluate_states(rotated, states, mode, 3.0, b);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(std::bit_cast<std::uint64_t>(a[i]) == std::bit_cast<std::uint64_t>(b[i]));
  }
}

TEST_CASE("profile likelihood is invariant to rigid translation") {
  std::mt19937_64 gen(18);
  Toy t = toy(3, 8, 6);
  const StateHypothesis truth = make_state(Vec3(6, 5, 1.35), 0.4, 0.7, 1);
  const auto blocks = model_blocks(t, truth, gen, 0.5, {cdouble(1, 0), cdouble(0, 2), cdouble(3, 1)});
  const ObservationWindow w(blocks, t.times, t.freqs, t.carrier, t.anchors);
  const Vec3 shift(3.25, -1.5, 0.75);
  for (auto& a : t.anchors) a += shift;
  const ObservationWindow moved(blocks, t.times, t.freqs, t.carrier, t.anchors);
  StateHypothesis probe = truth;
  probe.position += Vec3(0.4, -0.3, 0.2);
  StateHypothesis probe_moved = probe;
  probe_moved.position += shift;
  const double a = profile_log_likelihood(w, probe).log_likelihood;
  const double b = profile_log_likelihood(moved, probe_moved).log_likelihood;
  CHECK(std::abs(a - b) <= 1e-9 * std::abs(a));
}

TEST_CASE("noise-free likelihood peaks at the generating state on a local grid") {
  std::mt19937_64 gen(19);
  const Toy t = toy(4, 16, 20);
  const StateHypothesis truth = make_state(Vec3(9, 5, 1.35), 0.6, -0.5, 0.01);
  const ObservationWindow w(
      model_blocks(t, truth, gen, 0.0, {cdouble(1, 0), cdouble(0, 2), cdouble(3, 1), cdouble(0.5, 0.5)}),
      t.times, t.freqs, t.carrier, t.anchors, GeometryReference::window_end);
  const double peak = profile_log_likelihood(w, truth).log_likelihood;
  for (int dx = -1; dx <= 1; ++dx)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dz = -1; dz <= 1; ++dz)
        for (int dvx = -1; dvx <= 1; ++dvx)
          for (int dvy = -1; dvy <= 1; ++dvy) {
            if (dx == 0 && dy == 0 && dz == 0 && dvx == 0 && dvy == 0) continue;
            StateHypothesis s = truth;
            s.position += 0.01 * Vec3(dx, dy, dz);
            s.velocity += 0.01 * Eigen::Vector2d(dvx, dvy);
            CHECK(profile_log_likelihood(w, s).log_likelihood < peak);
          }
}

TEST_CASE("window-center reference evaluates geometry at the mean sample time") {
  std::mt19937_64 gen(20);
  const Toy t = toy(2, 8, 9);
  const StateHypothesis state = make_state(Vec3(9, 5, 1.35), 0.6, -0.5, 0.1);
  const double lag = t.times.back() - 0.5 * (t.times.front() + t.times.back());
  StateHypothesis centre = state;
  centre.position -= state.velocity3() * lag;
  const auto blocks = model_blocks(t, centre, gen, 0.0, {cdouble(1, 0), cdouble(0, 2)});
  const ObservationWindow w(blocks, t.times, t.freqs, t.carrier, t.anchors, GeometryReference::window_center);
  CHECK(w.reference_lag_s() == doctest::Approx(lag).epsilon(1e-12));
  const auto r = profile_log_likelihood(w, state);
  CHECK(r.residuals[0] <= 1e-9 * w.energy(0));
  CHECK(r.residuals[1] <= 1e-9 * w.energy(1));
}

TEST_CASE("window extraction from a dataset honours strides") {
  CsiMeta meta;
  meta.carrier_hz = 3.75e9;
  meta.dt_s = 0.005;
  meta.subcarrier_count = 9;
  meta.freq_spacing_hz = 1e6;
  meta.freq0_hz = -4e6;
  meta.step_count = 25;
  meta.anchors = {Vec3(0, 0, 4), Vec3(10, 0, 4)};
  CsiDataset data(meta);
  for (std::size_t k = 0; k < 25; ++k)
    for (std::size_t m = 0; m < 2; ++m) {
      auto snap = data.snapshot(k, m);
      for (std::size_t j = 0; j < 9; ++j)
        snap[j] = cfloat(static_cast<float>(k), static_cast<float>(100 * m + j));
    }
  WindowOptions opts;
  opts.length = 10;
  opts.time_stride = 3;
  opts.subcarrier_stride = 4;
  const auto w = ObservationWindow::from_dataset(data, 20, opts);
  REQUIRE(w.snapshot_count() == 4);
  REQUIRE(w.subcarrier_count() == 3);
  CHECK(w.times() == std::vector<double>{11 * 0.005, 14 * 0.005, 17 * 0.005, 20 * 0.005});
  CHECK(w.baseband_freqs() == std::vector<double>{-4e6, 0.0, 4e6});
  CHECK(w.block(1)(2, 3) == cdouble(20, 108));
  CHECK(w.block(0)(1, 0) == cdouble(11, 4));
  CHECK_THROWS_AS(ObservationWindow::from_dataset(data, 8, opts), InvalidInputError);
  CHECK_THROWS_AS(ObservationWindow::from_dataset(data, 25, opts), InvalidInputError);
}

TEST_CASE("window construction validates shapes and spacing") {
  const Toy t = toy(1, 4, 3);
  CHECK_THROWS_AS(ObservationWindow({Eigen::MatrixXcd::Zero(4, 2)}, t.times, t.freqs, t.carrier, t.anchors),
                  InvalidInputError);
  CHECK_THROWS_AS(ObservationWindow({Eigen::MatrixXcd::Zero(4, 3)}, {0.0, 0.1, 0.3}, t.freqs, t.carrier, t.anchors),
                  InvalidInputError);
}
