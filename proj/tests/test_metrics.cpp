// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "ddtrack/metrics.hpp"

using namespace ddtrack;

namespace {

std::vector<StepRecord> records_from(const std::vector<double>& errors, const std::vector<double>& traces,
                                     std::int64_t first = 0, std::int64_t stride = 1) {
  std::vector<StepRecord> r;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    const std::int64_t k = first + stride * static_cast<std::int64_t>(i);
    r.push_back({k, 0.005 * static_cast<double>(k), errors[i], traces[i]});
  }
  return r;
}

}  // namespace

TEST_CASE("planar error ignores height") {
  StateVector est;
  est << 1, 2, 0.3, 0, 0, 1;
  CHECK(planar_error(est, Vec3(1, 2, 5)) == 0.0);
  est << 4, 6, 0, 0, 0, 1;
  CHECK(planar_error(est, Vec3(1, 2, -3)) == 5.0);

  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> u(-50, 50);
  for (int i = 0; i < 1000; ++i) {
    est << u(gen), u(gen), u(gen), 0, 0, 1;
    const Vec3 t(u(gen), u(gen), u(gen));
    const double direct = std::sqrt((est[0] - t.x()) * (est[0] - t.x()) + (est[1] - t.y()) * (est[1] - t.y()));
    CHECK(std::abs(planar_error(est, t) - direct) <= 1e-15 * std::max(1.0, direct) * 4);
  }
}

TEST_CASE("RMSE after convergence") {
  const auto constant = records_from(std::vector<double>(20, 0.1), std::vector<double>(20, 0.0));
  CHECK(rmse_after_convergence(constant, 0) == doctest::Approx(0.1).epsilon(1e-14));

  const auto pair = records_from({9.0, 0.3, 0.4}, {1, 0, 0});
  CHECK(rmse_after_convergence(pair, 1) == doctest::Approx(std::sqrt(0.125)).epsilon(1e-14));
  CHECK_THROWS_AS(rmse_after_convergence(pair, 3), InvalidInputError);
}

TEST_CASE("pooled RMSE weights every post-convergence step equally") {
  ConvergenceOptions fixed;
  fixed.mode = ConvergenceMode::fixed;
  fixed.skip_s = 0.0;
  std::vector<RunMetrics> runs;
  runs.push_back(evaluate_run(records_from({0.1, 0.2}, {0, 0}), fixed));
  runs.push_back(evaluate_run(records_from({0.3}, {0}), fixed));
  runs.push_back(evaluate_run(records_from({0.0, 0.4, 0.5, 0.2}, {0, 0, 0, 0}), fixed));
  // hand-pooled: (0.01 + 0.04 + 0.09 + 0 + 0.16 + 0.25 + 0.04) / 7
  CHECK(pooled_rmse(runs) == doctest::Approx(std::sqrt(0.59 / 7)).epsilon(1e-14));

  std::vector<RunMetrics> none(1);
  CHECK_THROWS_AS(pooled_rmse(none), InvalidInputError);
}

TEST_CASE("convergence detection") {
  const auto zero = records_from(std::vector<double>(80, 1.0), std::vector<double>(80, 0.0), 49, 4);
  CHECK(detect_convergence(zero, 0.5, 50) == 49);

  std::mt19937_64 gen(2);
  std::uniform_real_distribution<double> u(0.01, 1.0);
  std::vector<double> noisy(100);
  for (double& t : noisy) t = u(gen);
  CHECK_FALSE(detect_convergence(records_from(std::vector<double>(100, 1.0), noisy), 0.0, 5).has_value());

  std::vector<double> traces(600);
  for (std::size_t k = 0; k < traces.size(); ++k) traces[k] = k < 300 ? 4.0 + u(gen) : 0.01 * u(gen);
  traces[200] = 0.0;  // a single dip does not satisfy the hold window
  CHECK(detect_convergence(records_from(std::vector<double>(600, 1.0), traces), 0.5, 50) == 300);

  // too short to hold: converges only if every step is below threshold
  CHECK(detect_convergence(records_from({1, 1, 1}, {0, 0, 0}), 0.5, 50) == 0);
  CHECK_FALSE(detect_convergence(records_from({1, 1, 1}, {0, 9, 0}), 0.5, 50).has_value());
}

TEST_CASE("fixed convergence mode skips an initial time span") {
  ConvergenceOptions opt;
  opt.mode = ConvergenceMode::fixed;
  opt.skip_s = 2.0;
  const auto r = records_from(std::vector<double>(1000, 1.0), std::vector<double>(1000, 100.0));
  CHECK(convergence_step(r, opt) == 400);
  opt.skip_s = 100.0;
  CHECK_FALSE(convergence_step(r, opt).has_value());
}

TEST_CASE("error CDF") {
  const std::vector<double> single{0.2};
  const auto step = error_cdf(single);
  REQUIRE(step.size() == 1);
  CHECK(cdf_at(step, 0.19) == 0.0);
  CHECK(cdf_at(step, 0.2) == 1.0);

  const std::vector<double> three{0.3, 0.1, 0.2};
  const auto cdf = error_cdf(three);
  CHECK(cdf_at(cdf, 0.2) == doctest::Approx(2.0 / 3));
  CHECK(cdf_at(cdf, 0.05) == 0.0);
  CHECK(cdf_at(cdf, 1.0) == 1.0);
  CHECK_THROWS_AS(error_cdf(std::vector<double>{}), InvalidInputError);
}

TEST_CASE("error CDF agrees with a rank count on 10^4 samples") {
  std::mt19937_64 gen(3);
  std::gamma_distribution<double> g(2.0, 0.1);
  std::vector<double> e(10000);
  for (std::size_t i = 0; i < e.size(); ++i) e[i] = i % 10 == 0 ? 0.25 : g(gen);
  const auto cdf = error_cdf(e);
  for (std::size_t i = 1; i < cdf.size(); ++i) CHECK(cdf[i - 1].first < cdf[i].first);
  for (std::size_t i = 0; i < cdf.size(); i += 97) {
    const double x = cdf[i].first;
    const auto below = std::count_if(e.begin(), e.end(), [x](double v) { return v <= x; });
    CHECK(cdf[i].second == static_cast<double>(below) / 10000.0);
  }
  CHECK(cdf.back().second == 1.0);
}

TEST_CASE("quantiles interpolate between order statistics") {
  const std::vector<double> v{4, 1, 3, 2};
  CHECK(quantile(v, 0.0) == 1.0);
  CHECK(quantile(v, 1.0) == 4.0);
  CHECK(quantile(v, 0.5) == doctest::Approx(2.5));
  CHECK_THROWS_AS(quantile(std::vector<double>{}, 0.5), InvalidInputError);
}
