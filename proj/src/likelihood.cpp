// SPDX-License-Identifier: Apache-2.0
//
// ddtrack: delay-Doppler direct positioning for distributed MIMO

#include "ddtrack/likelihood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace ddtrack {

namespace {

constexpr double kUniformTolerance = 1e-9;
// Phasor recurrences are re-seeded from an exact sin/cos this often.
constexpr std::size_t kReanchorInterval = 64;

void require_uniform(const std::vector<double>& v, const char* what) {
  if (v.empty()) throw InvalidInputError(std::string("observation window has no ") + what);
  if (v.size() < 3) return;
  const double step = v[1] - v[0];
  for (std::size_t i = 2; i < v.size(); ++i) {
    const double d = v[i] - v[i - 1];
    if (std::abs(d - step) > kUniformTolerance * std::max(1.0, std::abs(step)))
      throw InvalidInputError(std::string("observation window ") + what + " are not uniformly spaced");
  }
}

double spacing(const std::vector<double>& v) { return v.size() > 1 ? v[1] - v[0] : 0.0; }

/// Fills `out` with exp(i * (phase0 + n * step)) for n = 0..size-1.
void phasor_ramp(double phase0, double step, std::size_t size, double* re, double* im) {
  double cr = 0.0, ci = 0.0, rr = std::cos(step), ri = std::sin(step);
  for (std::size_t n = 0; n < size; ++n) {
    if (n % kReanchorInterval == 0) {
      const double ph = phase0 + static_cast<double>(n) * step;
      cr = std::cos(ph);
      ci = std::sin(ph);
    } else {
      const double nr = cr * rr - ci * ri;
      const double ni = cr * ri + ci * rr;
      cr = nr;
      ci = ni;
    }
    re[n] = cr;
    im[n] = ci;
  }
}

/// Per-thread buffers for the correlation kernel.
struct Scratch {
  std::vector<double> br, bi, zr, zi, cr, ci;

  void resize(std::size_t nf, std::size_t nt) {
    br.resize(nf);
    bi.resize(nf);
    zr.resize(nt);
    zi.resize(nt);
    cr.resize(nt);
    ci.resize(nt);
  }
};

Vec3 geometry_position(const ObservationWindow& w, const Vec3& pos, const Vec3& vel) {
  if (w.reference() == GeometryReference::window_end) return pos;
  return pos - vel * w.reference_lag_s();
}

/// psi^H y for anchor m, computed as sum_n conj(c_n) (b^H y_n). Returns false
/// if the geometry is singular.
bool correlate(const ObservationWindow& w, std::size_t m, const Vec3& pos, const Vec3& vel,
               Scratch& s, cdouble& result) {
  const Vec3 los = w.anchors()[m] - pos;
  const double dist = los.norm();
  if (!(dist > 0.0) || !std::isfinite(dist)) return false;
  const double radial = los.dot(vel) / dist;

  const std::size_t nf = w.subcarrier_count();
  const std::size_t nt = w.snapshot_count();
  const auto& f = w.baseband_freqs();
  const auto& t = w.times();

  // conj(b_j) = exp(+i 2pi d f_j / c)
  const double tau = dist / kSpeedOfLight;
  phasor_ramp(kTwoPi * tau * f[0], kTwoPi * tau * spacing(f), nf, s.br.data(), s.bi.data());

  const double* yr = w.real_plane(m);
  const double* yi = w.imag_plane(m);
  double* zr = s.zr.data();
  double* zi = s.zi.data();
  std::fill(zr, zr + nt, 0.0);
  std::fill(zi, zi + nt, 0.0);
  for (std::size_t j = 0; j < nf; ++j) {
    const double br = s.br[j];
    const double bi = s.bi[j];
    const double* rr = yr + j * nt;
    const double* ri = yi + j * nt;
    for (std::size_t n = 0; n < nt; ++n) {
      zr[n] += br * rr[n] - bi * ri[n];
      zi[n] += br * ri[n] + bi * rr[n];
    }
  }

  // conj(c_n) = exp(-i 2pi f_D t_n)
  const double doppler = w.carrier_hz() / kSpeedOfLight * radial;
  phasor_ramp(-kTwoPi * doppler * t[0], -kTwoPi * doppler * spacing(t), nt, s.cr.data(),
              s.ci.data());
  double sr = 0.0, si = 0.0;
  for (std::size_t n = 0; n < nt; ++n) {
    sr += s.cr[n] * zr[n] - s.ci[n] * zi[n];
    si += s.cr[n] * zi[n] + s.ci[n] * zr[n];
  }
  result = cdouble(sr, si);
  return true;
}

double squared_magnitude(cdouble z) { return z.real() * z.real() + z.imag() * z.imag(); }

}  // namespace

ObservationWindow::ObservationWindow(std::vector<Eigen::MatrixXcd> blocks,
                                     std::vector<double> times,
                                     std::vector<double> baseband_freqs, double carrier_hz,
                                     std::vector<Vec3> anchors, GeometryReference reference)
    : blocks_(std::move(blocks)),
      times_(std::move(times)),
      freqs_(std::move(baseband_freqs)),
      carrier_hz_(carrier_hz),
      anchors_(std::move(anchors)),
      reference_(reference) {
  if (anchors_.empty()) throw InvalidInputError("observation window has no anchors");
  if (blocks_.size() != anchors_.size())
    throw InvalidInputError("observation window needs one block per anchor");
  require_uniform(times_, "times");
  require_uniform(freqs_, "frequencies");
  const auto nf = static_cast<Eigen::Index>(freqs_.size());
  const auto nt = static_cast<Eigen::Index>(times_.size());
  for (const auto& b : blocks_) {
    if (b.rows() != nf || b.cols() != nt)
      throw InvalidInputError("observation window blocks must be N_f x N_t");
  }

  if (reference_ == GeometryReference::window_center) {
    const double mean = std::accumulate(times_.begin(), times_.end(), 0.0) /
                        static_cast<double>(times_.size());
    reference_lag_s_ = times_.back() - mean;
  }

  const std::size_t plane = plane_size();
  re_.resize(plane * anchors_.size());
  im_.resize(plane * anchors_.size());
  energy_.resize(anchors_.size());
  for (std::size_t m = 0; m < anchors_.size(); ++m) {
    double e = 0.0;
    for (Eigen::Index j = 0; j < nf; ++j) {
      for (Eigen::Index n = 0; n < nt; ++n) {
        const cdouble v = blocks_[m](j, n);
        const std::size_t idx = m * plane + static_cast<std::size_t>(j * nt + n);
        re_[idx] = v.real();
        im_[idx] = v.imag();
        e += v.real() * v.real() + v.imag() * v.imag();
      }
    }
    energy_[m] = e;
  }
}

ObservationWindow ObservationWindow::from_dataset(const CsiDataset& data, std::size_t k_end,
                                                  const WindowOptions& options) {
  const CsiMeta& meta = data.meta();
  if (options.length == 0 || options.time_stride == 0 || options.subcarrier_stride == 0)
    throw InvalidInputError("window length and strides must be positive");
  if (k_end >= meta.step_count || k_end + 1 < options.length)
    throw InvalidInputError("window [" + std::to_string(static_cast<long long>(k_end + 1) -
                                                        static_cast<long long>(options.length)) +
                            ", " + std::to_string(k_end) + "] is outside the dataset");

  // newest snapshot always included
  std::vector<std::size_t> steps;
  for (std::size_t back = 0; back < options.length; back += options.time_stride)
    steps.push_back(k_end - back);
  std::reverse(steps.begin(), steps.end());

  const std::size_t nf_all = meta.subcarrier_count;
  const std::size_t sf = options.subcarrier_stride;
  std::vector<std::size_t> carriers;
  for (std::size_t j = ((nf_all - 1) / 2) % sf; j < nf_all; j += sf) carriers.push_back(j);

  const std::vector<double> all_freqs = meta.baseband_freqs();
  std::vector<double> freqs, times;
  for (std::size_t j : carriers) freqs.push_back(all_freqs[j]);
  for (std::size_t k : steps) times.push_back(meta.time(k));

  std::vector<Eigen::MatrixXcd> blocks(meta.anchor_count());
  for (std::size_t m = 0; m < meta.anchor_count(); ++m) {
    Eigen::MatrixXcd& b = blocks[m];
    b.resize(static_cast<Eigen::Index>(carriers.size()), static_cast<Eigen::Index>(steps.size()));
    for (std::size_t n = 0; n < steps.size(); ++n) {
      const auto snap = data.snapshot(steps[n], m);
      for (std::size_t j = 0; j < carriers.size(); ++j) {
        const cfloat v = snap[carriers[j]];
        b(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(n)) = cdouble(v.real(), v.imag());
      }
    }
  }
  return ObservationWindow(std::move(blocks), std::move(times), std::move(freqs),
                           meta.carrier_hz, meta.anchors, options.reference);
}

StateHypothesis StateHypothesis::from_vector(const StateVector& x) {
  StateHypothesis s;
  s.position = x.head<3>();
  s.velocity = x.segment<2>(3);
  s.noise_var = x[5];
  return s;
}

StateVector StateHypothesis::to_vector() const {
  StateVector x;
  x << position, velocity, noise_var;
  return x;
}

Eigen::VectorXcd delay_doppler_response(const StateHypothesis& state, const Vec3& anchor_pos,
                                        std::span<const double> baseband_freqs, double carrier_hz,
                                        std::span<const double> times) {
  const Eigen::VectorXcd b = delay_response(anchor_pos, state.position, baseband_freqs);
  const Eigen::VectorXcd c =
      doppler_response(anchor_pos, state.position, state.velocity3(), carrier_hz, times);
  const Eigen::Index nf = b.size();
  Eigen::VectorXcd psi(nf * c.size());
  for (Eigen::Index n = 0; n < c.size(); ++n) psi.segment(n * nf, nf) = b * c[n];
  return psi;
}

cdouble concentrate_amplitude(const Eigen::VectorXcd& y, const Eigen::VectorXcd& psi) {
  if (y.size() != psi.size()) throw InvalidInputError("y and psi lengths differ");
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) throw InvalidInputError("psi must be non-zero");
  return psi.dot(y) / norm2;  // Eigen's dot conjugates the first operand
}

double residual_energy(const Eigen::VectorXcd& y, const Eigen::VectorXcd& psi) {
  if (y.size() != psi.size()) throw InvalidInputError("y and psi lengths differ");
  const double norm2 = psi.squaredNorm();
  if (!(norm2 > 0.0)) throw InvalidInputError("psi must be non-zero");
  return std::max(0.0, y.squaredNorm() - std::norm(psi.dot(y)) / norm2);
}

LikelihoodResult profile_log_likelihood(const ObservationWindow& window,
                                        const StateHypothesis& state) {
  if (!(state.noise_var > 0.0)) throw InvalidInputError("noise variance must be positive");
  const std::size_t anchors = window.anchor_count();
  const double n = static_cast<double>(window.subcarrier_count() * window.snapshot_count());
  const Vec3 vel = state.velocity3();
  const Vec3 pos = geometry_position(window, state.position, vel);

  Scratch scratch;
  scratch.resize(window.subcarrier_count(), window.snapshot_count());
  LikelihoodResult r;
  r.residuals.resize(anchors);
  r.amplitudes.resize(anchors);
  double total = 0.0;
  for (std::size_t m = 0; m < anchors; ++m) {
    cdouble corr;
    if (!correlate(window, m, pos, vel, scratch, corr))
      throw GeometryError("state position coincides with anchor " + std::to_string(m));
    const double matched = squared_magnitude(corr) / n;
    r.residuals[m] = std::max(0.0, window.energy(m) - matched);
    r.amplitudes[m] = corr / n;
    total += r.residuals[m];
    if (window.energy(m) > 0.0) r.bartlett_score += matched / window.energy(m);
  }
  r.log_likelihood = -total / state.noise_var -
                     static_cast<double>(anchors) * n * std::log(kPi * state.noise_var);
  return r;
}

double bartlett_score(const ObservationWindow& window, const StateHypothesis& state) {
  const double n = static_cast<double>(window.subcarrier_count() * window.snapshot_count());
  const Vec3 vel = state.velocity3();
  const Vec3 pos = geometry_position(window, state.position, vel);
  Scratch scratch;
  scratch.resize(window.subcarrier_count(), window.snapshot_count());
  double score = 0.0;
  for (std::size_t m = 0; m < window.anchor_count(); ++m) {
    if (!(window.energy(m) > 0.0)) continue;
    cdouble corr;
    if (!correlate(window, m, pos, vel, scratch, corr))
      throw GeometryError("state position coincides with anchor " + std::to_string(m));
    score += squared_magnitude(corr) / (n * window.energy(m));
  }
  return score;
}

void evaluate_states(const ObservationWindow& window, std::span<const StateVector> states,
                     WeightingMode mode, double temperature, std::span<double> out) {
  if (out.size() != states.size()) throw InvalidInputError("output span size mismatch");
  const std::size_t anchors = window.anchor_count();
  const double n = static_cast<double>(window.subcarrier_count() * window.snapshot_count());
  const double dims = static_cast<double>(anchors) * n;
  const auto count = static_cast<std::int64_t>(states.size());
  constexpr double kNegInf = -std::numeric_limits<double>::infinity();

#pragma omp parallel
  {
    Scratch scratch;
    scratch.resize(window.subcarrier_count(), window.snapshot_count());
#pragma omp for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) {
      const StateVector& x = states[static_cast<std::size_t>(i)];
      const Vec3 vel(x[3], x[4], 0.0);
      const Vec3 pos = geometry_position(window, x.head<3>(), vel);
      const double var = x[5];
      double value = 0.0;
      bool valid = pos.allFinite() && vel.allFinite();
      if (mode == WeightingMode::likelihood && !(var > 0.0)) valid = false;
      double residual = 0.0, score = 0.0;
      for (std::size_t m = 0; m < anchors && valid; ++m) {
        if (mode == WeightingMode::bartlett && !(window.energy(m) > 0.0)) continue;
        cdouble corr;
        if (!correlate(window, m, pos, vel, scratch, corr)) {
          valid = false;
          break;
        }
        const double matched = squared_magnitude(corr) / n;
        if (mode == WeightingMode::likelihood)
          residual += std::max(0.0, window.energy(m) - matched);
        else
          score += matched / window.energy(m);
      }
      if (!valid)
        value = kNegInf;
      else if (mode == WeightingMode::likelihood)
        value = -residual / var - dims * std::log(kPi * var);
      else
        value = temperature * score;
      out[static_cast<std::size_t>(i)] = value;
    }
  }
}

}  // namespace ddtrack
