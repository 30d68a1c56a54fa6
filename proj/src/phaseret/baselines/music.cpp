#include "phaseret/baselines/music.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "phaseret/common/rng.hpp"
#include "phaseret/numerics/adam.hpp"

namespace phaseret::baselines {

Pseudospectrum music_pseudospectrum(const ComplexMatrix& signals, std::size_t p, std::size_t grid_size) {
  const auto m = static_cast<std::size_t>(signals.cols());
  require(signals.rows() >= 1, Errc::invalid_argument, "MUSIC needs at least one signal");
  require(p < m, Errc::invalid_argument,
          "MUSIC needs p < M (p = " + std::to_string(p) + ", M = " + std::to_string(m) + ")");
  require(p >= 1, Errc::invalid_argument, "MUSIC needs p >= 1");
  require(grid_size >= 3, Errc::invalid_argument, "MUSIC grid needs at least 3 points");
  require_finite(std::span<const Complex>(signals.data(), static_cast<std::size_t>(signals.size())), "MUSIC signals");

  const Eigen::MatrixXcd x = signals.transpose();  // M x N, one sample per column
  const Eigen::MatrixXcd r = x * x.adjoint() / static_cast<double>(signals.rows());
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(r);
  require(eig.info() == Eigen::Success, Errc::domain, "MUSIC eigendecomposition failed");
  // Eigenvalues ascend, so the noise subspace is the leading M - p columns.
  const Eigen::MatrixXcd noise = eig.eigenvectors().leftCols(static_cast<Eigen::Index>(m - p));

  Pseudospectrum out;
  out.grid.resize(grid_size);
  out.denominator.resize(grid_size);
  out.power.resize(grid_size);
  Eigen::VectorXcd e(static_cast<Eigen::Index>(m));
  for (std::size_t g = 0; g < grid_size; ++g) {
    const double w = 2.0 * std::numbers::pi * static_cast<double>(g) / static_cast<double>(grid_size);
    for (std::size_t k = 0; k < m; ++k) e(static_cast<Eigen::Index>(k)) = std::polar(1.0, static_cast<double>(k) * w);
    const double d2 = (noise.adjoint() * e).squaredNorm();
    out.grid[g] = w;
    out.denominator[g] = d2;
    out.power[g] = 1.0 / d2;
  }
  return out;
}

std::vector<std::size_t> find_peaks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> peaks;
  if (n < 3) return peaks;
  std::size_t i = 0;
  while (i < n) {
    std::size_t end = i;  // last index of the run of equal values starting at i
    while (end + 1 < n && values[end + 1] == values[i]) ++end;
    const double left = values[(i + n - 1) % n];
    const double right = values[(end + 1) % n];
    if (end - i + 1 < n && values[i] > left && values[i] > right) peaks.push_back(i);
    i = end + 1;
  }
  std::stable_sort(peaks.begin(), peaks.end(), [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return peaks;
}

std::vector<double> music_frequencies(const ComplexMatrix& signals, std::size_t p, std::size_t grid_size) {
  const Pseudospectrum spec = music_pseudospectrum(signals, p, grid_size);
  std::vector<std::size_t> chosen = find_peaks(spec.power);
  if (chosen.size() > p) chosen.resize(p);
  if (chosen.size() < p) {
    std::vector<std::size_t> order(grid_size);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return spec.power[a] > spec.power[b]; });
    for (std::size_t g : order) {
      if (chosen.size() == p) break;
      if (std::find(chosen.begin(), chosen.end(), g) == chosen.end()) chosen.push_back(g);
    }
  }
  std::vector<double> freqs(p);
  for (std::size_t i = 0; i < p; ++i) freqs[i] = spec.grid[chosen[i]];
  return freqs;
}

ComplexMatrix steering_matrix(std::span<const double> frequencies, std::size_t rows) {
  ComplexMatrix a(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(frequencies.size()));
  for (std::size_t k = 0; k < rows; ++k) {
    for (std::size_t i = 0; i < frequencies.size(); ++i) {
      a(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = std::polar(1.0, static_cast<double>(k) * frequencies[i]);
    }
  }
  return a;
}

namespace {

void check_retrieve_shapes(const ComplexMatrix& steering, std::span<const double> target) {
  require(static_cast<std::size_t>(steering.rows()) == target.size(), Errc::dimension_mismatch,
          "MUSIC: steering rows must equal the target length");
  require(steering.cols() >= 1, Errc::invalid_argument, "MUSIC: steering matrix has no columns");
}

// Loss and gradient for every column of `s` (p x R complex) at once.
Eigen::ArrayXd batch_loss(const Eigen::MatrixXcd& a, const Eigen::VectorXd& target, const Eigen::MatrixXcd& s,
                          Eigen::MatrixXcd* grad) {
  const Eigen::MatrixXcd y = a * s;
  const Eigen::ArrayXXd mag = y.cwiseAbs().array();
  const Eigen::ArrayXXd resid = mag.colwise() - target.array();
  if (grad != nullptr) {
    // dL/d conj(y) scaled so that grad = dL/dRe + j dL/dIm.
    const Eigen::ArrayXXd ratio = (mag > 0.0).select(2.0 * resid / mag, 0.0);
    const Eigen::MatrixXcd dy = (y.array() * ratio.cast<Complex>()).matrix();
    *grad = a.adjoint() * dy;
  }
  return resid.square().colwise().sum().transpose();
}

}  // namespace

double music_loss(const ComplexMatrix& steering, std::span<const double> target, std::span<const double> s,
                  std::vector<double>* grad) {
  check_retrieve_shapes(steering, target);
  const auto p = static_cast<std::size_t>(steering.cols());
  require(s.size() == 2 * p, Errc::dimension_mismatch, "MUSIC: amplitude vector must hold 2p reals");
  Eigen::MatrixXcd sv(static_cast<Eigen::Index>(p), 1);
  for (std::size_t i = 0; i < p; ++i) sv(static_cast<Eigen::Index>(i), 0) = {s[2 * i], s[2 * i + 1]};
  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(target.data(), static_cast<Eigen::Index>(target.size()));
  Eigen::MatrixXcd g;
  const Eigen::ArrayXd loss = batch_loss(steering, t, sv, grad != nullptr ? &g : nullptr);
  if (grad != nullptr) {
    grad->resize(2 * p);
    for (std::size_t i = 0; i < p; ++i) {
      (*grad)[2 * i] = g(static_cast<Eigen::Index>(i), 0).real();
      (*grad)[2 * i + 1] = g(static_cast<Eigen::Index>(i), 0).imag();
    }
  }
  return loss(0);
}

numerics::DiffTape music_loss_tape(const ComplexMatrix& steering, std::span<const double> target) {
  using numerics::CVar;
  using numerics::Var;
  check_retrieve_shapes(steering, target);
  numerics::DiffTape tape;
  const auto p = static_cast<std::size_t>(steering.cols());
  std::vector<CVar> s(p);
  for (std::size_t i = 0; i < p; ++i) s[i] = {{&tape, tape.param(2 * i)}, {&tape, tape.param(2 * i + 1)}};
  Var total{&tape, tape.constant(0.0)};
  for (std::size_t k = 0; k < target.size(); ++k) {
    CVar y{{&tape, tape.constant(0.0)}, {&tape, tape.constant(0.0)}};
    for (std::size_t i = 0; i < p; ++i) {
      const Complex c = steering(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i));
      y = y + CVar{{&tape, tape.constant(c.real())}, {&tape, tape.constant(c.imag())}} * s[i];
    }
    total = total + square(sqrt(norm(y)) + (-target[k]));
  }
  tape.set_output(total.id);
  return tape;
}

MusicFit music_retrieve(const ComplexMatrix& steering, std::span<const double> target,
                        const MusicRetrieveOptions& options) {
  check_retrieve_shapes(steering, target);
  require(options.restarts >= 1, Errc::invalid_argument, "MUSIC: restarts must be at least 1");
  require(options.learning_rate > 0.0, Errc::invalid_argument, "MUSIC: learning rate must be positive");
  require_finite(target, "MUSIC target");
  const auto p = static_cast<std::size_t>(steering.cols());
  const auto rows = static_cast<Eigen::Index>(p);
  const auto cols = static_cast<Eigen::Index>(options.restarts);
  const Eigen::MatrixXcd a = steering;
  const Eigen::VectorXd t = Eigen::Map<const Eigen::VectorXd>(target.data(), static_cast<Eigen::Index>(target.size()));

  // |A s|^2 sums to about M |s|^2, so this spreads the target energy over s.
  const double sigma = t.norm() / std::sqrt(static_cast<double>(2 * p * target.size()));
  Rng rng(options.seed);
  Eigen::MatrixXcd s(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) s(r, c) = {sigma * rng.normal(), sigma * rng.normal()};
  }

  // Each restart is an independent Adam run; one shared optimizer over the
  // stacked parameters is equivalent because Adam acts coordinate-wise.
  const std::size_t count = 2 * p * options.restarts;
  numerics::Adam adam(count, {.learning_rate = options.learning_rate});
  std::vector<double> flat(count);
  std::vector<double> flat_grad(count);
  Eigen::MatrixXcd grad;
  for (std::size_t epoch = 0; epoch < options.epochs; ++epoch) {
    batch_loss(a, t, s, &grad);
    std::size_t idx = 0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r) {
        flat[idx] = s(r, c).real();
        flat_grad[idx++] = grad(r, c).real();
        flat[idx] = s(r, c).imag();
        flat_grad[idx++] = grad(r, c).imag();
      }
    }
    adam.step(flat, flat_grad);
    idx = 0;
    for (Eigen::Index c = 0; c < cols; ++c) {
      for (Eigen::Index r = 0; r < rows; ++r, idx += 2) s(r, c) = {flat[idx], flat[idx + 1]};
    }
  }

  const Eigen::ArrayXd losses = batch_loss(a, t, s, nullptr);
  Eigen::Index best = 0;
  for (Eigen::Index c = 1; c < cols; ++c) {
    if (losses(c) < losses(best)) best = c;  // first minimum wins, NaN never does
  }
  MusicFit fit;
  fit.loss = losses(best);
  fit.amplitudes.assign(s.col(best).data(), s.col(best).data() + rows);
  const Eigen::VectorXcd y = a * s.col(best);
  fit.spectrum.assign(y.data(), y.data() + y.size());
  return fit;
}

MusicResult music_baseline(const MusicConfig& config, const datasets::SpectralDataset& train,
                           const datasets::SpectralDataset& test) {
  require(train.num_samples() >= 1 && test.num_samples() >= 1, Errc::invalid_argument,
          "MUSIC needs training and test samples");
  require(config.grid_factor >= 1, Errc::invalid_argument, "MUSIC grid factor must be positive");
  datasets::require_same_grid(train, test);
  const std::size_t n = train.num_freqs();
  MusicResult result;
  result.frequencies = music_frequencies(train.values, config.p, config.grid_factor * n);
  const ComplexMatrix a = steering_matrix(result.frequencies, n);

  std::size_t scored = test.num_samples();
  if (config.test_cap) scored = std::min(scored, *config.test_cap);
  require(scored >= 1, Errc::invalid_argument, "MUSIC test cap must be positive");
  result.sample_errors.resize(scored);
  std::vector<double> mags(n);
  for (std::size_t r = 0; r < scored; ++r) {
    const auto er = static_cast<Eigen::Index>(r);
    for (std::size_t i = 0; i < n; ++i) mags[i] = test.magnitudes(er, static_cast<Eigen::Index>(i));
    MusicRetrieveOptions opts = config.retrieve;
    opts.seed = mix_seed(config.retrieve.seed, r);
    const MusicFit fit = music_retrieve(a, mags, opts);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += std::norm(test.values(er, static_cast<Eigen::Index>(i)) - fit.spectrum[i]);
    result.sample_errors[r] = sum / static_cast<double>(n);
  }
  result.mse = std::accumulate(result.sample_errors.begin(), result.sample_errors.end(), 0.0) /
               static_cast<double>(scored);
  result.median_se = bpnn::median(result.sample_errors);
  return result;
}

}  // namespace phaseret::baselines
