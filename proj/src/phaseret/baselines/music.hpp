#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "phaseret/bpnn/trainer.hpp"
#include "phaseret/datasets/dataset.hpp"
#include "phaseret/numerics/linalg.hpp"
#include "phaseret/numerics/tape.hpp"

namespace phaseret::baselines {

/// Pseudospectrum 1/d^2(w) with d^2 = sum_i |e(w)^H v_i|^2 over the noise
/// eigenvectors v_i of R = (1/N) X^T conj(X), e(w)_k = e^{j k w}, on
/// `grid_size` points w_g = 2 pi g / grid_size.
struct Pseudospectrum {
  std::vector<double> grid;
  std::vector<double> denominator;  // d^2
  std::vector<double> power;        // 1 / d^2
};

/// Rows of `signals` are samples of M points each.
Pseudospectrum music_pseudospectrum(const ComplexMatrix& signals, std::size_t p, std::size_t grid_size);

/// Strict local maxima on the circular grid; a flat top counts once, at its
/// lowest index. Sorted by descending height.
std::vector<std::size_t> find_peaks(std::span<const double> values);

/// The p dominant frequencies. If the pseudospectrum has fewer than p peaks,
/// the remaining slots take the highest grid points not already chosen.
std::vector<double> music_frequencies(const ComplexMatrix& signals, std::size_t p, std::size_t grid_size);

/// A_{k,i} = e^{j k w_i}, k = 0..rows-1.
ComplexMatrix steering_matrix(std::span<const double> frequencies, std::size_t rows);

struct MusicRetrieveOptions {
  std::size_t restarts = 1024;
  std::size_t epochs = 300;
  double learning_rate = 1e-2;
  std::uint64_t seed = 0;
};

struct MusicFit {
  std::vector<Complex> amplitudes;  // s of the best restart
  std::vector<Complex> spectrum;    // A s
  double loss = 0.0;                // || |A s| - target ||^2
};

/// Minimizes || |A s| - target ||^2 over complex s with Adam from `restarts`
/// random starts, all advanced together; returns the best final restart.
MusicFit music_retrieve(const ComplexMatrix& steering, std::span<const double> target,
                        const MusicRetrieveOptions& options = {});

/// Loss and gradient with respect to (Re s_1, Im s_1, ..., Re s_p, Im s_p).
double music_loss(const ComplexMatrix& steering, std::span<const double> target, std::span<const double> s,
                  std::vector<double>* grad);

/// Records the same loss on a tape with s as parameters 0..2p-1.
numerics::DiffTape music_loss_tape(const ComplexMatrix& steering, std::span<const double> target);

struct MusicConfig {
  std::size_t p = 4;
  std::size_t grid_factor = 10;  // pseudospectrum points per signal point
  MusicRetrieveOptions retrieve;
  std::optional<std::size_t> test_cap;  // score only the first test samples
};

struct MusicResult {
  std::vector<double> frequencies;
  std::vector<double> sample_errors;  // (1/N) sum |f - A s|^2 per scored test sample
  double mse = 0.0;
  double median_se = 0.0;
};

/// Frequencies from the training spectra, then per-test-sample amplitude fits.
MusicResult music_baseline(const MusicConfig& config, const datasets::SpectralDataset& train,
                           const datasets::SpectralDataset& test);

}  // namespace phaseret::baselines
