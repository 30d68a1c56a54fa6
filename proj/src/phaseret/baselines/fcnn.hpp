#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "phaseret/bpnn/trainer.hpp"
#include "phaseret/datasets/dataset.hpp"

namespace phaseret::baselines {

/// Plain regression target: the network emits 2N reals read as
/// (Re f_1, Im f_1, ..., Re f_N, Im f_N) and is scored with the same loss as
/// the BPNN. Nothing ties the prediction's modulus to the input magnitudes.
class FcnnObjective final : public bpnn::Objective {
 public:
  explicit FcnnObjective(const datasets::SpectralDataset& data) : data_(data) {}

  std::size_t num_samples() const override { return data_.num_samples(); }
  std::size_t output_width() const override { return 2 * data_.num_freqs(); }
  double loss(const Matrix& output, Matrix* d_output) const override;
  void sample_errors(const Matrix& output, std::vector<double>& out) const override;

 private:
  const datasets::SpectralDataset& data_;
};

/// Interleaved network output as complex values.
std::vector<Complex> fcnn_decode(std::span<const double> output);

struct FcnnGrid {
  std::vector<std::size_t> widths{32, 64, 128, 256};
  std::vector<std::size_t> depths{1, 2, 3, 4};
  std::vector<double> dropouts{0.0, 0.05, 0.1, 0.15, 0.2};
  std::vector<double> learning_rates{1e-4, 5e-4, 1e-3, 5e-3, 1e-2};
  std::size_t seeds = 3;
  std::size_t epochs = 6000;
  std::size_t eval_every = 1;

  void validate() const;
};

/// One point of the grid.
struct FcnnRunSpec {
  std::size_t width = 0;
  std::size_t depth = 0;
  double dropout = 0.0;
  double learning_rate = 0.0;
  std::uint64_t seed = 0;

  std::string arch() const;  // e.g. "64x2"
};

struct FcnnRun {
  FcnnRunSpec spec;
  bool diverged = false;
  std::string error;
  bpnn::TrainReport report;
};

/// Enumerates the grid in a fixed order: width, depth, seed, dropout, rate.
/// Seeds are base_seed, base_seed + 1, ...
std::vector<FcnnRunSpec> fcnn_grid_runs(const FcnnGrid& grid, std::uint64_t base_seed);

/// Trains one grid point; divergence is captured in the returned run.
FcnnRun fcnn_train(const FcnnRunSpec& spec, const FcnnGrid& grid, const datasets::SpectralDataset& train,
                   const datasets::SpectralDataset& test);

/// Best run per (architecture, seed), taken over dropout and learning rate.
/// Order follows first appearance in `runs`. Groups where every run failed
/// yield the first failed run.
std::vector<FcnnRun> fcnn_best_per_arch_seed(const std::vector<FcnnRun>& runs);

struct FcnnSummary {
  std::vector<FcnnRun> runs;
  std::vector<FcnnRun> best_per_arch;  // best over seeds and training hyperparameters
  FcnnRun overall_best;
};

/// Serial sweep over the whole grid.
FcnnSummary fcnn_baseline(const FcnnGrid& grid, const datasets::SpectralDataset& train,
                          const datasets::SpectralDataset& test, std::uint64_t base_seed = 0);

}  // namespace phaseret::baselines
