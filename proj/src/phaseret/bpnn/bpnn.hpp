#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "phaseret/blaschke/blaschke.hpp"
#include "phaseret/bpnn/trainer.hpp"
#include "phaseret/datasets/dataset.hpp"

namespace phaseret::bpnn {

struct BpnnConfig {
  std::size_t roots = 4;     // per segment
  std::size_t segments = 1;  // 1 = plain BPNN
  std::vector<std::size_t> hidden{64, 64};
  double dropout = 0.0;
  double learning_rate = 1e-3;
  std::size_t epochs = 6000;
  std::uint64_t seed = 0;
  std::size_t eval_every = 1;

  void validate() const;
};

/// How network outputs map onto segment phase models for a fixed grid.
/// Each segment block is [Re a_1, Im a_1, ..., Re a_m, Im a_m, phi].
struct BpnnLayout {
  std::size_t roots = 0;
  std::size_t segments = 0;
  std::vector<double> omegas;
  std::vector<double> boundaries;
  std::vector<blaschke::FrequencyMap> maps;
  std::vector<std::size_t> segment_of;  // per frequency
  std::vector<double> normalized;       // per frequency, in its segment's [-1, 1]

  BpnnLayout(std::span<const double> omegas, std::size_t roots, std::size_t segments);

  std::size_t block() const { return 2 * roots + 1; }
  std::size_t outputs() const { return segments * block(); }
};

std::vector<std::size_t> bpnn_widths(const BpnnConfig& config, std::size_t num_freqs);

/// Builds the segment models described by one row of network output.
blaschke::SegmentedPhaseModel phase_model_from_output(const BpnnLayout& layout, std::span<const double> output);

/// Network forward pass, Blaschke phase evaluation, and reconstruction
/// with the input magnitudes.
std::vector<Complex> bpnn_forward(const MlpParameters& params, std::span<const double> magnitudes,
                                  const BpnnLayout& layout);

/// Mean squared complex modulus error (1/N) sum |truth - predicted|^2.
double bpnn_loss(std::span<const Complex> predicted, std::span<const Complex> truth);

/// Reconstruction loss of Blaschke-parametrized predictions against a dataset.
class BpnnObjective final : public Objective {
 public:
  BpnnObjective(const BpnnLayout& layout, const datasets::SpectralDataset& data);

  std::size_t num_samples() const override { return data_.num_samples(); }
  std::size_t output_width() const override { return layout_.outputs(); }
  double loss(const Matrix& output, Matrix* d_output) const override;
  void sample_errors(const Matrix& output, std::vector<double>& out) const override;

 private:
  double sample_loss(const Matrix& output, Eigen::Index row, Matrix* d_output, double grad_scale) const;

  const BpnnLayout& layout_;
  const datasets::SpectralDataset& data_;
};

struct BpnnResult {
  BpnnConfig config;
  BpnnLayout layout;
  TrainResult training;
};

/// Trains a (piecewise) BPNN. `test` may be empty of samples, in which case
/// no evaluation is recorded.
BpnnResult train_bpnn(const BpnnConfig& config, const datasets::SpectralDataset& train,
                      const datasets::SpectralDataset& test);

}  // namespace phaseret::bpnn
