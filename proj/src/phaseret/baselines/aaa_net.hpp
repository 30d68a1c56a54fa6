#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "phaseret/baselines/aaa.hpp"
#include "phaseret/blaschke/blaschke.hpp"
#include "phaseret/bpnn/trainer.hpp"
#include "phaseret/datasets/dataset.hpp"

namespace phaseret::baselines {

/// Magnitude -> AAA parameters regression baseline.
///
/// Stage 1 fits AAA to each training sample's phase f/|f| at z = j x, where x
/// is the frequency mapped onto [-1, 1]. Stage 2 regresses the flattened fit
/// parameters from the magnitudes with an MLP. Stage 3 rebuilds test spectra
/// as |f| r(j x) from the predicted parameters.
struct AaaNetConfig {
  std::size_t max_support = 5;
  double tol = 1e-13;
  std::vector<std::size_t> hidden{64, 64};
  std::size_t epochs = 300;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  std::size_t eval_every = 1;

  void validate() const;
};

/// Per support point: x_j, Re w_j, Im w_j, Re f_j, Im f_j.
inline constexpr std::size_t kAaaValuesPerSupport = 5;

/// Flattens a fit into a fixed-width row. Weights are rotated so that the
/// first one is real and non-negative (the barycentric form is invariant to a
/// common weight factor). Missing supports are padded with zeros, and a zero
/// weight removes a support from the model.
std::vector<double> aaa_encode(const BarycentricModel& model, std::size_t max_support);
BarycentricModel aaa_decode(std::span<const double> row);

/// Stage 1 for every sample of `data`; one encoded row per sample.
Matrix aaa_encode_dataset(const datasets::SpectralDataset& data, const AaaNetConfig& config);

/// |f| r(j x) over the dataset grid for one encoded row.
std::vector<Complex> aaa_reconstruct(std::span<const double> row, std::span<const double> magnitudes,
                                     std::span<const double> normalized);

/// Scores encoded parameter rows by the spectrum they reconstruct. Evaluation
/// only: asking for a gradient is an error.
class AaaReconstructionObjective final : public bpnn::Objective {
 public:
  AaaReconstructionObjective(const datasets::SpectralDataset& data, std::size_t max_support);

  std::size_t num_samples() const override { return data_.num_samples(); }
  std::size_t output_width() const override { return width_; }
  double loss(const Matrix& output, Matrix* d_output) const override;
  void sample_errors(const Matrix& output, std::vector<double>& out) const override;

 private:
  const datasets::SpectralDataset& data_;
  std::size_t width_;
  std::vector<double> normalized_;
};

/// Mean squared error against fixed target rows.
class ParameterMseObjective final : public bpnn::Objective {
 public:
  explicit ParameterMseObjective(const Matrix& targets) : targets_(targets) {}

  std::size_t num_samples() const override { return static_cast<std::size_t>(targets_.rows()); }
  std::size_t output_width() const override { return static_cast<std::size_t>(targets_.cols()); }
  double loss(const Matrix& output, Matrix* d_output) const override;
  void sample_errors(const Matrix& output, std::vector<double>& out) const override;

 private:
  const Matrix& targets_;
};

struct AaaNetResult {
  bpnn::TrainResult training;   // test scores are reconstruction MSEs
  double stage1_train_mse = 0.0;  // AAA residual alone on the training samples
};

AaaNetResult aaa_network_pipeline(const AaaNetConfig& config, const datasets::SpectralDataset& train,
                                  const datasets::SpectralDataset& test);

}  // namespace phaseret::baselines
