#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <vector>

#include "phaseret/bpnn/mlp.hpp"

namespace phaseret::bpnn {

/// Maps network outputs for a fixed set of samples to a loss.
class Objective {
 public:
  virtual ~Objective() = default;
  virtual std::size_t num_samples() const = 0;
  virtual std::size_t output_width() const = 0;
  /// Mean loss over samples; writes dLoss/doutput when `d_output` is non-null.
  virtual double loss(const Matrix& output, Matrix* d_output) const = 0;
  /// Each sample's own error, so that the mean of `out` equals `loss`.
  virtual void sample_errors(const Matrix& output, std::vector<double>& out) const = 0;
};

struct TrainOptions {
  std::size_t epochs = 6000;
  double learning_rate = 1e-3;
  std::uint64_t seed = 0;
  /// Score the evaluation set every this many epochs (the last epoch is always scored).
  std::size_t eval_every = 1;
};

struct TrainReport {
  std::vector<double> train_loss;        // per epoch, measured before that epoch's update
  std::vector<std::size_t> eval_epochs;  // 1-based epochs at which the evaluation set was scored
  std::vector<double> test_mse;          // aligned with eval_epochs
  double best_test_mse = std::numeric_limits<double>::infinity();
  std::size_t best_epoch = 0;
  double final_test_mse = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> best_sample_errors;
  double median_test_se = std::numeric_limits<double>::quiet_NaN();
  double seconds = 0.0;
};

struct TrainResult {
  TrainReport report;
  MlpParameters final_params;
  MlpParameters best_params;
};

/// Full-batch Adam on `train`, scoring `test` (when given) after each update.
/// Throws Errc::diverged on a non-finite training loss.
TrainResult train_network(MlpParameters init, const Matrix& train_inputs, const Objective& train,
                          const Matrix* test_inputs, const Objective* test, const TrainOptions& options);

double median(std::vector<double> values);

}  // namespace phaseret::bpnn
