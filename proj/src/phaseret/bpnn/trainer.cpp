#include "phaseret/bpnn/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <string>

#include "phaseret/numerics/adam.hpp"

namespace phaseret::bpnn {

double median(std::vector<double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

TrainResult train_network(MlpParameters init, const Matrix& train_inputs, const Objective& train,
                          const Matrix* test_inputs, const Objective* test, const TrainOptions& options) {
  require(options.epochs >= 1, Errc::invalid_argument, "training needs at least one epoch");
  require(options.eval_every >= 1, Errc::invalid_argument, "eval_every must be at least 1");
  require(static_cast<std::size_t>(train_inputs.rows()) == train.num_samples() && train.num_samples() >= 1,
          Errc::dimension_mismatch, "training inputs and objective disagree on sample count");
  require(train.output_width() == init.output_width(), Errc::dimension_mismatch,
          "network output width does not match the objective");
  require((test_inputs == nullptr) == (test == nullptr), Errc::invalid_argument,
          "evaluation inputs and objective must be given together");

  const auto started = std::chrono::steady_clock::now();
  TrainResult result{{}, std::move(init), {}};
  MlpParameters& params = result.final_params;
  TrainReport& report = result.report;
  report.train_loss.reserve(options.epochs);

  numerics::Adam adam(params.values.size(), {.learning_rate = options.learning_rate});
  Rng dropout_rng(mix_seed(options.seed, 1));
  AlignedVector grad(params.values.size());
  MlpTrace trace;
  Matrix d_output;
  std::vector<double> errors;

  for (std::size_t epoch = 1; epoch <= options.epochs; ++epoch) {
    const Matrix out = mlp_forward(params, train_inputs, &trace, params.dropout > 0.0 ? &dropout_rng : nullptr);
    const double loss = train.loss(out, &d_output);
    if (!std::isfinite(loss)) {
      fail(Errc::diverged, "training diverged at epoch " + std::to_string(epoch));
    }
    report.train_loss.push_back(loss);
    mlp_backward(params, trace, d_output, grad);
    adam.step(params.values, grad);

    if (test != nullptr && (epoch % options.eval_every == 0 || epoch == options.epochs)) {
      const Matrix test_out = mlp_forward(params, *test_inputs);
      test->sample_errors(test_out, errors);
      const double mse = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
      report.eval_epochs.push_back(epoch);
      report.test_mse.push_back(mse);
      if (mse < report.best_test_mse) {
        report.best_test_mse = mse;
        report.best_epoch = epoch;
        report.best_sample_errors = errors;
        result.best_params = params;
      }
    }
  }

  if (test == nullptr) {
    result.best_params = params;
  } else {
    report.final_test_mse = report.test_mse.back();
    if (report.best_epoch == 0) {
      // Every evaluation was non-finite; keep the final state as "best".
      result.best_params = params;
    } else {
      report.median_test_se = median(report.best_sample_errors);
    }
  }
  report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace phaseret::bpnn
