#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "phaseret/common/rng.hpp"
#include "phaseret/numerics/linalg.hpp"

namespace phaseret::bpnn {

/// Fully-connected ReLU network stored as one flat parameter vector:
/// for each layer, the weight matrix (out x in, row-major) then its bias.
struct MlpParameters {
  std::vector<std::size_t> widths;
  double dropout = 0.0;
  AlignedVector values;

  MlpParameters() = default;
  MlpParameters(std::vector<std::size_t> widths, double dropout);

  std::size_t num_layers() const { return widths.size() - 1; }
  std::size_t input_width() const { return widths.front(); }
  std::size_t output_width() const { return widths.back(); }

  std::size_t weight_offset(std::size_t layer) const;
  std::size_t bias_offset(std::size_t layer) const { return weight_offset(layer) + widths[layer + 1] * widths[layer]; }

  static std::size_t count(std::span<const std::size_t> widths);
};

using ConstMatrixMap = Eigen::Map<const Matrix>;
using ConstRowMap = Eigen::Map<const RowVector>;

ConstMatrixMap weight(const MlpParameters& p, std::size_t layer);
ConstRowMap bias(const MlpParameters& p, std::size_t layer);

/// Kaiming-uniform weights (bound sqrt(6 / fan_in)) and biases uniform in
/// +-1/sqrt(fan_in). Deterministic given `seed`.
MlpParameters init_mlp(std::vector<std::size_t> widths, std::uint64_t seed, double dropout = 0.0);

/// Activations kept by a training-mode forward pass.
struct MlpTrace {
  std::vector<Matrix> inputs;  // inputs[l] feeds layer l (after dropout for l > 0)
  std::vector<Matrix> hidden;  // post-ReLU, pre-dropout output of hidden layer l
  std::vector<Matrix> masks;   // inverted-dropout scale per hidden unit; empty when dropout is off
};

/// Rows of `input` are samples. Dropout is applied to hidden activations only
/// when `dropout_rng` is non-null; `trace` is filled when non-null.
Matrix mlp_forward(const MlpParameters& p, const Matrix& input, MlpTrace* trace = nullptr, Rng* dropout_rng = nullptr);

/// Accumulates dLoss/dparams into `grad` (overwritten) given dLoss/doutput.
void mlp_backward(const MlpParameters& p, const MlpTrace& trace, const Matrix& d_output, std::span<double> grad);

}  // namespace phaseret::bpnn
