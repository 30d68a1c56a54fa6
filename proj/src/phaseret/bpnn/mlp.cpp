#include "phaseret/bpnn/mlp.hpp"

#include <cmath>
#include <string>

namespace phaseret::bpnn {

MlpParameters::MlpParameters(std::vector<std::size_t> widths_in, double dropout_in)
    : widths(std::move(widths_in)), dropout(dropout_in) {
  require(widths.size() >= 2, Errc::invalid_argument, "an MLP needs input and output widths");
  for (std::size_t w : widths) require(w >= 1, Errc::invalid_argument, "MLP layer widths must be positive");
  require(dropout >= 0.0 && dropout < 1.0, Errc::invalid_argument, "dropout must lie in [0, 1)");
  values.assign(count(widths), 0.0);
}

std::size_t MlpParameters::count(std::span<const std::size_t> widths) {
  std::size_t n = 0;
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) n += widths[l + 1] * widths[l] + widths[l + 1];
  return n;
}

std::size_t MlpParameters::weight_offset(std::size_t layer) const {
  std::size_t off = 0;
  for (std::size_t l = 0; l < layer; ++l) off += widths[l + 1] * widths[l] + widths[l + 1];
  return off;
}

ConstMatrixMap weight(const MlpParameters& p, std::size_t layer) {
  return ConstMatrixMap(p.values.data() + p.weight_offset(layer), static_cast<Eigen::Index>(p.widths[layer + 1]),
                        static_cast<Eigen::Index>(p.widths[layer]));
}

ConstRowMap bias(const MlpParameters& p, std::size_t layer) {
  return ConstRowMap(p.values.data() + p.bias_offset(layer), static_cast<Eigen::Index>(p.widths[layer + 1]));
}

MlpParameters init_mlp(std::vector<std::size_t> widths, std::uint64_t seed, double dropout) {
  require(!widths.empty(), Errc::invalid_argument, "init_mlp needs layer widths");
  MlpParameters p(std::move(widths), dropout);
  Rng rng(seed);
  for (std::size_t l = 0; l < p.num_layers(); ++l) {
    const double fan_in = static_cast<double>(p.widths[l]);
    const double w_bound = std::sqrt(6.0 / fan_in);
    const double b_bound = 1.0 / std::sqrt(fan_in);
    double* w = p.values.data() + p.weight_offset(l);
    for (std::size_t i = 0; i < p.widths[l + 1] * p.widths[l]; ++i) w[i] = rng.uniform(-w_bound, w_bound);
    double* b = p.values.data() + p.bias_offset(l);
    for (std::size_t i = 0; i < p.widths[l + 1]; ++i) b[i] = rng.uniform(-b_bound, b_bound);
  }
  return p;
}

Matrix mlp_forward(const MlpParameters& p, const Matrix& input, MlpTrace* trace, Rng* dropout_rng) {
  require(static_cast<std::size_t>(input.cols()) == p.input_width(), Errc::dimension_mismatch,
          "network expects " + std::to_string(p.input_width()) + " inputs, got " + std::to_string(input.cols()));
  const bool use_dropout = dropout_rng != nullptr && p.dropout > 0.0;
  if (trace != nullptr) {
    trace->inputs.clear();
    trace->hidden.clear();
    trace->masks.clear();
    trace->inputs.push_back(input);
  }
  Matrix a = input;
  for (std::size_t l = 0; l < p.num_layers(); ++l) {
    Matrix z = a * weight(p, l).transpose();
    z.rowwise() += bias(p, l);
    if (l + 1 == p.num_layers()) return z;
    z = z.cwiseMax(0.0);
    if (trace != nullptr) trace->hidden.push_back(z);
    if (use_dropout) {
      const double keep = 1.0 - p.dropout;
      Matrix mask(z.rows(), z.cols());
      for (Eigen::Index i = 0; i < mask.size(); ++i) mask.data()[i] = dropout_rng->uniform() < keep ? 1.0 / keep : 0.0;
      z = z.cwiseProduct(mask);
      if (trace != nullptr) trace->masks.push_back(std::move(mask));
    }
    if (trace != nullptr) trace->inputs.push_back(z);
    a = std::move(z);
  }
  return a;
}

void mlp_backward(const MlpParameters& p, const MlpTrace& trace, const Matrix& d_output, std::span<double> grad) {
  require(grad.size() == p.values.size(), Errc::dimension_mismatch, "gradient buffer has the wrong size");
  require(trace.inputs.size() == p.num_layers(), Errc::not_ready, "MLP backward needs a traced forward pass");
  Matrix dz = d_output;
  for (std::size_t l = p.num_layers(); l-- > 0;) {
    const auto rows = static_cast<Eigen::Index>(p.widths[l + 1]);
    const auto cols = static_cast<Eigen::Index>(p.widths[l]);
    Eigen::Map<Matrix> gw(grad.data() + p.weight_offset(l), rows, cols);
    Eigen::Map<RowVector> gb(grad.data() + p.bias_offset(l), rows);
    gw.noalias() = dz.transpose() * trace.inputs[l];
    gb = dz.colwise().sum();
    if (l == 0) break;
    Matrix da = dz * weight(p, l);
    if (!trace.masks.empty()) da = da.cwiseProduct(trace.masks[l - 1]);
    const Matrix& h = trace.hidden[l - 1];
    dz = (h.array() > 0.0).select(da, 0.0);
  }
}

}  // namespace phaseret::bpnn
