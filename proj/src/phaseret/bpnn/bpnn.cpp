#include "phaseret/bpnn/bpnn.hpp"

#include <cmath>
#include <string>

namespace phaseret::bpnn {

void BpnnConfig::validate() const {
  require(roots >= 1, Errc::invalid_argument, "BPNN needs at least one root per segment");
  require(segments >= 1, Errc::invalid_argument, "BPNN needs at least one segment");
  require(epochs >= 1, Errc::invalid_argument, "BPNN needs at least one epoch");
  require(dropout >= 0.0 && dropout < 1.0, Errc::invalid_argument, "dropout must lie in [0, 1)");
  require(learning_rate > 0.0, Errc::invalid_argument, "learning rate must be positive");
  require(eval_every >= 1, Errc::invalid_argument, "eval_every must be at least 1");
  for (std::size_t h : hidden) require(h >= 1, Errc::invalid_argument, "hidden widths must be positive");
}

BpnnLayout::BpnnLayout(std::span<const double> omegas_in, std::size_t roots_in, std::size_t segments_in)
    : roots(roots_in), segments(segments_in), omegas(omegas_in.begin(), omegas_in.end()) {
  boundaries = blaschke::equal_index_boundaries(omegas, segments);
  maps = blaschke::segment_maps(boundaries);
  const blaschke::SegmentedPhaseModel probe(boundaries, std::vector<blaschke::BlaschkePhaseModel>(segments));
  segment_of.resize(omegas.size());
  normalized.resize(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    segment_of[i] = probe.segment_of(omegas[i]);
    normalized[i] = maps[segment_of[i]](omegas[i]);
  }
}

std::vector<std::size_t> bpnn_widths(const BpnnConfig& config, std::size_t num_freqs) {
  std::vector<std::size_t> widths{num_freqs};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(config.segments * (2 * config.roots + 1));
  return widths;
}

blaschke::SegmentedPhaseModel phase_model_from_output(const BpnnLayout& layout, std::span<const double> output) {
  require(output.size() == layout.outputs(), Errc::dimension_mismatch,
          "network output has " + std::to_string(output.size()) + " values, layout needs " +
              std::to_string(layout.outputs()));
  std::vector<blaschke::BlaschkePhaseModel> models;
  models.reserve(layout.segments);
  for (std::size_t s = 0; s < layout.segments; ++s) {
    const double* block = output.data() + s * layout.block();
    std::vector<Complex> roots(layout.roots);
    for (std::size_t k = 0; k < layout.roots; ++k) roots[k] = {block[2 * k], block[2 * k + 1]};
    models.emplace_back(std::move(roots), block[2 * layout.roots], layout.maps[s]);
  }
  return {layout.boundaries, std::move(models)};
}

std::vector<Complex> bpnn_forward(const MlpParameters& params, std::span<const double> magnitudes,
                                  const BpnnLayout& layout) {
  require(magnitudes.size() == params.input_width(), Errc::dimension_mismatch,
          "BPNN expects " + std::to_string(params.input_width()) + " magnitudes, got " +
              std::to_string(magnitudes.size()));
  require(magnitudes.size() == layout.omegas.size(), Errc::dimension_mismatch, "magnitudes do not match the grid");
  const Matrix input = Eigen::Map<const RowVector>(magnitudes.data(), static_cast<Eigen::Index>(magnitudes.size()));
  const Matrix out = mlp_forward(params, input);
  const auto model = phase_model_from_output(layout, std::span<const double>(out.data(), static_cast<std::size_t>(out.size())));
  return blaschke::reconstruct(magnitudes, blaschke::eval_phase_segmented(model, layout.omegas));
}

double bpnn_loss(std::span<const Complex> predicted, std::span<const Complex> truth) {
  require(predicted.size() == truth.size(), Errc::dimension_mismatch, "loss: length mismatch");
  require(!truth.empty(), Errc::invalid_argument, "loss: empty spectrum");
  double sum = 0.0;
  for (std::size_t i = 0; i < truth.size(); ++i) sum += std::norm(truth[i] - predicted[i]);
  return sum / static_cast<double>(truth.size());
}

BpnnObjective::BpnnObjective(const BpnnLayout& layout, const datasets::SpectralDataset& data)
    : layout_(layout), data_(data) {
  require(data.omegas == layout.omegas, Errc::dimension_mismatch, "dataset grid does not match the BPNN layout");
}

double BpnnObjective::sample_loss(const Matrix& output, Eigen::Index row, Matrix* d_output, double grad_scale) const {
  const std::size_t n = layout_.omegas.size();
  const std::size_t m = layout_.roots;
  const double* o = output.data() + row * output.cols();
  double* g = d_output != nullptr ? d_output->data() + row * d_output->cols() : nullptr;
  // e^{j phi} per segment, hoisted out of the frequency loop.
  std::vector<Complex> phasors(layout_.segments);
  for (std::size_t s = 0; s < layout_.segments; ++s) phasors[s] = std::polar(1.0, o[s * layout_.block() + 2 * m]);
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t base = layout_.segment_of[i] * layout_.block();
    const double x = layout_.normalized[i];
    // prod_k u_k^2 / |u_k|^2 with u_k = jx - a_k, accumulated as one
    // numerator and one denominator. The products are spelled out because
    // std::complex multiplication carries NaN recovery code.
    double br = phasors[layout_.segment_of[i]].real();
    double bi = phasors[layout_.segment_of[i]].imag();
    double den = 1.0;
    for (std::size_t k = 0; k < m; ++k) {
      const double ur = -o[base + 2 * k];
      const double ui = x - o[base + 2 * k + 1];
      const double fr = ur * ur - ui * ui;
      const double fi = 2.0 * ur * ui;
      den *= ur * ur + ui * ui;
      const double t = br * fr - bi * fi;
      bi = br * fi + bi * fr;
      br = t;
      if (k % 8 == 7) {  // keep long products in range
        br /= den;
        bi /= den;
        den = 1.0;
      }
    }
    br /= den;
    bi /= den;
    const Complex f = data_.values(row, static_cast<Eigen::Index>(i));
    const double mag = data_.magnitudes(row, static_cast<Eigen::Index>(i));
    const Complex p{mag * br, mag * bi};
    const double er = f.real() - p.real();
    const double ei = f.imag() - p.imag();
    sum += er * er + ei * ei;
    if (g == nullptr) continue;
    // d|f - p|^2 / d(theta) where p = |f| e^{j theta}.
    const double g_theta = grad_scale * 2.0 * (f.real() * p.imag() - f.imag() * p.real());
    g[base + 2 * m] += g_theta;
    for (std::size_t k = 0; k < m; ++k) {
      const double re = o[base + 2 * k];
      const double v = x - o[base + 2 * k + 1];
      const double inv = 2.0 / (re * re + v * v);
      g[base + 2 * k] += g_theta * v * inv;
      g[base + 2 * k + 1] += g_theta * re * inv;
    }
  }
  return sum / static_cast<double>(n);
}

double BpnnObjective::loss(const Matrix& output, Matrix* d_output) const {
  require(static_cast<std::size_t>(output.rows()) == num_samples() &&
              static_cast<std::size_t>(output.cols()) == output_width(),
          Errc::dimension_mismatch, "BPNN objective got an output of the wrong shape");
  if (d_output != nullptr) d_output->setZero(output.rows(), output.cols());
  const double scale = 1.0 / (static_cast<double>(layout_.omegas.size()) * static_cast<double>(num_samples()));
  double total = 0.0;
  for (Eigen::Index r = 0; r < output.rows(); ++r) total += sample_loss(output, r, d_output, scale);
  return total / static_cast<double>(num_samples());
}

void BpnnObjective::sample_errors(const Matrix& output, std::vector<double>& out) const {
  require(static_cast<std::size_t>(output.rows()) == num_samples(), Errc::dimension_mismatch,
          "BPNN objective got an output of the wrong shape");
  out.resize(num_samples());
  for (Eigen::Index r = 0; r < output.rows(); ++r) out[static_cast<std::size_t>(r)] = sample_loss(output, r, nullptr, 0.0);
}

BpnnResult train_bpnn(const BpnnConfig& config, const datasets::SpectralDataset& train,
                      const datasets::SpectralDataset& test) {
  config.validate();
  require(train.num_samples() >= 1, Errc::invalid_argument, "BPNN needs at least one training sample");
  if (test.num_samples() > 0) datasets::require_same_grid(train, test);
  BpnnResult result{config, BpnnLayout(train.omegas, config.roots, config.segments), {}};
  const auto widths = bpnn_widths(config, train.num_freqs());
  MlpParameters init = init_mlp(widths, mix_seed(config.seed, 0), config.dropout);
  const BpnnObjective train_obj(result.layout, train);
  const TrainOptions options{config.epochs, config.learning_rate, config.seed, config.eval_every};
  if (test.num_samples() > 0) {
    const BpnnObjective test_obj(result.layout, test);
    result.training = train_network(std::move(init), train.magnitudes, train_obj, &test.magnitudes, &test_obj, options);
  } else {
    result.training = train_network(std::move(init), train.magnitudes, train_obj, nullptr, nullptr, options);
  }
  return result;
}

}  // namespace phaseret::bpnn
