#include "phaseret/baselines/aaa_net.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "phaseret/bpnn/mlp.hpp"

namespace phaseret::baselines {

namespace {

std::vector<double> band_coordinates(std::span<const double> omegas) {
  const blaschke::FrequencyMap map(omegas.front(), omegas.back());
  std::vector<double> x(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) x[i] = map(omegas[i]);
  return x;
}

}  // namespace

void AaaNetConfig::validate() const {
  require(max_support >= 1, Errc::invalid_argument, "aaa-net: max_support must be at least 1");
  require(tol >= 0.0, Errc::invalid_argument, "aaa-net: tolerance must be non-negative");
  require(epochs >= 1, Errc::invalid_argument, "aaa-net: needs at least one epoch");
  require(learning_rate > 0.0, Errc::invalid_argument, "aaa-net: learning rate must be positive");
  require(eval_every >= 1, Errc::invalid_argument, "aaa-net: eval_every must be at least 1");
}

std::vector<double> aaa_encode(const BarycentricModel& model, std::size_t max_support) {
  require(model.size() <= max_support, Errc::invalid_argument, "aaa_encode: model has more supports than the row");
  std::vector<double> row(max_support * kAaaValuesPerSupport, 0.0);
  Complex rotate{1.0, 0.0};
  if (model.size() > 0 && std::abs(model.weights[0]) > 0.0) rotate = std::conj(model.weights[0]) / std::abs(model.weights[0]);
  for (std::size_t j = 0; j < model.size(); ++j) {
    const Complex w = model.weights[j] * rotate;
    double* e = row.data() + j * kAaaValuesPerSupport;
    e[0] = model.support[j].imag();
    e[1] = w.real();
    e[2] = j == 0 ? 0.0 : w.imag();  // exactly real after rotation
    e[3] = model.values[j].real();
    e[4] = model.values[j].imag();
  }
  return row;
}

BarycentricModel aaa_decode(std::span<const double> row) {
  require(row.size() % kAaaValuesPerSupport == 0 && !row.empty(), Errc::dimension_mismatch,
          "aaa_decode: row length must be a positive multiple of 5");
  BarycentricModel model;
  for (std::size_t j = 0; j < row.size() / kAaaValuesPerSupport; ++j) {
    const double* e = row.data() + j * kAaaValuesPerSupport;
    model.support.emplace_back(0.0, e[0]);
    model.weights.emplace_back(e[1], e[2]);
    model.values.emplace_back(e[3], e[4]);
  }
  return model;
}

Matrix aaa_encode_dataset(const datasets::SpectralDataset& data, const AaaNetConfig& config) {
  const std::vector<double> x = band_coordinates(data.omegas);
  std::vector<Complex> points(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) points[i] = {0.0, x[i]};
  Matrix rows(static_cast<Eigen::Index>(data.num_samples()),
              static_cast<Eigen::Index>(config.max_support * kAaaValuesPerSupport));
  std::vector<Complex> phase(x.size());
  for (std::size_t r = 0; r < data.num_samples(); ++r) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const Complex v = data.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
      const double mag = std::abs(v);
      phase[i] = mag > 0.0 ? v / mag : Complex{1.0, 0.0};
    }
    const AaaResult fit = aaa_fit(points, phase, config.max_support, config.tol);
    const std::vector<double> row = aaa_encode(fit.model, config.max_support);
    rows.row(static_cast<Eigen::Index>(r)) = Eigen::Map<const RowVector>(row.data(), static_cast<Eigen::Index>(row.size()));
  }
  return rows;
}

std::vector<Complex> aaa_reconstruct(std::span<const double> row, std::span<const double> magnitudes,
                                     std::span<const double> normalized) {
  require(magnitudes.size() == normalized.size(), Errc::dimension_mismatch, "aaa_reconstruct: grid mismatch");
  const BarycentricModel model = aaa_decode(row);
  std::vector<Complex> out(magnitudes.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = magnitudes[i] * model(Complex{0.0, normalized[i]});
  return out;
}

AaaReconstructionObjective::AaaReconstructionObjective(const datasets::SpectralDataset& data, std::size_t max_support)
    : data_(data), width_(max_support * kAaaValuesPerSupport), normalized_(band_coordinates(data.omegas)) {}

double AaaReconstructionObjective::loss(const Matrix& output, Matrix* d_output) const {
  require(d_output == nullptr, Errc::invalid_argument, "AAA reconstruction objective has no gradient");
  std::vector<double> errors;
  sample_errors(output, errors);
  return std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
}

void AaaReconstructionObjective::sample_errors(const Matrix& output, std::vector<double>& out) const {
  require(static_cast<std::size_t>(output.rows()) == num_samples() &&
              static_cast<std::size_t>(output.cols()) == width_,
          Errc::dimension_mismatch, "AAA reconstruction objective got an output of the wrong shape");
  out.resize(num_samples());
  const std::size_t n = data_.num_freqs();
  std::vector<double> mags(n);
  for (std::size_t r = 0; r < num_samples(); ++r) {
    const auto er = static_cast<Eigen::Index>(r);
    for (std::size_t i = 0; i < n; ++i) mags[i] = data_.magnitudes(er, static_cast<Eigen::Index>(i));
    const auto rec = aaa_reconstruct(std::span<const double>(output.data() + er * output.cols(), width_), mags, normalized_);
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum += std::norm(data_.values(er, static_cast<Eigen::Index>(i)) - rec[i]);
    out[r] = sum / static_cast<double>(n);
  }
}

double ParameterMseObjective::loss(const Matrix& output, Matrix* d_output) const {
  require(output.rows() == targets_.rows() && output.cols() == targets_.cols(), Errc::dimension_mismatch,
          "parameter objective got an output of the wrong shape");
  const Matrix diff = output - targets_;
  const double count = static_cast<double>(diff.size());
  if (d_output != nullptr) *d_output = (2.0 / count) * diff;
  return diff.squaredNorm() / count;
}

void ParameterMseObjective::sample_errors(const Matrix& output, std::vector<double>& out) const {
  require(output.rows() == targets_.rows() && output.cols() == targets_.cols(), Errc::dimension_mismatch,
          "parameter objective got an output of the wrong shape");
  out.resize(num_samples());
  for (Eigen::Index r = 0; r < output.rows(); ++r) {
    out[static_cast<std::size_t>(r)] = (output.row(r) - targets_.row(r)).squaredNorm() / static_cast<double>(output.cols());
  }
}

AaaNetResult aaa_network_pipeline(const AaaNetConfig& config, const datasets::SpectralDataset& train,
                                  const datasets::SpectralDataset& test) {
  config.validate();
  require(train.num_samples() >= 1, Errc::invalid_argument, "aaa-net needs at least one training sample");
  require(test.num_samples() >= 1, Errc::invalid_argument, "aaa-net needs at least one test sample");
  datasets::require_same_grid(train, test);

  AaaNetResult result;
  const Matrix targets = aaa_encode_dataset(train, config);
  const AaaReconstructionObjective train_rec(train, config.max_support);
  result.stage1_train_mse = train_rec.loss(targets, nullptr);

  std::vector<std::size_t> widths{train.num_freqs()};
  widths.insert(widths.end(), config.hidden.begin(), config.hidden.end());
  widths.push_back(config.max_support * kAaaValuesPerSupport);
  const ParameterMseObjective fit(targets);
  const AaaReconstructionObjective test_rec(test, config.max_support);
  const bpnn::TrainOptions options{config.epochs, config.learning_rate, config.seed, config.eval_every};
  result.training = bpnn::train_network(bpnn::init_mlp(widths, mix_seed(config.seed, 0)), train.magnitudes, fit,
                                        &test.magnitudes, &test_rec, options);
  return result;
}

}  // namespace phaseret::baselines
