#include "phaseret/baselines/fcnn.hpp"

#include <map>
#include <utility>

namespace phaseret::baselines {

namespace {

double sample_loss(const datasets::SpectralDataset& data, const Matrix& output, Eigen::Index row, double* grad,
                   double scale) {
  const std::size_t n = data.num_freqs();
  const double* o = output.data() + row * output.cols();
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const Complex f = data.values(row, static_cast<Eigen::Index>(i));
    const double dr = o[2 * i] - f.real();
    const double di = o[2 * i + 1] - f.imag();
    sum += dr * dr + di * di;
    if (grad != nullptr) {
      grad[2 * i] = scale * 2.0 * dr;
      grad[2 * i + 1] = scale * 2.0 * di;
    }
  }
  return sum / static_cast<double>(n);
}

bool better(const FcnnRun& a, const FcnnRun& b) {
  if (a.diverged != b.diverged) return !a.diverged;
  return a.report.best_test_mse < b.report.best_test_mse;
}

}  // namespace

double FcnnObjective::loss(const Matrix& output, Matrix* d_output) const {
  require(static_cast<std::size_t>(output.rows()) == num_samples() &&
              static_cast<std::size_t>(output.cols()) == output_width(),
          Errc::dimension_mismatch, "FCNN objective got an output of the wrong shape");
  if (d_output != nullptr) d_output->resize(output.rows(), output.cols());
  const double scale = 1.0 / (static_cast<double>(data_.num_freqs()) * static_cast<double>(num_samples()));
  double total = 0.0;
  for (Eigen::Index r = 0; r < output.rows(); ++r) {
    total += sample_loss(data_, output, r, d_output != nullptr ? d_output->data() + r * output.cols() : nullptr, scale);
  }
  return total / static_cast<double>(num_samples());
}

void FcnnObjective::sample_errors(const Matrix& output, std::vector<double>& out) const {
  require(static_cast<std::size_t>(output.rows()) == num_samples() &&
              static_cast<std::size_t>(output.cols()) == output_width(),
          Errc::dimension_mismatch, "FCNN objective got an output of the wrong shape");
  out.resize(num_samples());
  for (Eigen::Index r = 0; r < output.rows(); ++r) out[static_cast<std::size_t>(r)] = sample_loss(data_, output, r, nullptr, 0.0);
}

std::vector<Complex> fcnn_decode(std::span<const double> output) {
  require(output.size() % 2 == 0, Errc::dimension_mismatch, "FCNN output length must be even");
  std::vector<Complex> out(output.size() / 2);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {output[2 * i], output[2 * i + 1]};
  return out;
}

void FcnnGrid::validate() const {
  require(!widths.empty() && !depths.empty() && !dropouts.empty() && !learning_rates.empty(),
          Errc::invalid_argument, "FCNN grid axes must be nonempty");
  require(seeds >= 1, Errc::invalid_argument, "FCNN grid needs at least one seed");
  require(epochs >= 1, Errc::invalid_argument, "FCNN grid needs at least one epoch");
  require(eval_every >= 1, Errc::invalid_argument, "FCNN eval_every must be at least 1");
  for (std::size_t w : widths) require(w >= 1, Errc::invalid_argument, "FCNN widths must be positive");
  for (std::size_t d : depths) require(d >= 1, Errc::invalid_argument, "FCNN depths must be positive");
  for (double p : dropouts) require(p >= 0.0 && p < 1.0, Errc::invalid_argument, "FCNN dropout must lie in [0, 1)");
  for (double lr : learning_rates) require(lr > 0.0, Errc::invalid_argument, "FCNN learning rates must be positive");
}

std::string FcnnRunSpec::arch() const { return std::to_string(width) + "x" + std::to_string(depth); }

std::vector<FcnnRunSpec> fcnn_grid_runs(const FcnnGrid& grid, std::uint64_t base_seed) {
  grid.validate();
  std::vector<FcnnRunSpec> runs;
  for (std::size_t w : grid.widths) {
    for (std::size_t d : grid.depths) {
      for (std::size_t s = 0; s < grid.seeds; ++s) {
        for (double p : grid.dropouts) {
          for (double lr : grid.learning_rates) runs.push_back({w, d, p, lr, base_seed + s});
        }
      }
    }
  }
  return runs;
}

FcnnRun fcnn_train(const FcnnRunSpec& spec, const FcnnGrid& grid, const datasets::SpectralDataset& train,
                   const datasets::SpectralDataset& test) {
  require(train.num_samples() >= 1 && test.num_samples() >= 1, Errc::invalid_argument,
          "FCNN needs training and test samples");
  datasets::require_same_grid(train, test);
  std::vector<std::size_t> widths{train.num_freqs()};
  widths.insert(widths.end(), spec.depth, spec.width);
  widths.push_back(2 * train.num_freqs());
  const FcnnObjective train_obj(train);
  const FcnnObjective test_obj(test);
  FcnnRun run{spec, false, {}, {}};
  try {
    const bpnn::TrainOptions options{grid.epochs, spec.learning_rate, spec.seed, grid.eval_every};
    run.report = bpnn::train_network(bpnn::init_mlp(widths, mix_seed(spec.seed, 0), spec.dropout), train.magnitudes,
                                     train_obj, &test.magnitudes, &test_obj, options)
                     .report;
  } catch (const Error& e) {
    if (e.code() != Errc::diverged) throw;
    run.diverged = true;
    run.error = e.what();
  }
  return run;
}

std::vector<FcnnRun> fcnn_best_per_arch_seed(const std::vector<FcnnRun>& runs) {
  std::vector<FcnnRun> best;
  std::map<std::pair<std::string, std::uint64_t>, std::size_t> slot;
  for (const FcnnRun& run : runs) {
    const auto key = std::make_pair(run.spec.arch(), run.spec.seed);
    const auto it = slot.find(key);
    if (it == slot.end()) {
      slot.emplace(key, best.size());
      best.push_back(run);
    } else if (better(run, best[it->second])) {
      best[it->second] = run;
    }
  }
  return best;
}

FcnnSummary fcnn_baseline(const FcnnGrid& grid, const datasets::SpectralDataset& train,
                          const datasets::SpectralDataset& test, std::uint64_t base_seed) {
  FcnnSummary summary;
  for (const FcnnRunSpec& spec : fcnn_grid_runs(grid, base_seed)) summary.runs.push_back(fcnn_train(spec, grid, train, test));
  std::map<std::string, std::size_t> slot;
  for (const FcnnRun& run : summary.runs) {
    const auto it = slot.find(run.spec.arch());
    if (it == slot.end()) {
      slot.emplace(run.spec.arch(), summary.best_per_arch.size());
      summary.best_per_arch.push_back(run);
    } else if (better(run, summary.best_per_arch[it->second])) {
      summary.best_per_arch[it->second] = run;
    }
  }
  summary.overall_best = summary.best_per_arch.front();
  for (const FcnnRun& run : summary.best_per_arch) {
    if (better(run, summary.overall_best)) summary.overall_best = run;
  }
  return summary;
}

}  // namespace phaseret::baselines
