#include "phaseret/datasets/dataset.hpp"

#include <algorithm>
#include <numeric>

#include "phaseret/common/rng.hpp"

namespace phaseret::datasets {

SpectralDataset SpectralDataset::from_values(std::vector<double> omegas, ComplexMatrix values,
                                             std::vector<std::vector<double>> metadata,
                                             std::vector<std::string> metadata_names) {
  require(static_cast<std::size_t>(values.cols()) == omegas.size(), Errc::dimension_mismatch,
          "dataset values have " + std::to_string(values.cols()) + " columns for a grid of " +
              std::to_string(omegas.size()));
  blaschke::require_strictly_increasing(omegas, "dataset grid");
  require(metadata.empty() || metadata.size() == static_cast<std::size_t>(values.rows()), Errc::dimension_mismatch,
          "metadata rows do not match sample count");
  for (Eigen::Index r = 0; r < values.rows(); ++r) {
    for (Eigen::Index c = 0; c < values.cols(); ++c) require_finite(values(r, c), "dataset values");
  }
  SpectralDataset d;
  d.omegas = std::move(omegas);
  d.magnitudes = values.cwiseAbs();
  d.values = std::move(values);
  d.metadata = std::move(metadata);
  d.metadata_names = std::move(metadata_names);
  return d;
}

SpectralDataset SpectralDataset::subset(std::span<const std::size_t> rows) const {
  SpectralDataset d;
  d.omegas = omegas;
  d.metadata_names = metadata_names;
  d.values.resize(static_cast<Eigen::Index>(rows.size()), values.cols());
  d.magnitudes.resize(static_cast<Eigen::Index>(rows.size()), magnitudes.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    require(rows[i] < num_samples(), Errc::invalid_argument, "subset row out of range");
    const auto r = static_cast<Eigen::Index>(rows[i]);
    d.values.row(static_cast<Eigen::Index>(i)) = values.row(r);
    d.magnitudes.row(static_cast<Eigen::Index>(i)) = magnitudes.row(r);
    if (!metadata.empty()) d.metadata.push_back(metadata[rows[i]]);
  }
  return d;
}

blaschke::ComplexSpectrum SpectralDataset::spectrum(std::size_t row) const {
  require(row < num_samples(), Errc::invalid_argument, "spectrum row out of range");
  const auto r = static_cast<Eigen::Index>(row);
  std::vector<Complex> v(values.cols());
  for (Eigen::Index c = 0; c < values.cols(); ++c) v[static_cast<std::size_t>(c)] = values(r, c);
  return {omegas, std::move(v)};
}

void require_same_grid(const SpectralDataset& a, const SpectralDataset& b) {
  require(a.omegas == b.omegas, Errc::dimension_mismatch, "datasets do not share a frequency grid");
}

std::vector<std::size_t> split_indices(std::size_t count, std::size_t n_train, std::uint64_t seed) {
  require(n_train >= 1, Errc::invalid_argument, "split needs at least one training sample");
  require(n_train < count, Errc::invalid_argument,
          "split asks for " + std::to_string(n_train) + " training samples out of " + std::to_string(count));
  std::vector<std::size_t> perm(count);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(seed);
  // Partial Fisher-Yates: the first n_train slots are a uniform draw without replacement.
  for (std::size_t i = 0; i < n_train; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(count - i));
    std::swap(perm[i], perm[j]);
  }
  perm.resize(n_train);
  return perm;
}

DatasetSplit split_dataset(const SpectralDataset& data, std::size_t n_train, std::uint64_t seed) {
  const auto train_rows = split_indices(data.num_samples(), n_train, seed);
  std::vector<bool> taken(data.num_samples(), false);
  for (std::size_t r : train_rows) taken[r] = true;
  std::vector<std::size_t> test_rows;
  for (std::size_t r = 0; r < data.num_samples(); ++r) {
    if (!taken[r]) test_rows.push_back(r);
  }
  return {data.subset(train_rows), data.subset(test_rows)};
}

}  // namespace phaseret::datasets
