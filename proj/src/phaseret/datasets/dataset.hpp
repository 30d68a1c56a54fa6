#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "phaseret/blaschke/blaschke.hpp"
#include "phaseret/numerics/linalg.hpp"

namespace phaseret::datasets {

/// Samples sharing one frequency grid. `magnitudes` is always |values|.
struct SpectralDataset {
  std::vector<double> omegas;
  ComplexMatrix values;  // samples x frequencies
  Matrix magnitudes;     // samples x frequencies
  std::vector<std::vector<double>> metadata;  // per sample, possibly empty
  std::vector<std::string> metadata_names;

  std::size_t num_samples() const { return static_cast<std::size_t>(values.rows()); }
  std::size_t num_freqs() const { return omegas.size(); }

  /// Builds a dataset from complex responses, deriving the magnitudes.
  static SpectralDataset from_values(std::vector<double> omegas, ComplexMatrix values,
                                     std::vector<std::vector<double>> metadata = {},
                                     std::vector<std::string> metadata_names = {});

  SpectralDataset subset(std::span<const std::size_t> rows) const;
  blaschke::ComplexSpectrum spectrum(std::size_t row) const;
};

/// Throws unless both datasets use exactly the same grid.
void require_same_grid(const SpectralDataset& a, const SpectralDataset& b);

struct DatasetSplit {
  SpectralDataset train;
  SpectralDataset test;
};

/// Uniform random split without replacement; deterministic given `seed`.
DatasetSplit split_dataset(const SpectralDataset& data, std::size_t n_train, std::uint64_t seed);

/// Indices chosen for the training part of `split_dataset`, in draw order.
std::vector<std::size_t> split_indices(std::size_t count, std::size_t n_train, std::uint64_t seed);

}  // namespace phaseret::datasets
