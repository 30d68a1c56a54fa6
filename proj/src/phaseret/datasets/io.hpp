#pragma once

#include <filesystem>
#include <iosfwd>

#include "phaseret/datasets/dataset.hpp"

namespace phaseret::datasets {

enum class FileErrorKind { malformed_header, ragged_rows, non_monotone_grid, nan_entry, bad_number, no_samples };

/// Parse failure in a dataset file, tagged with what went wrong.
class DatasetFileError : public Error {
 public:
  DatasetFileError(FileErrorKind kind, const std::string& what) : Error(Errc::parse, what), kind_(kind) {}
  FileErrorKind kind() const noexcept { return kind_; }

 private:
  FileErrorKind kind_;
};

/// Canonical text format:
///   #freq: w_1,w_2,...,w_N
///   [meta_1,...,meta_k,]re_1,im_1,re_2,im_2,...,re_N,im_N
/// Blank lines and other lines starting with '#' are ignored. Metadata
/// names, when present, live in a sibling file with extension ".meta".
void write_dataset(std::ostream& out, const SpectralDataset& data);
SpectralDataset read_dataset(std::istream& in, const std::string& source = "<stream>");

void save_dataset(const std::filesystem::path& path, const SpectralDataset& data);
SpectralDataset load_spectral_file(const std::filesystem::path& path);

std::filesystem::path meta_path(const std::filesystem::path& data_path);

}  // namespace phaseret::datasets
