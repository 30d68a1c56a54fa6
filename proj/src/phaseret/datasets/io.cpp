#include "phaseret/datasets/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace phaseret::datasets {

namespace {

constexpr std::string_view kHeader = "#freq:";

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    fields.push_back(trim(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start)));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return fields;
}

double parse_number(std::string_view field, const std::string& where) {
  if (!field.empty() && field.front() == '+') field.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size() || field.empty()) {
    throw DatasetFileError(FileErrorKind::bad_number, where + ": cannot parse number '" + std::string(field) + "'");
  }
  if (std::isnan(v)) throw DatasetFileError(FileErrorKind::nan_entry, where + ": NaN entry");
  if (!std::isfinite(v)) throw DatasetFileError(FileErrorKind::nan_entry, where + ": non-finite entry");
  return v;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

void write_dataset(std::ostream& out, const SpectralDataset& data) {
  out << kHeader << ' ';
  for (std::size_t i = 0; i < data.omegas.size(); ++i) out << (i ? "," : "") << fmt(data.omegas[i]);
  out << '\n';
  for (std::size_t r = 0; r < data.num_samples(); ++r) {
    bool first = true;
    if (!data.metadata.empty()) {
      for (double m : data.metadata[r]) {
        out << (first ? "" : ",") << fmt(m);
        first = false;
      }
    }
    for (std::size_t i = 0; i < data.num_freqs(); ++i) {
      const Complex v = data.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i));
      out << (first ? "" : ",") << fmt(v.real()) << ',' << fmt(v.imag());
      first = false;
    }
    out << '\n';
  }
}

SpectralDataset read_dataset(std::istream& in, const std::string& source) {
  std::vector<double> grid;
  bool have_header = false;
  std::optional<std::size_t> meta_count;
  std::vector<std::vector<double>> meta;
  std::vector<std::vector<Complex>> rows;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string where = source + ":" + std::to_string(line_no);
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (text.starts_with(kHeader)) {
      if (have_header) throw DatasetFileError(FileErrorKind::malformed_header, where + ": duplicate #freq: header");
      const std::string_view rest = trim(text.substr(kHeader.size()));
      if (rest.empty()) throw DatasetFileError(FileErrorKind::malformed_header, where + ": #freq: header has no values");
      for (std::string_view f : split_fields(rest)) grid.push_back(parse_number(f, where));
      for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) {
          throw DatasetFileError(FileErrorKind::non_monotone_grid,
                                 where + ": frequency grid is not strictly increasing at column " + std::to_string(i));
        }
      }
      have_header = true;
      continue;
    }
    if (text.front() == '#') continue;
    if (!have_header) {
      throw DatasetFileError(FileErrorKind::malformed_header, where + ": data before the #freq: header");
    }
    const auto fields = split_fields(text);
    const std::size_t n = grid.size();
    if (fields.size() < 2 * n) {
      throw DatasetFileError(FileErrorKind::ragged_rows, where + ": expected at least " + std::to_string(2 * n) +
                                                             " fields, found " + std::to_string(fields.size()));
    }
    const std::size_t k = fields.size() - 2 * n;
    if (meta_count && *meta_count != k) {
      throw DatasetFileError(FileErrorKind::ragged_rows, where + ": row has " + std::to_string(fields.size()) +
                                                             " fields, earlier rows had " +
                                                             std::to_string(*meta_count + 2 * n));
    }
    meta_count = k;
    std::vector<double> m(k);
    for (std::size_t j = 0; j < k; ++j) m[j] = parse_number(fields[j], where);
    std::vector<Complex> v(n);
    for (std::size_t i = 0; i < n; ++i) {
      v[i] = {parse_number(fields[k + 2 * i], where), parse_number(fields[k + 2 * i + 1], where)};
    }
    meta.push_back(std::move(m));
    rows.push_back(std::move(v));
  }
  if (!have_header) throw DatasetFileError(FileErrorKind::malformed_header, source + ": missing #freq: header");
  if (rows.empty()) throw DatasetFileError(FileErrorKind::no_samples, source + ": no samples");

  ComplexMatrix values(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(grid.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t i = 0; i < grid.size(); ++i) values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(i)) = rows[r][i];
  }
  if (meta_count.value_or(0) == 0) meta.clear();
  return SpectralDataset::from_values(std::move(grid), std::move(values), std::move(meta));
}

std::filesystem::path meta_path(const std::filesystem::path& data_path) {
  std::filesystem::path p = data_path;
  p.replace_extension(".meta");
  return p;
}

void save_dataset(const std::filesystem::path& path, const SpectralDataset& data) {
  {
    std::ofstream out(path);
    require(static_cast<bool>(out), Errc::io, "cannot open " + path.string() + " for writing");
    write_dataset(out, data);
    require(static_cast<bool>(out), Errc::io, "failed writing " + path.string());
  }
  if (!data.metadata_names.empty()) {
    std::ofstream meta(meta_path(path));
    require(static_cast<bool>(meta), Errc::io, "cannot open " + meta_path(path).string() + " for writing");
    for (std::size_t i = 0; i < data.metadata_names.size(); ++i) meta << (i ? "," : "") << data.metadata_names[i];
    meta << '\n';
  }
}

SpectralDataset load_spectral_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::io, "cannot open dataset file " + path.string());
  SpectralDataset data = read_dataset(in, path.string());
  const auto mp = meta_path(path);
  if (std::filesystem::exists(mp) && mp != path) {
    std::ifstream meta(mp);
    std::string line;
    while (std::getline(meta, line)) {
      const std::string_view text = trim(line);
      if (text.empty() || text.front() == '#') continue;
      for (std::string_view f : split_fields(text)) data.metadata_names.emplace_back(f);
      break;
    }
    const std::size_t k = data.metadata.empty() ? 0 : data.metadata.front().size();
    if (data.metadata_names.size() != k) {
      throw DatasetFileError(FileErrorKind::malformed_header,
                             mp.string() + ": names " + std::to_string(data.metadata_names.size()) +
                                 " metadata fields but rows carry " + std::to_string(k));
    }
  }
  return data;
}

}  // namespace phaseret::datasets
