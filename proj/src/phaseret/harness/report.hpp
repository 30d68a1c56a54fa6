#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace phaseret::harness {

struct ResultRow {
  std::string dataset;
  std::string method;
  std::string arch;
  std::size_t train_size = 0;
  std::uint64_t seed = 0;
  double best_mse = 0.0;
  double median_se = 0.0;
  std::size_t epoch_of_best = 0;
  double seconds = 0.0;
  std::string status = "ok";
  double final_mse = 0.0;

  double best_mse_db() const;
  bool ok() const { return status == "ok"; }
};

using ResultsTable = std::vector<ResultRow>;

/// 10 log10(mse).
double to_db(double mse);

/// Header plus one line per row; numbers use 17 significant digits so the
/// file parses back to an identical table.
void write_results_csv(std::ostream& out, const ResultsTable& table);
void save_results_csv(const std::filesystem::path& path, const ResultsTable& table);
ResultsTable read_results_csv(std::istream& in);
ResultsTable load_results_csv(const std::filesystem::path& path);

/// Row equality treating NaN fields as equal to each other.
bool same_row(const ResultRow& a, const ResultRow& b);

/// One plotted point: best over seeds for a (method, arch, train size).
struct PlotPoint {
  std::string series;  // "method arch"
  std::size_t train_size = 0;
  double db = 0.0;
};

std::vector<PlotPoint> plot_points(const ResultsTable& table);

/// SVG line plot, x = training size (log scale), y = dB MSE, one series per
/// method/architecture. The plotted values are embedded as a CSV comment.
void write_results_svg(std::ostream& out, const ResultsTable& table, const std::string& title = "Test MSE");
void save_results_svg(const std::filesystem::path& path, const ResultsTable& table,
                      const std::string& title = "Test MSE");

/// Parses the data comment embedded by `write_results_svg`.
std::vector<PlotPoint> read_svg_data(std::istream& in);

struct HeatmapCell {
  std::size_t segments = 0;
  std::size_t roots = 0;  // per segment
  double best_mse = 0.0;  // minimum over runs
  std::size_t failures = 0;

  double best_mse_db() const;
};

using HeatmapTable = std::vector<HeatmapCell>;

void save_heatmap_csv(const std::filesystem::path& path, const HeatmapTable& table);
void write_heatmap_csv(std::ostream& out, const HeatmapTable& table);
HeatmapTable read_heatmap_csv(std::istream& in);
void save_heatmap_svg(const std::filesystem::path& path, const HeatmapTable& table);

}  // namespace phaseret::harness
