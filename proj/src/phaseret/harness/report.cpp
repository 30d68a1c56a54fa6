#include "phaseret/harness/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "phaseret/common/error.hpp"

namespace phaseret::harness {

namespace {

constexpr const char* kCsvHeader =
    "dataset,method,arch,train_size,seed,best_mse,best_mse_db,median_se,epoch_of_best,seconds,status,final_mse";
constexpr const char* kHeatmapHeader = "segments,roots,total_roots,best_mse,best_mse_db,failures";
constexpr const char* kSvgDataOpen = "<!-- data";
constexpr const char* kSvgDataClose = "-->";

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// Commas and line breaks would break the column structure.
std::string clean_field(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    out.push_back(line.substr(start, comma == std::string::npos ? std::string::npos : comma - start));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (!out.empty() && !out.back().empty() && out.back().back() == '\r') out.back().pop_back();
  return out;
}

double parse_double(const std::string& s, const std::string& where) {
  if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
  if (s == "inf") return std::numeric_limits<double>::infinity();
  if (s == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc{} && ptr == s.data() + s.size() && !s.empty(), Errc::parse,
          where + ": not a number: '" + s + "'");
  return v;
}

template <class T>
T parse_uint(const std::string& s, const std::string& where) {
  T v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  require(ec == std::errc{} && ptr == s.data() + s.size() && !s.empty(), Errc::parse,
          where + ": not a non-negative integer: '" + s + "'");
  return v;
}

bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  require(static_cast<bool>(out), Errc::io, "cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  require(static_cast<bool>(out), Errc::io, "failed writing " + path.string());
}

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

}  // namespace

double to_db(double mse) { return 10.0 * std::log10(mse); }

double ResultRow::best_mse_db() const { return to_db(best_mse); }

double HeatmapCell::best_mse_db() const { return to_db(best_mse); }

void write_results_csv(std::ostream& out, const ResultsTable& table) {
  out << kCsvHeader << '\n';
  for (const ResultRow& r : table) {
    out << clean_field(r.dataset) << ',' << clean_field(r.method) << ',' << clean_field(r.arch) << ','
        << r.train_size << ',' << r.seed << ',' << num(r.best_mse) << ',' << num(r.best_mse_db()) << ','
        << num(r.median_se) << ',' << r.epoch_of_best << ',' << num(r.seconds) << ',' << clean_field(r.status) << ','
        << num(r.final_mse) << '\n';
  }
}

void save_results_csv(const std::filesystem::path& path, const ResultsTable& table) {
  require(!table.empty(), Errc::invalid_argument, "refusing to write an empty results table");
  auto out = open_out(path);
  write_results_csv(out, table);
  finish(out, path);
}

ResultsTable read_results_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)), Errc::parse, "results CSV is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  require(line == kCsvHeader, Errc::parse, "results CSV header mismatch: '" + line + "'");
  ResultsTable table;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    const std::string where = "results CSV line " + std::to_string(line_no);
    const auto f = split_csv(line);
    require(f.size() == 12, Errc::parse, where + ": expected 12 fields, found " + std::to_string(f.size()));
    ResultRow r;
    r.dataset = f[0];
    r.method = f[1];
    r.arch = f[2];
    r.train_size = parse_uint<std::size_t>(f[3], where);
    r.seed = parse_uint<std::uint64_t>(f[4], where);
    r.best_mse = parse_double(f[5], where);
    parse_double(f[6], where);  // derived column, recomputed on demand
    r.median_se = parse_double(f[7], where);
    r.epoch_of_best = parse_uint<std::size_t>(f[8], where);
    r.seconds = parse_double(f[9], where);
    r.status = f[10];
    r.final_mse = parse_double(f[11], where);
    table.push_back(std::move(r));
  }
  return table;
}

ResultsTable load_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  require(static_cast<bool>(in), Errc::io, "cannot open results file " + path.string());
  try {
    return read_results_csv(in);
  } catch (const Error& e) {
    fail(e.code(), path.string() + ": " + e.what());
  }
}

bool same_row(const ResultRow& a, const ResultRow& b) {
  return a.dataset == b.dataset && a.method == b.method && a.arch == b.arch && a.train_size == b.train_size &&
         a.seed == b.seed && same_double(a.best_mse, b.best_mse) && same_double(a.median_se, b.median_se) &&
         a.epoch_of_best == b.epoch_of_best && same_double(a.seconds, b.seconds) && a.status == b.status &&
         same_double(a.final_mse, b.final_mse);
}

std::vector<PlotPoint> plot_points(const ResultsTable& table) {
  // Keyed by series then size; series keep their first-appearance order.
  std::vector<std::string> order;
  std::map<std::string, std::map<std::size_t, double>> best;
  for (const ResultRow& r : table) {
    if (!r.ok() || !(r.best_mse > 0.0) || !std::isfinite(r.best_mse)) continue;
    const std::string series = r.method + " " + r.arch;
    auto [it, inserted] = best.try_emplace(series);
    if (inserted) order.push_back(series);
    auto [cell, fresh] = it->second.try_emplace(r.train_size, r.best_mse);
    if (!fresh) cell->second = std::min(cell->second, r.best_mse);
  }
  std::vector<PlotPoint> points;
  for (const std::string& s : order) {
    for (const auto& [size, mse] : best[s]) points.push_back({s, size, to_db(mse)});
  }
  return points;
}

void write_results_svg(std::ostream& out, const ResultsTable& table, const std::string& title) {
  require(!table.empty(), Errc::invalid_argument, "refusing to plot an empty results table");
  const std::vector<PlotPoint> points = plot_points(table);
  constexpr double W = 720, H = 480, L = 80, R = 220, T = 50, B = 60;
  const double pw = W - L - R, ph = H - T - B;

  double xmin = 1, xmax = 2, ymin = -1, ymax = 1;
  if (!points.empty()) {
    xmin = ymin = std::numeric_limits<double>::infinity();
    xmax = ymax = -std::numeric_limits<double>::infinity();
    for (const PlotPoint& p : points) {
      xmin = std::min(xmin, std::log10(static_cast<double>(p.train_size)));
      xmax = std::max(xmax, std::log10(static_cast<double>(p.train_size)));
      ymin = std::min(ymin, p.db);
      ymax = std::max(ymax, p.db);
    }
    if (xmax - xmin < 1e-9) {
      xmin -= 0.5;
      xmax += 0.5;
    }
    ymin = std::floor(ymin / 5.0) * 5.0;
    ymax = std::ceil(ymax / 5.0) * 5.0;
    if (ymax - ymin < 5.0) ymax = ymin + 5.0;
  }
  auto sx = [&](double size) { return L + (std::log10(size) - xmin) / (xmax - xmin) * pw; };
  auto sy = [&](double db) { return T + (ymax - db) / (ymax - ymin) * ph; };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" viewBox=\"0 0 " << W
      << ' ' << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << kSvgDataOpen << "\nseries,train_size,best_mse_db\n";
  for (const PlotPoint& p : points) out << p.series << ',' << p.train_size << ',' << num(p.db) << '\n';
  out << kSvgDataClose << '\n';
  out << "<rect x=\"0\" y=\"0\" width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << L + pw / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"15\">" << title << "</text>\n";
  out << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double db = ymin; db <= ymax + 1e-9; db += 5.0) {
    out << "<line x1=\"" << L << "\" x2=\"" << L + pw << "\" y1=\"" << sy(db) << "\" y2=\"" << sy(db)
        << "\" stroke=\"#ddd\"/>\n";
    out << "<text x=\"" << L - 8 << "\" y=\"" << sy(db) + 4 << "\" text-anchor=\"end\">" << short_num(db) << "</text>\n";
  }
  std::vector<std::size_t> sizes;
  for (const PlotPoint& p : points) sizes.push_back(p.train_size);
  std::sort(sizes.begin(), sizes.end());
  sizes.erase(std::unique(sizes.begin(), sizes.end()), sizes.end());
  for (std::size_t s : sizes) {
    const double x = sx(static_cast<double>(s));
    out << "<text x=\"" << x << "\" y=\"" << T + ph + 18 << "\" text-anchor=\"middle\">" << s << "</text>\n";
  }
  out << "<text x=\"" << L + pw / 2 << "\" y=\"" << H - 15 << "\" text-anchor=\"middle\">training set size</text>\n";
  out << "<text transform=\"translate(20," << T + ph / 2 << ") rotate(-90)\" text-anchor=\"middle\">test MSE (dB)</text>\n";

  std::size_t series_index = 0;
  for (std::size_t i = 0; i < points.size();) {
    std::size_t j = i;
    while (j < points.size() && points[j].series == points[i].series) ++j;
    const char* color = kPalette[series_index % std::size(kPalette)];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
    for (std::size_t k = i; k < j; ++k) {
      out << (k > i ? " " : "") << sx(static_cast<double>(points[k].train_size)) << ',' << sy(points[k].db);
    }
    out << "\"/>\n";
    for (std::size_t k = i; k < j; ++k) {
      out << "<circle cx=\"" << sx(static_cast<double>(points[k].train_size)) << "\" cy=\"" << sy(points[k].db)
          << "\" r=\"3\" fill=\"" << color << "\"/>\n";
    }
    const double ly = T + 10 + 18.0 * static_cast<double>(series_index);
    out << "<line x1=\"" << L + pw + 15 << "\" x2=\"" << L + pw + 35 << "\" y1=\"" << ly << "\" y2=\"" << ly
        << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << L + pw + 40 << "\" y=\"" << ly + 4 << "\">" << points[i].series << "</text>\n";
    ++series_index;
    i = j;
  }
  out << "</svg>\n";
}

void save_results_svg(const std::filesystem::path& path, const ResultsTable& table, const std::string& title) {
  require(!table.empty(), Errc::invalid_argument, "refusing to plot an empty results table");
  auto out = open_out(path);
  write_results_svg(out, table, title);
  finish(out, path);
}

std::vector<PlotPoint> read_svg_data(std::istream& in) {
  std::string line;
  bool inside = false;
  bool header = false;
  std::vector<PlotPoint> points;
  while (std::getline(in, line)) {
    if (!inside) {
      inside = line == kSvgDataOpen;
      continue;
    }
    if (line == kSvgDataClose) return points;
    if (!header) {
      header = true;
      continue;
    }
    const auto f = split_csv(line);
    require(f.size() == 3, Errc::parse, "SVG data comment: expected 3 fields");
    points.push_back({f[0], parse_uint<std::size_t>(f[1], "SVG data"), parse_double(f[2], "SVG data")});
  }
  fail(Errc::parse, "SVG has no complete data comment");
}

void write_heatmap_csv(std::ostream& out, const HeatmapTable& table) {
  out << kHeatmapHeader << '\n';
  for (const HeatmapCell& c : table) {
    out << c.segments << ',' << c.roots << ',' << c.segments * c.roots << ',' << num(c.best_mse) << ','
        << num(c.best_mse_db()) << ',' << c.failures << '\n';
  }
}

void save_heatmap_csv(const std::filesystem::path& path, const HeatmapTable& table) {
  require(!table.empty(), Errc::invalid_argument, "refusing to write an empty heatmap");
  auto out = open_out(path);
  write_heatmap_csv(out, table);
  finish(out, path);
}

HeatmapTable read_heatmap_csv(std::istream& in) {
  std::string line;
  require(static_cast<bool>(std::getline(in, line)) && line == kHeatmapHeader, Errc::parse, "heatmap CSV header mismatch");
  HeatmapTable table;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_csv(line);
    require(f.size() == 6, Errc::parse, "heatmap CSV: expected 6 fields");
    table.push_back({parse_uint<std::size_t>(f[0], "heatmap"), parse_uint<std::size_t>(f[1], "heatmap"),
                     parse_double(f[3], "heatmap"), parse_uint<std::size_t>(f[5], "heatmap")});
  }
  return table;
}

void save_heatmap_svg(const std::filesystem::path& path, const HeatmapTable& table) {
  require(!table.empty(), Errc::invalid_argument, "refusing to plot an empty heatmap");
  std::vector<std::size_t> segs, roots;
  for (const HeatmapCell& c : table) {
    segs.push_back(c.segments);
    roots.push_back(c.roots);
  }
  std::sort(segs.begin(), segs.end());
  segs.erase(std::unique(segs.begin(), segs.end()), segs.end());
  std::sort(roots.begin(), roots.end());
  roots.erase(std::unique(roots.begin(), roots.end()), roots.end());
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const HeatmapCell& c : table) {
    if (std::isfinite(c.best_mse_db())) {
      lo = std::min(lo, c.best_mse_db());
      hi = std::max(hi, c.best_mse_db());
    }
  }
  if (!(hi > lo)) hi = lo + 1.0;
  constexpr double cell = 48, L = 90, T = 50;
  const double W = L + cell * static_cast<double>(roots.size()) + 40;
  const double H = T + cell * static_cast<double>(segs.size()) + 60;
  auto out = open_out(path);
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
      << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  out << kSvgDataOpen << '\n';
  write_heatmap_csv(out, table);
  out << kSvgDataClose << '\n';
  out << "<rect width=\"" << W << "\" height=\"" << H << "\" fill=\"white\"/>\n";
  out << "<text x=\"" << W / 2 << "\" y=\"25\" text-anchor=\"middle\" font-size=\"14\">best test MSE (dB)</text>\n";
  for (const HeatmapCell& c : table) {
    const auto ci = static_cast<double>(std::find(roots.begin(), roots.end(), c.roots) - roots.begin());
    const auto ri = static_cast<double>(std::find(segs.begin(), segs.end(), c.segments) - segs.begin());
    const double db = c.best_mse_db();
    std::string fill = "#999";
    if (std::isfinite(db)) {
      const double t = (db - lo) / (hi - lo);  // 0 = best (dark), 1 = worst (light)
      const int shade = static_cast<int>(40 + 200 * t);
      char buf[16];
      std::snprintf(buf, sizeof buf, "#%02x%02xff", shade, shade);
      fill = buf;
    }
    out << "<rect x=\"" << L + ci * cell << "\" y=\"" << T + ri * cell << "\" width=\"" << cell << "\" height=\""
        << cell << "\" fill=\"" << fill << "\" stroke=\"white\"/>\n";
    out << "<text x=\"" << L + ci * cell + cell / 2 << "\" y=\"" << T + ri * cell + cell / 2 + 4
        << "\" text-anchor=\"middle\">" << (std::isfinite(db) ? short_num(std::round(db * 10) / 10) : "fail")
        << "</text>\n";
  }
  for (std::size_t i = 0; i < roots.size(); ++i) {
    out << "<text x=\"" << L + (static_cast<double>(i) + 0.5) * cell << "\" y=\"" << T - 6
        << "\" text-anchor=\"middle\">" << roots[i] << "</text>\n";
  }
  for (std::size_t i = 0; i < segs.size(); ++i) {
    out << "<text x=\"" << L - 8 << "\" y=\"" << T + (static_cast<double>(i) + 0.5) * cell + 4
        << "\" text-anchor=\"end\">" << segs[i] << "</text>\n";
  }
  out << "<text x=\"" << L + cell * static_cast<double>(roots.size()) / 2 << "\" y=\"" << H - 20
      << "\" text-anchor=\"middle\">roots per segment (columns) / segments (rows)</text>\n";
  out << "</svg>\n";
  finish(out, path);
}

}  // namespace phaseret::harness
