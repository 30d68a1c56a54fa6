#include <doctest.h>

#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <set>
#include <sstream>

#include "phaseret/harness/config.hpp"
#include "phaseret/harness/experiment.hpp"
#include "phaseret/harness/report.hpp"

using namespace phaseret;
using namespace phaseret::harness;

namespace {

ResultRow row(std::string method, std::size_t size, std::uint64_t seed, double mse) {
  ResultRow r;
  r.dataset = "ode";
  r.method = std::move(method);
  r.arch = "m4-64x64";
  r.train_size = size;
  r.seed = seed;
  r.best_mse = mse;
  r.median_se = mse / 2;
  r.epoch_of_best = 7;
  r.final_mse = mse * 1.5;
  return r;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

const char* kTinyConfig = R"({
  "dataset": {"generator": "ode", "n_train": 6, "n_test": 4, "n_freq": 12},
  "train_sizes": [2, 4],
  "methods": ["bpnn", "kk", "linear-bp", "fcnn-grid"],
  "seeds": 2,
  "seed": 5,
  "bpnn": {"hidden": [8], "epochs": 15},
  "linear_bp": {"epochs": 15},
  "fcnn": {"widths": [8], "depths": [1], "dropouts": [0.0], "learning_rates": [1e-3], "epochs": 15}
})";

}  // namespace

TEST_CASE("method names round trip") {
  for (Method m : {Method::bpnn, Method::piecewise_bpnn, Method::fcnn_grid, Method::kk, Method::aaa_net, Method::music,
                   Method::linear_bp}) {
    CHECK(parse_method(method_name(m)) == m);
  }
  CHECK_THROWS_AS(parse_method("svm"), Error);
}

TEST_CASE("config parsing fills fields and keeps defaults") {
  const auto c = parse_config(kTinyConfig);
  CHECK(c.dataset.generator == "ode");
  CHECK(c.dataset.ode.n_freq == 12);
  CHECK(c.train_sizes == std::vector<std::size_t>{2, 4});
  CHECK(c.methods.size() == 4);
  CHECK(c.seed == 5);
  CHECK(c.bpnn.hidden == std::vector<std::size_t>{8});
  CHECK(c.bpnn.roots == 4);
  CHECK(c.linear_bp.hidden.empty());
  CHECK(c.fcnn.widths == std::vector<std::size_t>{8});
  CHECK(c.jobs == 1);
}

TEST_CASE("config parsing rejects unknown keys, bad types and invalid values") {
  CHECK_THROWS_AS(parse_config(R"({"methods": ["bpnn"], "bogus": 1})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"methods": ["bpnn"], "bpnn": {"rootz": 3}})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"methods": "bpnn"})"), Error);
  CHECK_THROWS_AS(parse_config(R"({"methods": ["bpnn"], "seeds": 0})").validate(), Error);
  CHECK_THROWS_AS(parse_config(R"({"methods": []})").validate(), Error);
  CHECK_THROWS_AS(parse_config(R"({"methods": ["bpnn", "bpnn"]})").validate(), Error);
  CHECK_THROWS_AS(parse_config(R"({"methods": ["bpnn"], "train_sizes": [5, 2]})").validate(), Error);
  CHECK_NOTHROW(parse_config(kTinyConfig).validate());
  CHECK_THROWS_AS(parse_config("{not json"), Error);
}

TEST_CASE("training subsets are nested across sizes") {
  const auto small = training_rows(50, 5, 3);
  const auto large = training_rows(50, 20, 3);
  CHECK(std::set<std::size_t>(large.begin(), large.end()).size() == 20);
  for (std::size_t i = 0; i < small.size(); ++i) CHECK(small[i] == large[i]);
  CHECK(training_rows(50, 5, 4) != small);
  CHECK_THROWS_AS(training_rows(5, 6, 0), Error);
}

TEST_CASE("parallel_for visits every index exactly once") {
  for (std::size_t jobs : {1u, 3u}) {
    std::vector<std::atomic<int>> hits(37);
    parallel_for(hits.size(), jobs, [&](std::size_t i) { ++hits[i]; });
    for (const auto& h : hits) CHECK(h.load() == 1);
  }
}

TEST_CASE("decibels") {
  CHECK(to_db(0.1) == doctest::Approx(-10.0));
  CHECK(to_db(1.0) == 0.0);
}

TEST_CASE("results csv round trip including non-finite values") {
  ResultsTable t{row("bpnn", 5, 0, 0.01), row("kk", 5, 0, std::numeric_limits<double>::quiet_NaN())};
  t[1].status = "error: zero magnitude";
  std::stringstream s;
  write_results_csv(s, t);
  const auto header = s.str().substr(0, s.str().find('\n'));
  CHECK(header == "dataset,method,arch,train_size,seed,best_mse,best_mse_db,median_se,epoch_of_best,seconds,status,final_mse");
  const auto back = read_results_csv(s);
  REQUIRE(back.size() == 2);
  CHECK(same_row(back[0], t[0]));
  CHECK(same_row(back[1], t[1]));
  std::stringstream bad("wrong,header\n");
  CHECK_THROWS_AS(read_results_csv(bad), Error);
}

TEST_CASE("plot points keep the best seed per series and size") {
  const ResultsTable t{row("bpnn", 5, 0, 0.1), row("bpnn", 5, 1, 0.01), row("bpnn", 10, 0, 0.001)};
  const auto pts = plot_points(t);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0].db == doctest::Approx(-20.0));
  CHECK(pts[1].db == doctest::Approx(-30.0));
}

TEST_CASE("svg embeds its data") {
  const ResultsTable t{row("bpnn", 5, 0, 0.1), row("kk", 5, 0, 0.5), row("bpnn", 20, 0, 0.01)};
  std::stringstream s;
  write_results_svg(s, t, "title");
  CHECK(s.str().find("<svg") != std::string::npos);
  std::stringstream in(s.str());
  const auto pts = read_svg_data(in);
  const auto expect = plot_points(t);
  REQUIRE(pts.size() == expect.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(pts[i].series == expect[i].series);
    CHECK(pts[i].train_size == expect[i].train_size);
    CHECK(pts[i].db == doctest::Approx(expect[i].db));
  }
}

TEST_CASE("heatmap csv round trip") {
  HeatmapTable h{{.segments = 1, .roots = 4, .best_mse = 0.1, .failures = 0},
                 {.segments = 2, .roots = 4, .best_mse = std::numeric_limits<double>::quiet_NaN(), .failures = 3}};
  std::stringstream s;
  write_heatmap_csv(s, h);
  const auto back = read_heatmap_csv(s);
  REQUIRE(back.size() == 2);
  CHECK(back[0].best_mse == 0.1);
  CHECK(std::isnan(back[1].best_mse));
  CHECK(back[1].failures == 3);
}

TEST_CASE("a tiny experiment produces one row per run and is reproducible") {
  auto c = parse_config(kTinyConfig);
  const auto dir = std::filesystem::temp_directory_path() / "phaseret_harness_test";
  std::filesystem::remove_all(dir);
  c.output_dir = dir / "a";
  const auto t1 = run_experiment(c);
  // bpnn, linear-bp, fcnn: 2 seeds per size; kk: 1 row per size.
  CHECK(t1.size() == 2 * (2 + 2 + 2 + 1));
  for (const auto& r : t1) {
    CHECK(r.ok());
    CHECK(r.best_mse <= r.final_mse);
  }
  write_experiment_outputs(c, t1);
  c.output_dir = dir / "b";
  c.jobs = 2;
  write_experiment_outputs(c, run_experiment(c));
  CHECK(read_file(dir / "a" / "results.csv") == read_file(dir / "b" / "results.csv"));
  CHECK(std::filesystem::exists(dir / "a" / "plot.svg"));
  CHECK(std::filesystem::exists(dir / "a" / "timings.csv"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("run_single keeps the trained model for bpnn") {
  const auto c = parse_config(kTinyConfig);
  const auto data = load_experiment_data(c);
  const auto run = run_single(c, data, Method::bpnn, 3, 1);
  REQUIRE(run.rows.size() == 1);
  CHECK(run.model.has_value());
  CHECK(run.rows[0].train_size == 3);
  CHECK_FALSE(run_single(c, data, Method::kk, 3, 1).model.has_value());
}

TEST_CASE("piecewise sweep fills every cell") {
  auto c = parse_config(kTinyConfig);
  const PiecewiseSweepSpec spec{.segments = {1, 2}, .roots = {1, 2}, .runs = 1, .train_size = 3};
  c.piecewise_bpnn.hidden = {8};
  c.piecewise_bpnn.epochs = 10;
  const auto table = piecewise_hparam_sweep(c, spec, load_experiment_data(c));
  REQUIRE(table.size() == 4);
  for (const auto& cell : table) {
    CHECK(cell.failures == 0);
    CHECK(std::isfinite(cell.best_mse));
  }
}
