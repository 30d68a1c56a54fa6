// Command-line front end. Talks to the library only through its C API.
#include <phaseret/phaseret.h>

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

namespace {

constexpr int kUsage = 1;
constexpr int kFailure = 2;

struct Deleter {
  void operator()(pr_config* p) const { pr_config_free(p); }
  void operator()(pr_dataset* p) const { pr_dataset_free(p); }
  void operator()(pr_results* p) const { pr_results_free(p); }
  void operator()(pr_model* p) const { pr_model_free(p); }
};
template <class T>
using Handle = std::unique_ptr<T, Deleter>;

struct RunFailure {
  int code;
};

void check(pr_status status, const std::string& context, int code = kFailure) {
  if (status == PR_OK) return;
  std::cerr << "phaseret: " << context << ": " << pr_status_name(status) << ": " << pr_last_error() << "\n";
  throw RunFailure{code};
}

void print_progress(const char* line, void*) { std::cerr << line << "\n"; }

struct Globals {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::optional<std::size_t> jobs;
};

// Loads --config (or the defaults) and applies the flag overrides.
Handle<pr_config> make_config(const Globals& g, const char* default_methods) {
  pr_config* raw = nullptr;
  if (!g.config.empty()) {
    check(pr_config_load(g.config.c_str(), &raw), "loading " + g.config, kUsage);
  } else {
    check(pr_config_default(default_methods, &raw), "building default config", kUsage);
  }
  Handle<pr_config> config(raw);
  if (g.seed) check(pr_config_set_seed(config.get(), *g.seed), "--seed", kUsage);
  if (!g.out.empty()) check(pr_config_set_output_dir(config.get(), g.out.c_str()), "--out", kUsage);
  if (g.jobs) check(pr_config_set_jobs(config.get(), *g.jobs), "--jobs", kUsage);
  return config;
}

std::string output_dir(const pr_config* config) {
  std::string dir(pr_config_output_dir(config, nullptr, 0), '\0');
  pr_config_output_dir(config, dir.data(), dir.size() + 1);
  return dir;
}

int cmd_gen(const Globals& g, const std::string& generator) {
  auto config = make_config(g, "bpnn");
  if (!generator.empty()) check(pr_config_set_generator(config.get(), generator.c_str()), "--dataset", kUsage);
  pr_dataset* train_raw = nullptr;
  pr_dataset* test_raw = nullptr;
  check(pr_dataset_from_config(config.get(), &train_raw, &test_raw), "generating dataset");
  Handle<pr_dataset> train(train_raw), test(test_raw);
  const std::filesystem::path dir = output_dir(config.get());
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto train_path = (dir / "train.csv").string();
  const auto test_path = (dir / "test.csv").string();
  check(pr_dataset_save(train.get(), train_path.c_str()), "writing " + train_path);
  check(pr_dataset_save(test.get(), test_path.c_str()), "writing " + test_path);
  std::cout << train_path << " (" << pr_dataset_num_samples(train.get()) << " samples)\n"
            << test_path << " (" << pr_dataset_num_samples(test.get()) << " samples)\n";
  return 0;
}

int cmd_train(const Globals& g, const std::string& method, std::size_t size) {
  auto config = make_config(g, method.c_str());
  const std::uint64_t seed = g.seed.value_or(0);
  pr_results* rows_raw = nullptr;
  pr_model* model_raw = nullptr;
  check(pr_train(config.get(), method.c_str(), size, seed, &rows_raw, &model_raw), "training " + method);
  Handle<pr_results> rows(rows_raw);
  Handle<pr_model> model(model_raw);
  const std::filesystem::path dir = output_dir(config.get());
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto csv = (dir / "train.csv").string();
  check(pr_results_save_csv(rows.get(), csv.c_str()), "writing " + csv);
  std::cout << csv << "\n";
  if (model) {
    const auto ckpt = (dir / "model.ckpt").string();
    check(pr_model_save(model.get(), ckpt.c_str()), "writing " + ckpt);
    std::cout << ckpt << "\n";
  }
  for (std::size_t i = 0; i < pr_results_num_rows(rows.get()); ++i) {
    std::cout << "best_mse " << pr_results_best_mse(rows.get(), i) << "\n";
  }
  return 0;
}

int cmd_sweep(const Globals& g) {
  if (g.config.empty()) {
    std::cerr << "phaseret: sweep requires --config\n";
    return kUsage;
  }
  auto config = make_config(g, "");
  pr_results* raw = nullptr;
  check(pr_experiment_run(config.get(), print_progress, nullptr, &raw), "running experiment");
  Handle<pr_results> results(raw);
  check(pr_experiment_write(config.get(), results.get()), "writing results");
  if (pr_config_has_piecewise_sweep(config.get())) {
    check(pr_piecewise_sweep_run(config.get(), print_progress, nullptr), "running piecewise sweep");
  }
  std::cout << output_dir(config.get()) << "\n";
  return 0;
}

int cmd_report(const Globals& g, const std::string& csv, const std::string& title) {
  pr_results* raw = nullptr;
  check(pr_results_load_csv(csv.c_str(), &raw), "reading " + csv);
  Handle<pr_results> results(raw);
  std::filesystem::path dir = g.out.empty() ? std::filesystem::path(csv).parent_path() : std::filesystem::path(g.out);
  if (dir.empty()) dir = ".";
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  const auto svg = (dir / "plot.svg").string();
  check(pr_results_save_svg(results.get(), svg.c_str(), title.c_str()), "writing " + svg);
  std::cout << svg << " (" << pr_results_num_rows(results.get()) << " rows)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Blaschke phase retrieval toolkit", "phaseret"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--config", g.config, "Experiment config (JSON)");
  app.add_option("--seed", g.seed, "Override the global seed");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--jobs", g.jobs, "Worker threads")->check(CLI::PositiveNumber);
  app.add_flag_callback("--version", [] {
    std::cout << pr_version() << "\n";
    std::exit(0);
  }, "Print the library version");

  std::string generator;
  auto* gen = app.add_subcommand("gen", "Write synthetic train/test datasets");
  gen->add_option("--dataset", generator, "lorentzian or ode")->check(CLI::IsMember({"lorentzian", "ode"}));

  std::string method = "bpnn";
  std::size_t size = 20;
  auto* train = app.add_subcommand("train", "Train one method on one training size");
  train->add_option("--method", method,
                    "bpnn, piecewise-bpnn, linear-bp, fcnn-grid, kk, aaa-net or music")
      ->capture_default_str();
  train->add_option("--size", size, "Training set size")->capture_default_str()->check(CLI::PositiveNumber);

  auto* sweep = app.add_subcommand("sweep", "Run the full experiment in --config");

  std::string csv;
  std::string title = "Test MSE";
  auto* report = app.add_subcommand("report", "Re-render the plot from a results CSV");
  report->add_option("csv", csv, "results.csv")->required();
  report->add_option("--title", title, "Plot title")->capture_default_str();

  for (auto* sub : {gen, train, sweep, report}) sub->fallthrough();

  if (argc <= 1) {
    std::cerr << app.help();
    return kUsage;
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*gen) return cmd_gen(g, generator);
    if (*train) return cmd_train(g, method, size);
    if (*sweep) return cmd_sweep(g);
    if (*report) return cmd_report(g, csv, title);
  } catch (const RunFailure& f) {
    return f.code;
  } catch (const std::exception& e) {
    std::cerr << "phaseret: " << e.what() << "\n";
    return kFailure;
  }
  return kUsage;
}
