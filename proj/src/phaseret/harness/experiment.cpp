#include "phaseret/harness/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <mutex>
#include <numeric>
#include <thread>

#include "phaseret/baselines/aaa_net.hpp"
#include "phaseret/baselines/fcnn.hpp"
#include "phaseret/baselines/kk.hpp"
#include "phaseret/baselines/linear_bp.hpp"
#include "phaseret/baselines/music.hpp"
#include "phaseret/datasets/io.hpp"

namespace phaseret::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Seed stream for the training-pool permutation, kept apart from run seeds.
constexpr std::uint64_t kPoolStream = 0x706f6f6cULL;

std::string arch_of(const std::vector<std::size_t>& hidden) {
  if (hidden.empty()) return "linear";
  std::string s;
  for (std::size_t h : hidden) s += (s.empty() ? "" : "x") + std::to_string(h);
  return s;
}

std::string bpnn_arch(const bpnn::BpnnConfig& c) {
  std::string tag = "m" + std::to_string(c.roots);
  if (c.segments > 1) tag = "s" + std::to_string(c.segments) + tag;
  return tag + "-" + arch_of(c.hidden);
}

// What a method run reports before it becomes a table row.
struct Outcome {
  std::string arch;
  std::string status = "ok";
  double best_mse = kNaN;
  double median_se = kNaN;
  std::size_t epoch_of_best = 0;
  double final_mse = kNaN;
  double seconds = 0.0;
  std::optional<bpnn::BpnnResult> model;
};

void fill_from_report(Outcome& out, const bpnn::TrainReport& r) {
  out.best_mse = r.best_test_mse;
  out.median_se = r.median_test_se;
  out.epoch_of_best = r.best_epoch;
  out.final_mse = r.final_test_mse;
}

std::string failure_status(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e); err != nullptr && err->code() == Errc::diverged) {
    return "diverged";
  }
  return std::string("error: ") + e.what();
}

Outcome run_kk(const datasets::SpectralDataset& test) {
  Outcome out;
  out.arch = "-";
  std::vector<double> errors(test.num_samples());
  std::vector<double> mags(test.num_freqs());
  for (std::size_t r = 0; r < test.num_samples(); ++r) {
    const auto er = static_cast<Eigen::Index>(r);
    for (std::size_t i = 0; i < mags.size(); ++i) mags[i] = test.magnitudes(er, static_cast<Eigen::Index>(i));
    const auto rec = baselines::kk_phase(mags, test.omegas);
    double sum = 0.0;
    for (std::size_t i = 0; i < mags.size(); ++i) sum += std::norm(test.values(er, static_cast<Eigen::Index>(i)) - rec[i]);
    errors[r] = sum / static_cast<double>(mags.size());
  }
  out.best_mse = out.final_mse = std::accumulate(errors.begin(), errors.end(), 0.0) / static_cast<double>(errors.size());
  out.median_se = bpnn::median(errors);
  return out;
}

// One schedulable unit of work.
struct Task {
  std::size_t size_index = 0;
  std::size_t method_index = 0;
  Method method = Method::bpnn;
  std::uint64_t seed = 0;
  std::optional<baselines::FcnnRunSpec> fcnn;
};

Outcome run_task(const ExperimentConfig& config, const Task& task, const datasets::SpectralDataset& train,
                 const datasets::SpectralDataset& test, bool keep_model) {
  Outcome out;
  const auto started = std::chrono::steady_clock::now();
  try {
    switch (task.method) {
      case Method::bpnn:
      case Method::piecewise_bpnn:
      case Method::linear_bp: {
        bpnn::BpnnConfig c = task.method == Method::bpnn             ? config.bpnn
                             : task.method == Method::piecewise_bpnn ? config.piecewise_bpnn
                                                                     : config.linear_bp;
        c.seed = task.seed;
        if (task.method == Method::linear_bp) {
          c.hidden.clear();
          c.dropout = 0.0;
        }
        out.arch = bpnn_arch(c);
        bpnn::BpnnResult result = task.method == Method::linear_bp ? baselines::linear_bp(c, train, test)
                                                                   : bpnn::train_bpnn(c, train, test);
        fill_from_report(out, result.training.report);
        if (keep_model) out.model = std::move(result);
        break;
      }
      case Method::fcnn_grid: {
        out.arch = task.fcnn->arch();
        const baselines::FcnnRun run = baselines::fcnn_train(*task.fcnn, config.fcnn, train, test);
        if (run.diverged) {
          out.status = "diverged";
        } else {
          fill_from_report(out, run.report);
        }
        break;
      }
      case Method::kk:
        out = run_kk(test);
        break;
      case Method::aaa_net: {
        baselines::AaaNetConfig c = config.aaa_net;
        c.seed = task.seed;
        out.arch = "k" + std::to_string(c.max_support) + "-" + arch_of(c.hidden);
        fill_from_report(out, baselines::aaa_network_pipeline(c, train, test).training.report);
        break;
      }
      case Method::music: {
        baselines::MusicConfig c = config.music;
        c.retrieve.seed = task.seed;
        out.arch = "p" + std::to_string(c.p);
        const baselines::MusicResult r = baselines::music_baseline(c, train, test);
        out.best_mse = out.final_mse = r.mse;
        out.median_se = r.median_se;
        out.epoch_of_best = c.retrieve.epochs;
        break;
      }
    }
  } catch (const std::exception& e) {
    out.status = failure_status(e);
    out.best_mse = out.median_se = out.final_mse = kNaN;
    out.epoch_of_best = 0;
    if (out.arch.empty()) out.arch = "-";
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return out;
}

ResultRow to_row(const ExperimentConfig& config, std::size_t size, Method method, std::uint64_t seed,
                 const Outcome& o) {
  ResultRow row;
  row.dataset = config.dataset.label();
  row.method = method_name(method);
  row.arch = o.arch;
  row.train_size = size;
  row.seed = seed;
  row.best_mse = o.best_mse;
  row.median_se = o.median_se;
  row.epoch_of_best = o.epoch_of_best;
  row.seconds = o.seconds;
  row.status = o.status;
  row.final_mse = o.final_mse;
  return row;
}

bool better_outcome(const Outcome& a, const Outcome& b) {
  const bool a_ok = a.status == "ok" && !std::isnan(a.best_mse);
  const bool b_ok = b.status == "ok" && !std::isnan(b.best_mse);
  if (a_ok != b_ok) return a_ok;
  return a_ok && a.best_mse < b.best_mse;
}

}  // namespace

datasets::DatasetSplit load_experiment_data(const ExperimentConfig& config) {
  const DatasetSpec& d = config.dataset;
  if (d.from_files()) {
    datasets::DatasetSplit split{datasets::load_spectral_file(d.train_file), datasets::load_spectral_file(d.test_file)};
    datasets::require_same_grid(split.train, split.test);
    return split;
  }
  const std::uint64_t seed = d.seed.value_or(config.seed);
  if (d.generator == "ode") return datasets::gen_ode_dataset(seed, d.ode);
  require(d.generator == "lorentzian", Errc::invalid_argument, "unknown generator '" + d.generator + "'");
  return datasets::gen_lorentzian_dataset(seed, d.lorentzian);
}

std::vector<std::size_t> training_rows(std::size_t pool, std::size_t size, std::uint64_t global_seed) {
  require(size >= 1 && size <= pool, Errc::invalid_argument,
          "training size " + std::to_string(size) + " does not fit a pool of " + std::to_string(pool));
  std::vector<std::size_t> perm(pool);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(mix_seed(global_seed, kPoolStream));
  for (std::size_t i = 0; i + 1 < pool; ++i) std::swap(perm[i], perm[i + rng.below(pool - i)]);
  perm.resize(size);
  return perm;
}

void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn) {
  jobs = std::max<std::size_t>(1, std::min(jobs, count));
  if (jobs == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  workers.reserve(jobs);
  for (std::size_t w = 0; w < jobs; ++w) {
    workers.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    });
  }
}

ResultsTable run_experiment(const ExperimentConfig& config, const datasets::DatasetSplit& data,
                            const ProgressFn& progress) {
  config.validate();
  require(config.train_sizes.back() <= data.train.num_samples(), Errc::invalid_argument,
          "largest training size exceeds the " + std::to_string(data.train.num_samples()) + " available samples");
  require(data.test.num_samples() >= 1, Errc::invalid_argument, "the test set is empty");

  std::vector<datasets::SpectralDataset> subsets;
  for (std::size_t size : config.train_sizes) {
    subsets.push_back(data.train.subset(training_rows(data.train.num_samples(), size, config.seed)));
  }

  std::vector<Task> tasks;
  for (std::size_t si = 0; si < config.train_sizes.size(); ++si) {
    for (std::size_t mi = 0; mi < config.methods.size(); ++mi) {
      const Method m = config.methods[mi];
      if (m == Method::kk) {
        tasks.push_back({si, mi, m, config.seed, std::nullopt});
      } else if (m == Method::fcnn_grid) {
        baselines::FcnnGrid grid = config.fcnn;
        grid.seeds = config.seeds;
        for (const auto& spec : baselines::fcnn_grid_runs(grid, config.seed)) tasks.push_back({si, mi, m, spec.seed, spec});
      } else {
        for (std::size_t k = 0; k < config.seeds; ++k) tasks.push_back({si, mi, m, config.seed + k, std::nullopt});
      }
    }
  }

  std::vector<Outcome> outcomes(tasks.size());
  std::atomic<std::size_t> done{0};
  std::mutex log_mutex;
  parallel_for(tasks.size(), config.jobs, [&](std::size_t i) {
    const Task& t = tasks[i];
    outcomes[i] = run_task(config, t, subsets[t.size_index], data.test, false);
    if (progress) {
      const std::size_t finished = ++done;
      std::string msg = "[" + std::to_string(finished) + "/" + std::to_string(tasks.size()) + "] " +
                        method_name(t.method) + " " + outcomes[i].arch + " n=" +
                        std::to_string(config.train_sizes[t.size_index]) + " seed=" + std::to_string(t.seed);
      if (t.fcnn) msg += " lr=" + std::to_string(t.fcnn->learning_rate) + " dropout=" + std::to_string(t.fcnn->dropout);
      msg += " -> " + (outcomes[i].status == "ok" ? std::to_string(to_db(outcomes[i].best_mse)) + " dB"
                                                  : outcomes[i].status);
      const std::lock_guard lock(log_mutex);
      progress(msg);
    }
  });

  // Merge in task order; FCNN tasks collapse to their best per (arch, seed).
  ResultsTable table;
  for (std::size_t i = 0; i < tasks.size();) {
    const Task& t = tasks[i];
    const std::size_t size = config.train_sizes[t.size_index];
    if (t.method != Method::fcnn_grid) {
      table.push_back(to_row(config, size, t.method, t.seed, outcomes[i]));
      ++i;
      continue;
    }
    std::size_t j = i;
    Outcome best = outcomes[i];
    double seconds = 0.0;
    while (j < tasks.size() && tasks[j].method == Method::fcnn_grid && tasks[j].size_index == t.size_index &&
           tasks[j].seed == t.seed && outcomes[j].arch == outcomes[i].arch) {
      if (better_outcome(outcomes[j], best)) best = outcomes[j];
      seconds += outcomes[j].seconds;
      ++j;
    }
    best.seconds = seconds;
    table.push_back(to_row(config, size, t.method, t.seed, best));
    i = j;
  }
  return table;
}

ResultsTable run_experiment(const ExperimentConfig& config, const ProgressFn& progress) {
  config.validate();
  return run_experiment(config, load_experiment_data(config), progress);
}

HeatmapTable piecewise_hparam_sweep(const ExperimentConfig& config, const PiecewiseSweepSpec& spec,
                                    const datasets::DatasetSplit& data, const ProgressFn& progress) {
  require(!spec.segments.empty() && !spec.roots.empty(), Errc::invalid_argument, "piecewise sweep grids must be nonempty");
  require(spec.runs >= 1, Errc::invalid_argument, "piecewise sweep needs at least one run per cell");
  const datasets::SpectralDataset train =
      data.train.subset(training_rows(data.train.num_samples(), spec.train_size, config.seed));

  struct CellTask {
    std::size_t cell;
    std::size_t segments;
    std::size_t roots;
    std::uint64_t seed;
  };
  std::vector<CellTask> tasks;
  HeatmapTable table;
  for (std::size_t s : spec.segments) {
    for (std::size_t r : spec.roots) {
      for (std::size_t k = 0; k < spec.runs; ++k) tasks.push_back({table.size(), s, r, config.seed + k});
      table.push_back({s, r, std::numeric_limits<double>::infinity(), 0});
    }
  }
  std::vector<Outcome> outcomes(tasks.size());
  std::mutex log_mutex;
  std::atomic<std::size_t> done{0};
  parallel_for(tasks.size(), config.jobs, [&](std::size_t i) {
    const CellTask& t = tasks[i];
    bpnn::BpnnConfig c = config.piecewise_bpnn;
    c.segments = t.segments;
    c.roots = t.roots;
    c.seed = t.seed;
    Outcome out;
    try {
      fill_from_report(out, bpnn::train_bpnn(c, train, data.test).training.report);
    } catch (const std::exception& e) {
      out.status = failure_status(e);
    }
    outcomes[i] = out;
    if (progress) {
      const std::size_t finished = ++done;
      const std::lock_guard lock(log_mutex);
      progress("[" + std::to_string(finished) + "/" + std::to_string(tasks.size()) + "] segments=" +
               std::to_string(t.segments) + " roots=" + std::to_string(t.roots) + " seed=" + std::to_string(t.seed) +
               " -> " + (out.status == "ok" ? std::to_string(to_db(out.best_mse)) + " dB" : out.status));
    }
  });
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    HeatmapCell& cell = table[tasks[i].cell];
    if (outcomes[i].status != "ok" || std::isnan(outcomes[i].best_mse)) {
      ++cell.failures;
    } else {
      cell.best_mse = std::min(cell.best_mse, outcomes[i].best_mse);
    }
  }
  for (HeatmapCell& cell : table) {
    if (cell.failures == spec.runs) cell.best_mse = kNaN;
  }
  return table;
}

SingleRun run_single(const ExperimentConfig& config, const datasets::DatasetSplit& data, Method method,
                     std::size_t train_size, std::uint64_t seed) {
  const datasets::SpectralDataset train =
      data.train.subset(training_rows(data.train.num_samples(), train_size, config.seed));
  SingleRun result;
  if (method == Method::fcnn_grid) {
    // Every grid point for this seed, collapsed per architecture.
    std::vector<Outcome> outcomes;
    baselines::FcnnGrid grid = config.fcnn;
    grid.seeds = 1;
    for (const auto& spec : baselines::fcnn_grid_runs(grid, seed)) {
      outcomes.push_back(run_task(config, {0, 0, method, seed, spec}, train, data.test, false));
    }
    std::vector<std::string> order;
    for (const Outcome& o : outcomes) {
      if (std::find(order.begin(), order.end(), o.arch) == order.end()) order.push_back(o.arch);
    }
    for (const std::string& arch : order) {
      const Outcome* best = nullptr;
      for (const Outcome& o : outcomes) {
        if (o.arch == arch && (best == nullptr || better_outcome(o, *best))) best = &o;
      }
      result.rows.push_back(to_row(config, train_size, method, seed, *best));
    }
    return result;
  }
  Outcome o = run_task(config, {0, 0, method, seed, std::nullopt}, train, data.test, true);
  result.model = std::move(o.model);
  result.rows.push_back(to_row(config, train_size, method, seed, o));
  return result;
}

void write_experiment_outputs(const ExperimentConfig& config, const ResultsTable& table) {
  std::filesystem::create_directories(config.output_dir);
  ResultsTable stable = table;
  if (!config.record_wall_time) {
    for (ResultRow& r : stable) r.seconds = 0.0;
  }
  save_results_csv(config.output_dir / "results.csv", stable);
  save_results_svg(config.output_dir / "plot.svg", stable, config.dataset.label() + ": best test MSE");
  std::ofstream timings(config.output_dir / "timings.csv");
  require(static_cast<bool>(timings), Errc::io, "cannot write " + (config.output_dir / "timings.csv").string());
  timings << "method,arch,train_size,seed,seconds\n";
  for (const ResultRow& r : table) {
    timings << r.method << ',' << r.arch << ',' << r.train_size << ',' << r.seed << ',' << r.seconds << '\n';
  }
}

}  // namespace phaseret::harness
