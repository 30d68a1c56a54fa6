#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "phaseret/bpnn/bpnn.hpp"
#include "phaseret/datasets/dataset.hpp"
#include "phaseret/harness/config.hpp"
#include "phaseret/harness/report.hpp"

namespace phaseret::harness {

using ProgressFn = std::function<void(const std::string&)>;

/// Generates or loads the train/test pair named by the config.
datasets::DatasetSplit load_experiment_data(const ExperimentConfig& config);

/// Row indices of the training pool used at `size`. Subsets are nested: the
/// pool is permuted once per global seed and each size takes a prefix.
std::vector<std::size_t> training_rows(std::size_t pool, std::size_t size, std::uint64_t global_seed);

/// Runs `fn(i)` for i in [0, count) on up to `jobs` threads. `fn` must not
/// throw.
void parallel_for(std::size_t count, std::size_t jobs, const std::function<void(std::size_t)>& fn);

/// One (size, method, architecture, seed) result per row, in config order:
/// sizes, then methods, then architectures, then seeds. KK is deterministic
/// and yields one row per size. FCNN rows keep the best learning rate and
/// dropout for each (architecture, seed). Failed runs become rows whose
/// status starts with "error" or reads "diverged".
ResultsTable run_experiment(const ExperimentConfig& config, const datasets::DatasetSplit& data,
                            const ProgressFn& progress = {});
ResultsTable run_experiment(const ExperimentConfig& config, const ProgressFn& progress = {});

/// Minimum test MSE over `runs` seeds per (segments, roots) cell.
HeatmapTable piecewise_hparam_sweep(const ExperimentConfig& config, const PiecewiseSweepSpec& spec,
                                    const datasets::DatasetSplit& data, const ProgressFn& progress = {});

/// A single method run, keeping the trained model for BPNN-family methods.
struct SingleRun {
  ResultsTable rows;
  std::optional<bpnn::BpnnResult> model;
};

SingleRun run_single(const ExperimentConfig& config, const datasets::DatasetSplit& data, Method method,
                     std::size_t train_size, std::uint64_t seed);

/// Writes results.csv and plot.svg into the output directory, plus
/// timings.csv with the measured wall time of each row. Unless
/// record_wall_time is set, results.csv carries 0 in its seconds column so
/// that reruns are byte-identical.
void write_experiment_outputs(const ExperimentConfig& config, const ResultsTable& table);

}  // namespace phaseret::harness
