#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "phaseret/baselines/aaa_net.hpp"
#include "phaseret/baselines/fcnn.hpp"
#include "phaseret/baselines/music.hpp"
#include "phaseret/bpnn/bpnn.hpp"
#include "phaseret/datasets/generators.hpp"

namespace phaseret::harness {

enum class Method { bpnn, piecewise_bpnn, fcnn_grid, kk, aaa_net, music, linear_bp };

const char* method_name(Method m);
Method parse_method(const std::string& name);

/// Either a generator or a pair of dataset files.
struct DatasetSpec {
  std::string generator = "lorentzian";  // "lorentzian" or "ode"; empty when files are used
  std::optional<std::uint64_t> seed;  // falls back to the experiment seed
  datasets::LorentzianOptions lorentzian;
  datasets::OdeOptions ode;
  std::filesystem::path train_file;
  std::filesystem::path test_file;

  bool from_files() const { return generator.empty(); }
  std::string label() const;
};

struct PiecewiseSweepSpec {
  std::vector<std::size_t> segments;
  std::vector<std::size_t> roots;  // per segment
  std::size_t runs = 3;
  std::size_t train_size = 50;
};

struct ExperimentConfig {
  DatasetSpec dataset;
  std::vector<std::size_t> train_sizes{1, 2, 5, 10, 20, 50};
  std::vector<Method> methods;
  std::size_t seeds = 3;          // runs per (size, method, architecture)
  std::uint64_t seed = 0;         // global seed; run k uses seed + k
  std::filesystem::path output_dir = "results";
  std::size_t jobs = 1;
  bool record_wall_time = false;  // off keeps results.csv byte-reproducible

  bpnn::BpnnConfig bpnn;
  bpnn::BpnnConfig piecewise_bpnn{.segments = 4};
  bpnn::BpnnConfig linear_bp{.hidden = {}};
  baselines::FcnnGrid fcnn;
  baselines::AaaNetConfig aaa_net;
  baselines::MusicConfig music;
  std::optional<PiecewiseSweepSpec> piecewise_sweep;

  /// Throws Errc::invalid_argument (or Errc::io for missing files).
  void validate() const;
};

/// Reads the JSON schema documented in docs/config.md. Unknown keys are
/// rejected so that typos do not silently fall back to defaults.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::filesystem::path& path);

}  // namespace phaseret::harness
