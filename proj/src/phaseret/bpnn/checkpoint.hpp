#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "phaseret/bpnn/bpnn.hpp"

namespace phaseret::bpnn {

/// Everything needed to rebuild a trained BPNN: the configuration echo,
/// the frequency grid its segment maps were derived from, and the
/// flattened network parameters. Layout is documented in docs/checkpoint.md.
struct BpnnCheckpoint {
  BpnnConfig config;
  std::vector<double> omegas;
  MlpParameters params;
};

inline constexpr int kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const BpnnCheckpoint& checkpoint);
BpnnCheckpoint read_checkpoint(std::istream& in);

void save_checkpoint(const std::filesystem::path& path, const BpnnCheckpoint& checkpoint);
BpnnCheckpoint load_checkpoint(const std::filesystem::path& path);

}  // namespace phaseret::bpnn
