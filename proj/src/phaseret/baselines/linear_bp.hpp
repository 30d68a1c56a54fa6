#pragma once

#include "phaseret/bpnn/bpnn.hpp"

namespace phaseret::baselines {

/// BPNN whose network is a single affine map from magnitudes to the phase
/// parameters. `hidden` and `dropout` in `config` are ignored.
bpnn::BpnnResult linear_bp(bpnn::BpnnConfig config, const datasets::SpectralDataset& train,
                           const datasets::SpectralDataset& test);

}  // namespace phaseret::baselines
