#include "phaseret/baselines/linear_bp.hpp"

namespace phaseret::baselines {

bpnn::BpnnResult linear_bp(bpnn::BpnnConfig config, const datasets::SpectralDataset& train,
                           const datasets::SpectralDataset& test) {
  config.hidden.clear();
  config.dropout = 0.0;
  return bpnn::train_bpnn(config, train, test);
}

}  // namespace phaseret::baselines
