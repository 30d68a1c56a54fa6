#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

namespace phaseret::numerics {

struct AdamOptions {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// Adam with bias-corrected moment estimates.
class Adam {
 public:
  Adam(std::size_t num_params, AdamOptions options = {});

  /// Updates `params` in place from `grad`.
  void step(std::span<double> params, std::span<const double> grad);

  std::uint64_t steps() const { return steps_; }
  const AdamOptions& options() const { return options_; }
  std::span<const double> first_moment() const { return m_; }
  std::span<const double> second_moment() const { return v_; }

 private:
  AdamOptions options_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t steps_ = 0;
};

}  // namespace phaseret::numerics
