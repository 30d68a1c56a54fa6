#include "phaseret/numerics/adam.hpp"

#include <cmath>
#include <string>

#include "phaseret/common/error.hpp"

namespace phaseret::numerics {

Adam::Adam(std::size_t num_params, AdamOptions options)
    : options_(options), m_(num_params, 0.0), v_(num_params, 0.0) {
  require(options.learning_rate > 0.0 && std::isfinite(options.learning_rate), Errc::invalid_argument,
          "Adam learning rate must be positive");
  require(options.beta1 >= 0.0 && options.beta1 < 1.0 && options.beta2 >= 0.0 && options.beta2 < 1.0,
          Errc::invalid_argument, "Adam betas must lie in [0, 1)");
  require(options.epsilon > 0.0, Errc::invalid_argument, "Adam epsilon must be positive");
}

void Adam::step(std::span<double> params, std::span<const double> grad) {
  require(params.size() == m_.size() && grad.size() == m_.size(), Errc::dimension_mismatch,
          "Adam expects " + std::to_string(m_.size()) + " parameters, got params=" + std::to_string(params.size()) +
              " grad=" + std::to_string(grad.size()));
  ++steps_;
  const double b1 = options_.beta1;
  const double b2 = options_.beta2;
  const double t = static_cast<double>(steps_);
  const double c1 = 1.0 - std::pow(b1, t);
  const double c2 = 1.0 - std::pow(b2, t);
  const double lr = options_.learning_rate;
  const double eps = options_.epsilon;
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = grad[i];
    m_[i] = b1 * m_[i] + (1.0 - b1) * g;
    v_[i] = b2 * v_[i] + (1.0 - b2) * g * g;
    const double m_hat = m_[i] / c1;
    const double v_hat = v_[i] / c2;
    params[i] -= lr * m_hat / (std::sqrt(v_hat) + eps);
  }
}

}  // namespace phaseret::numerics
