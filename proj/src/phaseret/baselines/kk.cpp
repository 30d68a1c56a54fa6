#include "phaseret/baselines/kk.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "phaseret/blaschke/blaschke.hpp"

namespace phaseret::baselines {

std::vector<double> kk_phase_only(std::span<const double> magnitudes, std::span<const double> omegas) {
  const std::size_t n = omegas.size();
  require(magnitudes.size() == n, Errc::dimension_mismatch, "KK: magnitudes and grid differ in length");
  require(n >= 2, Errc::invalid_argument, "KK needs at least two frequencies");
  blaschke::require_strictly_increasing(omegas, "KK grid");
  require(omegas[0] >= 0.0, Errc::domain, "KK grid must hold non-negative frequencies");
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    require(std::isfinite(magnitudes[i]) && magnitudes[i] > 0.0, Errc::domain,
            "KK needs strictly positive magnitudes (zero at index " + std::to_string(i) + ")");
    g[i] = std::log(magnitudes[i]);
  }

  std::vector<double> slope(n);
  slope[0] = (g[1] - g[0]) / (omegas[1] - omegas[0]);
  slope[n - 1] = (g[n - 1] - g[n - 2]) / (omegas[n - 1] - omegas[n - 2]);
  for (std::size_t i = 1; i + 1 < n; ++i) slope[i] = (g[i + 1] - g[i - 1]) / (omegas[i + 1] - omegas[i - 1]);

  // Even extension of g to negative frequencies folds the full-line
  // integral onto [0, inf) with kernel 2w / (w'^2 - w^2). Its principal value
  // vanishes for a constant, so subtracting g(w_i) removes the singularity
  // without changing the result.
  std::vector<double> phase(n);
  std::vector<double> integrand(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double w = omegas[i];
    for (std::size_t k = 0; k < n; ++k) {
      const double u = omegas[k];
      integrand[k] = k == i ? slope[i] : 2.0 * w * (g[k] - g[i]) / ((u - w) * (u + w));
    }
    double sum = 0.0;
    for (std::size_t k = 0; k + 1 < n; ++k) sum += 0.5 * (integrand[k] + integrand[k + 1]) * (omegas[k + 1] - omegas[k]);
    phase[i] = -sum / std::numbers::pi;
  }
  return phase;
}

std::vector<Complex> kk_phase(std::span<const double> magnitudes, std::span<const double> omegas) {
  const std::vector<double> phase = kk_phase_only(magnitudes, omegas);
  std::vector<Complex> out(phase.size());
  for (std::size_t i = 0; i < phase.size(); ++i) out[i] = std::polar(magnitudes[i], phase[i]);
  return out;
}

}  // namespace phaseret::baselines
