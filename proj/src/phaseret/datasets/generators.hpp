#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "phaseret/common/rng.hpp"
#include "phaseret/datasets/dataset.hpp"
#include "phaseret/datasets/lorentzian_ranges.hpp"

namespace phaseret::datasets {

// ---------------------------------------------------------------------------
// Polynomial ODE  df/dz = p(z), integrated along the imaginary axis.
// ---------------------------------------------------------------------------

/// Polynomial by ascending coefficients.
struct Polynomial {
  std::vector<Complex> coefficients;

  Complex operator()(Complex z) const;
  /// Antiderivative vanishing at 0.
  Polynomial antiderivative() const;
  static Polynomial from_roots(std::span<const Complex> roots);
};

struct OdeOptions {
  std::size_t n_train = 50;
  std::size_t n_test = 1000;
  std::size_t n_freq = 200;
  double omega_max = 2.0;
  std::size_t degree = 4;
  /// Replaces the random unit-circle polynomial (used by tests).
  std::optional<Polynomial> polynomial_override;
};

/// Observation grid w_i = i * omega_max / n for i = 1..n; the initial value
/// sits at w_0 = 0 and the Euler step equals the grid spacing.
std::vector<double> ode_grid(std::size_t n_freq, double omega_max);

/// Forward Euler for df/dw = j p(jw) from f(0) = f0; values at ode_grid points.
std::vector<Complex> ode_solve(const Polynomial& p, Complex f0, std::size_t n_freq, double omega_max);

/// Draws one polynomial for the whole dataset (roots uniform on the unit
/// circle), then n_train + n_test initial values with real and imaginary
/// parts uniform in [-1, 1].
DatasetSplit gen_ode_dataset(std::uint64_t seed, const OdeOptions& options = {});

// ---------------------------------------------------------------------------
// Lorentzian slab transmission.
// ---------------------------------------------------------------------------

struct Oscillator {
  double plasma;     // w_p
  double resonance;  // w_o
  double damping;    // w_s
};

struct LorentzianParams {
  double eps_inf = 1.0;
  std::vector<Oscillator> oscillators;
  double thickness = 0.5;
  double light_speed = 299.792458;

  void validate() const;
};

/// eps_inf + sum_i w_p^2 / (w_o^2 - w^2 - j w_s w)
Complex lorentzian_permittivity(const LorentzianParams& params, double omega);

/// Slab transmission [cos(n w l / c) - (j/2)(z + 1/z) sin(n w l / c)]^{-1}
/// with n = sqrt(eps) taken on the Im(n) >= 0 branch and z = 1/n.
Complex transfer_matrix_t(const LorentzianParams& params, double omega);

struct LorentzianOptions {
  std::size_t n_train = 50;
  std::size_t n_test = 2000;
  std::size_t n_freq = 1000;
  LorentzianSampling sampling;
};

LorentzianParams sample_lorentzian(Rng& rng, const LorentzianSampling& sampling);

/// Uniform grid over [band_lo, band_hi] (endpoints included).
std::vector<double> uniform_grid(double lo, double hi, std::size_t n);

DatasetSplit gen_lorentzian_dataset(std::uint64_t seed, const LorentzianOptions& options = {});

}  // namespace phaseret::datasets
