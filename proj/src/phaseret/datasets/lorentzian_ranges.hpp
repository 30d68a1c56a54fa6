#pragma once

#include <cstddef>

namespace phaseret::datasets {

/// Sampling ranges for the Lorentzian transmission generator. Frequencies
/// are angular, in rad/ps ("THz"); lengths in micrometres, so the speed of
/// light is 299.792458 um/ps.
struct LorentzianSampling {
  double band_lo = 100.0;
  double band_hi = 500.0;
  std::size_t oscillators = 4;
  /// Resonance frequency drawn uniformly from the band.
  /// Plasma frequency drawn uniformly from [lo, hi] x band width.
  double plasma_lo_fraction = 0.2;
  double plasma_hi_fraction = 1.5;
  double damping_lo = 1.0;
  double damping_hi = 20.0;
  double eps_inf = 1.0;
  double thickness = 0.5;
  double light_speed = 299.792458;
};

}  // namespace phaseret::datasets
