#pragma once

#include <span>
#include <vector>

#include "phaseret/numerics/complex.hpp"

namespace phaseret::baselines {

/// Phase from magnitude via the Kramers-Kronig (Hilbert) relation applied to
/// g = ln|f| = 0.5 ln R, with |f| even in frequency:
///
///   phi(w_i) = -(2 w_i / pi) PV int_0^inf [g(w') - g(w_i)] / (w'^2 - w_i^2) dw'
///
/// The integral is the trapezoid rule over the measured grid only, which
/// must hold non-negative frequencies. The diagonal term is g'(w_i) by finite
/// differences. Nothing is assumed outside the band, so band truncation is
/// the dominant error.
std::vector<double> kk_phase_only(std::span<const double> magnitudes, std::span<const double> omegas);

/// sqrt(R) e^{j phi} with phi from `kk_phase_only`.
std::vector<Complex> kk_phase(std::span<const double> magnitudes, std::span<const double> omegas);

}  // namespace phaseret::baselines
