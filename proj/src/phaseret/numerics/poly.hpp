#pragma once

#include <span>

#include "phaseret/numerics/complex.hpp"

namespace phaseret::numerics {

/// Monic polynomial with the given roots, evaluated as prod_k (z - a_k).
/// Factors are multiplied in the order given.
Complex eval_poly_from_roots(std::span<const Complex> roots, Complex z);

/// Para-conjugate P*(z) = conj(P(-conj(z))) of the monic polynomial with the
/// given roots. On the imaginary axis P*(jw) = conj(P(jw)); as a polynomial
/// in z it equals (-1)^m prod_k (z + conj(a_k)).
Complex conj_reflect_eval(std::span<const Complex> roots, Complex z);

}  // namespace phaseret::numerics
