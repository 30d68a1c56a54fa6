#include "phaseret/numerics/poly.hpp"

namespace phaseret::numerics {

Complex eval_poly_from_roots(std::span<const Complex> roots, Complex z) {
  require_finite(roots, "eval_poly_from_roots");
  Complex value{1.0, 0.0};
  for (const Complex& a : roots) value *= (z - a);
  return value;
}

Complex conj_reflect_eval(std::span<const Complex> roots, Complex z) {
  require_finite(roots, "conj_reflect_eval");
  const Complex reflected = -std::conj(z);
  Complex value{1.0, 0.0};
  for (const Complex& a : roots) value *= std::conj(reflected - a);
  return value;
}

}  // namespace phaseret::numerics
