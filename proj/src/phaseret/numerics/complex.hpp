#pragma once

#include <cmath>
#include <complex>
#include <span>
#include <string>

#include "phaseret/common/error.hpp"

namespace phaseret {

using Complex = std::complex<double>;

inline constexpr Complex kJ{0.0, 1.0};

inline bool is_finite(Complex z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

inline void require_finite(Complex z, const std::string& what) {
  if (!is_finite(z)) fail(Errc::domain, what + ": non-finite complex value");
}

inline void require_finite(std::span<const Complex> zs, const std::string& what) {
  for (const Complex& z : zs) require_finite(z, what);
}

inline void require_finite(std::span<const double> xs, const std::string& what) {
  for (double x : xs) {
    if (!std::isfinite(x)) fail(Errc::domain, what + ": non-finite value");
  }
}

}  // namespace phaseret
