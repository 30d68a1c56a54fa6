#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phaseret/numerics/complex.hpp"

namespace phaseret::baselines {

/// r(z) = sum_j w_j f_j / (z - z_j)  /  sum_j w_j / (z - z_j)
struct BarycentricModel {
  std::vector<Complex> support;
  std::vector<Complex> weights;
  std::vector<Complex> values;

  std::size_t size() const { return support.size(); }
  /// At a support point the model returns its stored value.
  Complex operator()(Complex z) const;
};

struct AaaResult {
  BarycentricModel model;
  std::vector<std::size_t> support_indices;  // into the sample set, in selection order
  double max_error = 0.0;                    // over the sample set
};

/// Greedy AAA: repeatedly adds the sample of largest residual as a support
/// point and takes the weights as the minimal right singular vector of the
/// Loewner matrix over the remaining samples. Stops once the max residual is
/// at most tol * max|F| or `max_support` points are in use.
AaaResult aaa_fit(std::span<const Complex> points, std::span<const Complex> values, std::size_t max_support,
                  double tol = 1e-13);

}  // namespace phaseret::baselines
