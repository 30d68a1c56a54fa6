#pragma once

#include <vector>

#include <Eigen/Core>

#include "phaseret/numerics/complex.hpp"

namespace phaseret {

/// Row-major so that one sample occupies one contiguous row.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ComplexMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;

/// Flat storage for buffers that get mapped as Eigen matrices. Vectorized
/// reductions peel according to the pointer's alignment, so plain malloc
/// memory can change the summation order from one run to the next.
using AlignedVector = std::vector<double, Eigen::aligned_allocator<double>>;

}  // namespace phaseret
