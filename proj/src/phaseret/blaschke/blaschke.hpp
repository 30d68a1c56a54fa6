#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "phaseret/numerics/complex.hpp"

namespace phaseret::blaschke {

/// Strictly increasing affine map taking the physical band [lo, hi] onto [-1, 1].
class FrequencyMap {
 public:
  FrequencyMap() : FrequencyMap(-1.0, 1.0) {}
  FrequencyMap(double lo, double hi);

  double operator()(double omega) const { return (2.0 * omega - lo_ - hi_) / (hi_ - lo_); }
  double lo() const { return lo_; }
  double hi() const { return hi_; }

 private:
  double lo_;
  double hi_;
};

/// Unimodular phase model b(jw) = e^{j phi} P(jw) / P*(jw) with P monic,
/// parametrized by its roots. Evaluation happens at the normalized
/// coordinate produced by `map`.
struct BlaschkePhaseModel {
  std::vector<Complex> roots;
  double phase_angle = 0.0;
  FrequencyMap map;

  BlaschkePhaseModel() = default;
  BlaschkePhaseModel(std::vector<Complex> roots, double phase_angle, FrequencyMap map = {});
};

/// Contiguous, non-overlapping segments [b_s, b_{s+1}) covering
/// [b_0, b_S]; the last segment is closed on the right.
struct SegmentedPhaseModel {
  std::vector<double> boundaries;
  std::vector<BlaschkePhaseModel> segments;

  SegmentedPhaseModel() = default;
  SegmentedPhaseModel(std::vector<double> boundaries, std::vector<BlaschkePhaseModel> segments);

  /// Segment holding `omega`; throws when outside [b_0, b_S].
  std::size_t segment_of(double omega) const;
};

/// Frequency grid plus complex response values.
struct ComplexSpectrum {
  std::vector<double> omegas;
  std::vector<Complex> values;

  ComplexSpectrum() = default;
  ComplexSpectrum(std::vector<double> omegas, std::vector<Complex> values);
};

/// Finite Blaschke product on the right half plane,
///   ((1+z)/(1-z))^n prod_j |a_j-1|/(a_j-1) |a_j+1|/(a_j+1) (z-a_j)/(z+conj(a_j)).
Complex eval_finite_blaschke(std::span<const Complex> roots, int n, Complex z);

/// Single factor (jx - a) / conj(jx - a) at normalized coordinate x.
Complex phase_factor(Complex root, double x);

Complex eval_phase_at(const BlaschkePhaseModel& model, double omega);
std::vector<Complex> eval_phase(const BlaschkePhaseModel& model, std::span<const double> omegas);
std::vector<Complex> eval_phase_segmented(const SegmentedPhaseModel& model, std::span<const double> omegas);

/// Element-wise magnitude * phase.
std::vector<Complex> reconstruct(std::span<const double> magnitudes, std::span<const Complex> phase);

/// Boundaries splitting a strictly increasing grid into `segments` runs of
/// (nearly) equal index length. Interior boundaries fall halfway between the
/// last point of one run and the first of the next.
std::vector<double> equal_index_boundaries(std::span<const double> omegas, std::size_t segments);

/// Per-segment frequency maps over the given boundaries.
std::vector<FrequencyMap> segment_maps(std::span<const double> boundaries);

void require_strictly_increasing(std::span<const double> xs, const char* what);

}  // namespace phaseret::blaschke
