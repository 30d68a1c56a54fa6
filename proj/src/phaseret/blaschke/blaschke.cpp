#include "phaseret/blaschke/blaschke.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace phaseret::blaschke {

void require_strictly_increasing(std::span<const double> xs, const char* what) {
  require_finite(xs, what);
  for (std::size_t i = 1; i < xs.size(); ++i) {
    require(xs[i] > xs[i - 1], Errc::invalid_argument,
            std::string(what) + ": values must be strictly increasing (index " + std::to_string(i) + ")");
  }
}

FrequencyMap::FrequencyMap(double lo, double hi) : lo_(lo), hi_(hi) {
  require(std::isfinite(lo) && std::isfinite(hi) && hi > lo, Errc::invalid_argument,
          "frequency map needs a finite band with hi > lo");
}

BlaschkePhaseModel::BlaschkePhaseModel(std::vector<Complex> roots_in, double phase_angle_in, FrequencyMap map_in)
    : roots(std::move(roots_in)), phase_angle(phase_angle_in), map(map_in) {
  require_finite(roots, "BlaschkePhaseModel roots");
  require(std::isfinite(phase_angle), Errc::domain, "BlaschkePhaseModel phase angle must be finite");
}

SegmentedPhaseModel::SegmentedPhaseModel(std::vector<double> boundaries_in, std::vector<BlaschkePhaseModel> segments_in)
    : boundaries(std::move(boundaries_in)), segments(std::move(segments_in)) {
  require(!segments.empty(), Errc::invalid_argument, "segmented model needs at least one segment");
  require(boundaries.size() == segments.size() + 1, Errc::dimension_mismatch,
          "segmented model needs one more boundary than segments");
  require_strictly_increasing(boundaries, "segment boundaries");
}

std::size_t SegmentedPhaseModel::segment_of(double omega) const {
  require(omega >= boundaries.front() && omega <= boundaries.back(), Errc::domain,
          "frequency " + std::to_string(omega) + " is not covered by any segment");
  const auto it = std::upper_bound(boundaries.begin(), boundaries.end(), omega);
  const auto idx = static_cast<std::size_t>(it - boundaries.begin());
  return std::min(idx == 0 ? 0 : idx - 1, segments.size() - 1);
}

ComplexSpectrum::ComplexSpectrum(std::vector<double> omegas_in, std::vector<Complex> values_in)
    : omegas(std::move(omegas_in)), values(std::move(values_in)) {
  require(omegas.size() == values.size(), Errc::dimension_mismatch, "spectrum grid and values differ in length");
  require_strictly_increasing(omegas, "spectrum grid");
  require_finite(values, "spectrum values");
}

Complex eval_finite_blaschke(std::span<const Complex> roots, int n, Complex z) {
  require_finite(z, "eval_finite_blaschke point");
  require(!(n > 0 && z == Complex{1.0, 0.0}), Errc::pole, "Blaschke product has a pole at z = 1");
  require(!(n < 0 && z == Complex{-1.0, 0.0}), Errc::pole, "Blaschke product has a pole at z = -1");
  Complex value = std::pow((1.0 + z) / (1.0 - z), n);
  for (const Complex& a : roots) {
    require_finite(a, "eval_finite_blaschke root");
    require(a.real() >= 0.0, Errc::domain, "Blaschke roots must satisfy Re(a) >= 0");
    require(a != Complex{1.0, 0.0} && a != Complex{-1.0, 0.0}, Errc::domain,
            "Blaschke normalization undefined for a root at +1 or -1");
    const Complex den = z + std::conj(a);
    require(den != Complex{0.0, 0.0}, Errc::pole, "Blaschke product evaluated at a pole z = -conj(a)");
    const Complex am1 = a - 1.0;
    const Complex ap1 = a + 1.0;
    value *= (std::abs(am1) / am1) * (std::abs(ap1) / ap1) * ((z - a) / den);
  }
  return value;
}

Complex phase_factor(Complex root, double x) {
  const Complex u{-root.real(), x - root.imag()};
  const double n = std::norm(u);
  require(n > 0.0, Errc::pole, "phase model evaluated at a root on the imaginary axis");
  // u / conj(u) = u^2 / |u|^2
  return Complex{(u.real() * u.real() - u.imag() * u.imag()) / n, 2.0 * u.real() * u.imag() / n};
}

Complex eval_phase_at(const BlaschkePhaseModel& model, double omega) {
  const double x = model.map(omega);
  Complex value = std::polar(1.0, model.phase_angle);
  for (const Complex& a : model.roots) value *= phase_factor(a, x);
  return value;
}

std::vector<Complex> eval_phase(const BlaschkePhaseModel& model, std::span<const double> omegas) {
  std::vector<Complex> out(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) out[i] = eval_phase_at(model, omegas[i]);
  return out;
}

std::vector<Complex> eval_phase_segmented(const SegmentedPhaseModel& model, std::span<const double> omegas) {
  std::vector<Complex> out(omegas.size());
  for (std::size_t i = 0; i < omegas.size(); ++i) {
    out[i] = eval_phase_at(model.segments[model.segment_of(omegas[i])], omegas[i]);
  }
  return out;
}

std::vector<Complex> reconstruct(std::span<const double> magnitudes, std::span<const Complex> phase) {
  require(magnitudes.size() == phase.size(), Errc::dimension_mismatch, "reconstruct: length mismatch");
  std::vector<Complex> out(magnitudes.size());
  for (std::size_t i = 0; i < magnitudes.size(); ++i) {
    require(magnitudes[i] >= 0.0, Errc::domain, "reconstruct: negative magnitude at index " + std::to_string(i));
    out[i] = magnitudes[i] * phase[i];
  }
  return out;
}

std::vector<double> equal_index_boundaries(std::span<const double> omegas, std::size_t segments) {
  require(segments >= 1, Errc::invalid_argument, "need at least one segment");
  require(omegas.size() >= 2, Errc::invalid_argument, "need at least two frequencies to partition");
  require(segments <= omegas.size(), Errc::invalid_argument, "more segments than frequencies");
  require_strictly_increasing(omegas, "frequency grid");
  const std::size_t n = omegas.size();
  std::vector<double> b(segments + 1);
  b.front() = omegas.front();
  b.back() = omegas.back();
  for (std::size_t s = 1; s < segments; ++s) {
    const std::size_t k = s * n / segments;  // first index of segment s
    b[s] = 0.5 * (omegas[k - 1] + omegas[k]);
  }
  return b;
}

std::vector<FrequencyMap> segment_maps(std::span<const double> boundaries) {
  std::vector<FrequencyMap> maps;
  maps.reserve(boundaries.size() - 1);
  for (std::size_t s = 0; s + 1 < boundaries.size(); ++s) maps.emplace_back(boundaries[s], boundaries[s + 1]);
  return maps;
}

}  // namespace phaseret::blaschke
