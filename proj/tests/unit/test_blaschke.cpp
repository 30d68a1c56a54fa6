#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "phaseret/blaschke/blaschke.hpp"
#include "phaseret/common/rng.hpp"

using namespace phaseret;
using namespace phaseret::blaschke;

TEST_CASE("phase model is unimodular for arbitrary roots and frequencies") {
  Rng rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    std::vector<Complex> roots;
    const std::size_t m = 1 + rng.below(8);
    for (std::size_t k = 0; k < m; ++k) roots.emplace_back(rng.uniform(-3, 3), rng.uniform(-3, 3));
    const BlaschkePhaseModel model(roots, rng.uniform(-10, 10), FrequencyMap(rng.uniform(0, 1), rng.uniform(2, 5)));
    const double w = rng.uniform(0, 6);
    CHECK(std::abs(std::abs(eval_phase_at(model, w)) - 1.0) <= 1e-12);
  }
}

TEST_CASE("phase model equals e^{j phi} P(jx) / conj(P(jx))") {
  const std::vector<Complex> roots{{0.3, -0.2}, {-1.1, 0.7}, {0.05, 2.0}};
  const FrequencyMap map(2.0, 6.0);
  const BlaschkePhaseModel model(roots, 0.4, map);
  for (double w : {2.0, 3.1, 4.0, 5.9, 6.0}) {
    const Complex z{0.0, map(w)};
    Complex p = 1.0;
    for (const Complex& a : roots) p *= z - a;
    const Complex expect = std::polar(1.0, 0.4) * p / std::conj(p);
    CHECK(std::abs(eval_phase_at(model, w) - expect) < 1e-13);
  }
}

TEST_CASE("a root on the evaluation axis is a pole") {
  const BlaschkePhaseModel model({{0.0, 0.5}}, 0.0);
  CHECK_THROWS_AS(eval_phase_at(model, 0.5), Error);
}

TEST_CASE("finite Blaschke product: unimodular on the axis, zero at roots, |B|<1 inside") {
  Rng rng(12);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<Complex> roots;
    const std::size_t m = 1 + rng.below(6);
    for (std::size_t k = 0; k < m; ++k) roots.emplace_back(rng.uniform(0.01, 3), rng.uniform(-3, 3));
    const int n = static_cast<int>(rng.below(5)) - 2;
    const Complex on_axis{0.0, rng.uniform(-20, 20)};
    CHECK(std::abs(std::abs(eval_finite_blaschke(roots, n, on_axis)) - 1.0) <= 1e-12);
    CHECK(std::abs(eval_finite_blaschke(roots, 0, roots[0])) < 1e-14);
    const Complex inside{rng.uniform(0.01, 3), rng.uniform(-3, 3)};
    CHECK(std::abs(eval_finite_blaschke(roots, 0, inside)) <= 1.0 + 1e-12);
  }
}

TEST_CASE("finite Blaschke normalization makes each factor real at z = +-1") {
  for (const Complex a : {Complex{0.5, 0.3}, Complex{2.0, -1.0}, Complex{0.1, 4.0}}) {
    const std::vector<Complex> roots{a};
    const Complex at_plus = eval_finite_blaschke(roots, 0, 1.0);
    const Complex at_minus = eval_finite_blaschke(roots, 0, -1.0);
    CHECK(std::abs(at_plus.imag()) < 1e-14);
    CHECK(std::abs(at_minus.imag()) < 1e-14);
    // -|a-1|/|a+1| and -|a+1|/|a-1|
    CHECK(at_plus.real() == doctest::Approx(-std::abs(a - 1.0) / std::abs(a + 1.0)));
    CHECK(at_minus.real() == doctest::Approx(-std::abs(a + 1.0) / std::abs(a - 1.0)));
  }
}

TEST_CASE("finite Blaschke product validates roots and poles") {
  CHECK_THROWS_AS(eval_finite_blaschke(std::vector<Complex>{{-0.1, 0.0}}, 0, {0.0, 1.0}), Error);
  CHECK_THROWS_AS(eval_finite_blaschke(std::vector<Complex>{}, 1, {1.0, 0.0}), Error);
}

TEST_CASE("frequency map sends the band onto [-1, 1]") {
  const FrequencyMap map(100.0, 500.0);
  CHECK(map(100.0) == -1.0);
  CHECK(map(500.0) == 1.0);
  CHECK(map(300.0) == doctest::Approx(0.0));
  CHECK_THROWS_AS(FrequencyMap(1.0, 1.0), Error);
}

TEST_CASE("equal index boundaries split the grid into balanced runs") {
  std::vector<double> omegas;
  for (int i = 0; i < 10; ++i) omegas.push_back(i);
  const auto b = equal_index_boundaries(omegas, 3);
  REQUIRE(b.size() == 4);
  CHECK(b.front() == 0.0);
  CHECK(b.back() == 9.0);
  const SegmentedPhaseModel model(b, std::vector<BlaschkePhaseModel>(3));
  std::vector<std::size_t> counts(3);
  for (double w : omegas) ++counts[model.segment_of(w)];
  for (std::size_t c : counts) CHECK((c == 3 || c == 4));
  CHECK(model.segment_of(9.0) == 2);
  CHECK_THROWS_AS(model.segment_of(9.5), Error);
}

TEST_CASE("segmented evaluation uses each segment's own model") {
  const std::vector<double> b{0.0, 1.0, 2.0};
  const auto maps = segment_maps(b);
  const SegmentedPhaseModel model(b, {BlaschkePhaseModel({}, 0.0, maps[0]), BlaschkePhaseModel({}, 1.0, maps[1])});
  const std::vector<double> w{0.5, 1.5};
  const auto out = eval_phase_segmented(model, w);
  CHECK(std::abs(out[0] - Complex{1.0, 0.0}) < 1e-15);
  CHECK(std::abs(out[1] - std::polar(1.0, 1.0)) < 1e-15);
}

TEST_CASE("reconstruct scales the phase by the magnitude") {
  const std::vector<double> mags{2.0, 0.5};
  const std::vector<Complex> phase{std::polar(1.0, 0.3), std::polar(1.0, -2.0)};
  const auto r = reconstruct(mags, phase);
  CHECK(std::abs(r[0] - 2.0 * phase[0]) < 1e-15);
  CHECK(std::abs(r[1] - 0.5 * phase[1]) < 1e-15);
  CHECK_THROWS_AS(reconstruct(std::vector<double>{1.0}, phase), Error);
}

TEST_CASE("grids must be strictly increasing") {
  CHECK_THROWS_AS(require_strictly_increasing(std::vector<double>{0.0, 1.0, 1.0}, "grid"), Error);
  CHECK_NOTHROW(require_strictly_increasing(std::vector<double>{0.0, 1.0, 2.0}, "grid"));
}
