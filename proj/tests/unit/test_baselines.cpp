#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "phaseret/baselines/aaa.hpp"
#include "phaseret/baselines/aaa_net.hpp"
#include "phaseret/baselines/fcnn.hpp"
#include "phaseret/baselines/kk.hpp"
#include "phaseret/baselines/linear_bp.hpp"
#include "phaseret/baselines/music.hpp"
#include "phaseret/blaschke/blaschke.hpp"
#include "phaseret/bpnn/mlp.hpp"
#include "phaseret/common/rng.hpp"
#include "phaseret/datasets/generators.hpp"

using namespace phaseret;
using namespace phaseret::baselines;

namespace {

std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  return x;
}

Complex rational22(Complex z) { return (z * z + 0.5 * z + 1.0) / ((z - 3.0) * (z + Complex{0.5, 2.5})); }

datasets::SpectralDataset small_lorentzian(std::size_t n, std::uint64_t seed, std::size_t freqs = 40) {
  datasets::LorentzianOptions o;
  o.n_train = n;
  o.n_test = 1;
  o.n_freq = freqs;
  return datasets::gen_lorentzian_dataset(seed, o).train;
}

}  // namespace

// ---- Kramers-Kronig ----

TEST_CASE("kk: constant magnitude gives zero phase") {
  const auto w = linspace(1.0, 10.0, 200);
  const std::vector<double> mags(w.size(), 0.37);
  for (double phi : kk_phase_only(mags, w)) CHECK(phi == 0.0);
}

TEST_CASE("kk recovers the phase of a function analytic in the upper half plane") {
  // f(w) = 1 / (1 - j w): |f|^2 = 1 / (1 + w^2), arg f = atan(w).
  const auto w = linspace(0.0, 2000.0, 20001);
  std::vector<double> mags(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) mags[i] = 1.0 / std::sqrt(1.0 + w[i] * w[i]);
  const auto phi = kk_phase_only(mags, w);
  for (double target : {0.5, 1.0, 3.0, 10.0}) {
    const std::size_t i = static_cast<std::size_t>(std::lround(target / 0.1));
    CHECK(phi[i] == doctest::Approx(std::atan(w[i])).epsilon(0.01));
  }
}

TEST_CASE("kk output keeps the magnitude") {
  const auto w = linspace(1.0, 5.0, 50);
  std::vector<double> mags(w.size());
  for (std::size_t i = 0; i < w.size(); ++i) mags[i] = 1.0 + 0.5 * std::sin(w[i]);
  const auto f = kk_phase(mags, w);
  for (std::size_t i = 0; i < w.size(); ++i) CHECK(std::abs(f[i]) == doctest::Approx(mags[i]));
}

TEST_CASE("kk rejects zero magnitude and bad grids") {
  CHECK_THROWS_AS(kk_phase_only(std::vector<double>{1.0, 0.0, 1.0}, std::vector<double>{1, 2, 3}), Error);
  CHECK_THROWS_AS(kk_phase_only(std::vector<double>{1.0, 1.0, 1.0}, std::vector<double>{1, 3, 2}), Error);
  CHECK_THROWS_AS(kk_phase_only(std::vector<double>{1.0, 1.0, 1.0}, std::vector<double>{-1, 0, 1}), Error);
}

// ---- AAA ----

TEST_CASE("aaa recovers a type (2,2) rational function") {
  std::vector<Complex> z, f;
  for (double x : linspace(-1.0, 1.0, 100)) {
    z.emplace_back(0.0, x);
    f.push_back(rational22(z.back()));
  }
  const auto fit = aaa_fit(z, f, 5);
  CHECK(fit.model.size() <= 5);
  CHECK(fit.max_error < 1e-10);
  for (std::size_t k = 0; k < fit.support_indices.size(); ++k) {
    const std::size_t i = fit.support_indices[k];
    CHECK(std::abs(fit.model(z[i]) - f[i]) <= 1e-12 * std::abs(f[i]));
  }
  // Off the sample set as well.
  const Complex probe{0.1, 0.33};
  CHECK(std::abs(fit.model(probe) - rational22(probe)) < 1e-8);
}

TEST_CASE("aaa stops early on a low-degree target") {
  std::vector<Complex> z, f;
  for (double x : linspace(0.0, 2.0, 30)) {
    z.emplace_back(x, 0.0);
    f.push_back(1.0 / (z.back() + 3.0));
  }
  const auto fit = aaa_fit(z, f, 5);
  CHECK(fit.model.size() <= 3);
  CHECK(fit.max_error < 1e-12);
}

TEST_CASE("aaa input validation") {
  const std::vector<Complex> z{{0, 0}, {1, 0}, {2, 0}};
  CHECK_THROWS_AS(aaa_fit(z, std::vector<Complex>{1, 2}, 1), Error);
  CHECK_THROWS_AS(aaa_fit(z, std::vector<Complex>{0, 0, 0}, 1), Error);
  CHECK_THROWS_AS(aaa_fit(std::vector<Complex>{{0, 0}, {0, 0}, {1, 0}}, std::vector<Complex>{1, 2, 3}, 1), Error);
}

TEST_CASE("aaa encoding is canonical and decodes to the same function") {
  std::vector<Complex> z, f;
  for (double x : linspace(-1.0, 1.0, 60)) {
    z.emplace_back(0.0, x);
    f.push_back(std::polar(1.0, 3.0 * x + x * x));
  }
  const auto fit = aaa_fit(z, f, 5);
  const auto row = aaa_encode(fit.model, 5);
  CHECK(row.size() == 5 * kAaaValuesPerSupport);
  CHECK(row[2] == 0.0);  // first weight rotated onto the real axis
  CHECK(row[1] >= 0.0);
  const auto back = aaa_decode(row);
  for (const Complex& p : z) CHECK(std::abs(back(p) - fit.model(p)) < 1e-12);

  BarycentricModel scaled = fit.model;
  for (auto& wt : scaled.weights) wt *= std::polar(2.5, 1.1);
  const auto row2 = aaa_encode(scaled, 5);
  for (std::size_t i = 0; i < row.size(); ++i) CHECK(row2[i] == doctest::Approx(row[i] * (i % 5 == 1 || i % 5 == 2 ? 2.5 : 1.0)).epsilon(1e-10));
}

TEST_CASE("aaa encoding pads unused supports with zeros") {
  std::vector<Complex> z, f;
  for (double x : linspace(-1.0, 1.0, 20)) {
    z.emplace_back(0.0, x);
    f.push_back(1.0);
  }
  const auto fit = aaa_fit(z, f, 5);
  const auto row = aaa_encode(fit.model, 5);
  for (std::size_t i = fit.model.size() * kAaaValuesPerSupport; i < row.size(); ++i) CHECK(row[i] == 0.0);
  CHECK(std::abs(aaa_decode(row)({0.0, 0.3}) - 1.0) < 1e-12);
}

TEST_CASE("aaa-net stage one interpolates each training spectrum at its support points") {
  const auto data = small_lorentzian(3, 2, 60);
  AaaNetConfig config;
  const Matrix rows = aaa_encode_dataset(data, config);
  const blaschke::FrequencyMap map(data.omegas.front(), data.omegas.back());
  std::vector<double> x;
  for (double w : data.omegas) x.push_back(map(w));
  for (Eigen::Index s = 0; s < rows.rows(); ++s) {
    const std::vector<double> row(rows.row(s).begin(), rows.row(s).end());
    const std::vector<double> mags(data.magnitudes.row(s).begin(), data.magnitudes.row(s).end());
    const auto rebuilt = aaa_reconstruct(row, mags, x);
    std::size_t matched = 0;
    for (std::size_t j = 0; j < config.max_support; ++j) {
      const double xj = row[j * kAaaValuesPerSupport];
      for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i] != xj || row[j * kAaaValuesPerSupport + 1] == 0.0) continue;
        CHECK(std::abs(rebuilt[i] - data.values(s, i)) <= 1e-12 * std::abs(data.values(s, i)));
        ++matched;
      }
    }
    CHECK(matched >= 1);
  }
  const AaaReconstructionObjective objective(data, config.max_support);
  Matrix grad;
  CHECK_THROWS_AS(objective.loss(rows, &grad), Error);
}

TEST_CASE("parameter mse objective") {
  Matrix t(2, 2);
  t << 1, 2, 3, 4;
  const ParameterMseObjective objective(t);
  Matrix out = Matrix::Zero(2, 2);
  Matrix d;
  CHECK(objective.loss(out, &d) == doctest::Approx(30.0 / 4.0));
  CHECK(d(1, 1) == doctest::Approx(-2.0 * 4.0 / 4.0));
}

TEST_CASE("aaa-net pipeline runs end to end") {
  const auto train = small_lorentzian(4, 3);
  const auto test = small_lorentzian(3, 4);
  AaaNetConfig config;
  config.hidden = {8};
  config.epochs = 20;
  const auto result = aaa_network_pipeline(config, train, test);
  CHECK(std::isfinite(result.training.report.best_test_mse));
  CHECK(result.stage1_train_mse >= 0.0);
}

// ---- MUSIC ----

TEST_CASE("music finds planted frequencies") {
  const std::vector<double> freqs{0.7, 2.1};
  const std::size_t M = 64, N = 8, grid = 640;
  const ComplexMatrix A = steering_matrix(freqs, M);
  Rng rng(1);
  ComplexMatrix x(N, M);
  for (std::size_t s = 0; s < N; ++s) {
    const Complex a{rng.normal(), rng.normal()}, b{rng.normal(), rng.normal()};
    for (std::size_t k = 0; k < M; ++k) x(s, k) = a * A(k, 0) + b * A(k, 1);
  }
  auto est = music_frequencies(x, 2, grid);
  std::sort(est.begin(), est.end());
  const double cell = 2 * std::numbers::pi / grid;
  CHECK(std::abs(est[0] - freqs[0]) <= cell);
  CHECK(std::abs(est[1] - freqs[1]) <= cell);
}

TEST_CASE("steering matrix entries") {
  const auto A = steering_matrix(std::vector<double>{0.3}, 4);
  for (int k = 0; k < 4; ++k) CHECK(std::abs(A(k, 0) - std::polar(1.0, 0.3 * k)) < 1e-15);
}

TEST_CASE("find_peaks on a circular grid") {
  const std::vector<double> v{5, 1, 2, 2, 1, 3, 0, 4};
  // 5 wraps around to neighbours 4 and 1; the flat top 2,2 counts once.
  const auto peaks = find_peaks(v);
  CHECK(peaks == std::vector<std::size_t>{0, 5, 2});
}

TEST_CASE("music loss gradient matches the tape") {
  Rng rng(3);
  const auto A = steering_matrix(std::vector<double>{0.4, 1.3, 2.9}, 12);
  std::vector<double> target(12);
  for (double& t : target) t = rng.uniform(0.1, 2.0);
  auto tape = music_loss_tape(A, target);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> s(6);
    for (double& v : s) v = rng.uniform(-1, 1);
    std::vector<double> grad;
    const double loss = music_loss(A, target, s, &grad);
    CHECK(tape.forward(s) == doctest::Approx(loss).epsilon(1e-12));
    const auto g = tape.backward();
    for (std::size_t i = 0; i < 6; ++i) CHECK(grad[i] == doctest::Approx(g[i]).epsilon(1e-10));
  }
}

TEST_CASE("music retrieval fits planted magnitudes") {
  const auto A = steering_matrix(std::vector<double>{0.5, 1.7}, 16);
  const Eigen::VectorXcd s = Eigen::Vector2cd{{0.8, -0.3}, {-0.2, 0.6}};
  const Eigen::VectorXcd f = A * s;
  std::vector<double> target(16);
  for (int k = 0; k < 16; ++k) target[k] = std::abs(f(k));
  const auto fit = music_retrieve(A, target, {.restarts = 64, .epochs = 300, .learning_rate = 1e-2, .seed = 0});
  CHECK(fit.loss < 1e-3);
  for (int k = 0; k < 16; ++k) CHECK(std::abs(std::abs(fit.spectrum[k]) - target[k]) < 0.05);
}

// ---- FCNN ----

TEST_CASE("fcnn decode interleaves real and imaginary parts") {
  const auto v = fcnn_decode(std::vector<double>{1, 2, 3, 4});
  CHECK(v == std::vector<Complex>{{1, 2}, {3, 4}});
  CHECK_THROWS_AS(fcnn_decode(std::vector<double>{1, 2, 3}), Error);
}

TEST_CASE("fcnn objective is the complex mse and its gradient is exact") {
  const auto data = small_lorentzian(2, 5, 6);
  const FcnnObjective objective(data);
  CHECK(objective.output_width() == 12);
  Rng rng(2);
  Matrix out(2, 12);
  for (Eigen::Index i = 0; i < out.size(); ++i) out.data()[i] = rng.uniform(-1, 1);
  double expect = 0.0;
  for (int s = 0; s < 2; ++s) {
    for (int i = 0; i < 6; ++i) expect += std::norm(data.values(s, i) - Complex(out(s, 2 * i), out(s, 2 * i + 1))) / 12.0;
  }
  Matrix d;
  CHECK(objective.loss(out, &d) == doctest::Approx(expect).epsilon(1e-13));
  const double h = 1e-6;
  Matrix hi = out, lo = out;
  hi(1, 3) += h;
  lo(1, 3) -= h;
  CHECK(d(1, 3) == doctest::Approx((objective.loss(hi, nullptr) - objective.loss(lo, nullptr)) / (2 * h)).epsilon(1e-6));
}

TEST_CASE("fcnn grid enumerates every combination") {
  FcnnGrid grid;
  const auto runs = fcnn_grid_runs(grid, 10);
  CHECK(runs.size() == 4 * 4 * 5 * 5 * 3);
  CHECK(runs.front().arch() == "32x1");
  CHECK(runs.back().arch() == "256x4");
  FcnnGrid bad;
  bad.widths.clear();
  CHECK_THROWS_AS(bad.validate(), Error);
}

TEST_CASE("fcnn best per arch and seed picks the lowest score") {
  FcnnRun a, b, c;
  a.spec = {.width = 8, .depth = 1, .dropout = 0.0, .learning_rate = 1e-3, .seed = 0};
  b.spec = {.width = 8, .depth = 1, .dropout = 0.1, .learning_rate = 1e-3, .seed = 0};
  c.spec = {.width = 8, .depth = 1, .dropout = 0.0, .learning_rate = 1e-3, .seed = 1};
  a.report.best_test_mse = 0.5;
  b.report.best_test_mse = 0.2;
  c.report.best_test_mse = 0.9;
  const auto best = fcnn_best_per_arch_seed({a, b, c});
  REQUIRE(best.size() == 2);
  CHECK(best[0].report.best_test_mse == 0.2);
  CHECK(best[1].report.best_test_mse == 0.9);
}

TEST_CASE("fcnn baseline trains a tiny grid") {
  const auto train = small_lorentzian(3, 7, 10);
  const auto test = small_lorentzian(2, 8, 10);
  FcnnGrid grid;
  grid.widths = {8};
  grid.depths = {1, 2};
  grid.dropouts = {0.0};
  grid.learning_rates = {1e-3};
  grid.seeds = 2;
  grid.epochs = 10;
  const auto summary = fcnn_baseline(grid, train, test);
  CHECK(summary.runs.size() == 4);
  CHECK(summary.best_per_arch.size() == 2);
  for (const auto& r : summary.best_per_arch) CHECK(summary.overall_best.report.best_test_mse <= r.report.best_test_mse);
}

// ---- Linear + BP ----

TEST_CASE("linear-bp has no hidden layer") {
  const auto train = small_lorentzian(2, 11, 10);
  const auto test = small_lorentzian(2, 12, 10);
  bpnn::BpnnConfig config;
  config.epochs = 5;
  config.dropout = 0.3;
  const auto r = linear_bp(config, train, test);
  CHECK(r.training.best_params.widths == std::vector<std::size_t>{10, 9});
  CHECK(r.config.hidden.empty());
  CHECK(r.config.dropout == 0.0);
}
