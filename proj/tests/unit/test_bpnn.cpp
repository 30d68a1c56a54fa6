#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "phaseret/bpnn/bpnn.hpp"
#include "phaseret/bpnn/checkpoint.hpp"
#include "phaseret/bpnn/mlp.hpp"
#include "phaseret/common/rng.hpp"
#include "phaseret/datasets/generators.hpp"

using namespace phaseret;
using namespace phaseret::bpnn;

namespace {

datasets::SpectralDataset toy_dataset(std::size_t samples, std::size_t freqs, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> omegas;
  for (std::size_t i = 0; i < freqs; ++i) omegas.push_back(1.0 + 0.25 * static_cast<double>(i));
  ComplexMatrix values(samples, freqs);
  for (std::size_t s = 0; s < samples; ++s) {
    for (std::size_t i = 0; i < freqs; ++i) values(s, i) = std::polar(rng.uniform(0.2, 1.5), rng.uniform(-3, 3));
  }
  return datasets::SpectralDataset::from_values(omegas, values);
}

// Central-difference check of dLoss/dparams through the whole pipeline.
void check_gradient(const MlpParameters& params, const Matrix& inputs, const Objective& objective) {
  MlpTrace trace;
  const Matrix out = mlp_forward(params, inputs, &trace);
  Matrix d_out;
  objective.loss(out, &d_out);
  std::vector<double> grad(params.values.size());
  mlp_backward(params, trace, d_out, grad);

  for (std::size_t i = 0; i < params.values.size(); ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(params.values[i]));
    MlpParameters hi = params, lo = params;
    hi.values[i] += h;
    lo.values[i] -= h;
    const double fd = (objective.loss(mlp_forward(hi, inputs), nullptr) - objective.loss(mlp_forward(lo, inputs), nullptr)) / (2 * h);
    const double scale = std::max({std::abs(fd), std::abs(grad[i]), 1e-8});
    CHECK(std::abs(fd - grad[i]) / scale < 1e-4);
  }
}

}  // namespace

TEST_CASE("mlp forward matches a hand computation") {
  MlpParameters p({2, 2, 1}, 0.0);
  // layer 0: W = [[1, -1], [0.5, 2]], b = [0, -1]; layer 1: W = [[2, -3]], b = [0.25]
  p.values = {1, -1, 0.5, 2, 0, -1, 2, -3, 0.25};
  Matrix x(1, 2);
  x << 1.0, 2.0;
  // hidden = relu([-1, 3.5]) = [0, 3.5]; out = -10.5 + 0.25
  CHECK(mlp_forward(p, x)(0, 0) == doctest::Approx(-10.25));
}

TEST_CASE("mlp parameter layout") {
  const std::vector<std::size_t> w{3, 4, 2};
  CHECK(MlpParameters::count(w) == 3 * 4 + 4 + 4 * 2 + 2);
  MlpParameters p(w, 0.0);
  CHECK(p.weight_offset(1) == 16);
  CHECK(p.bias_offset(1) == 24);
}

// Reduction order follows buffer alignment, so parameters must never sit on
// an arbitrary malloc boundary.
TEST_CASE("mlp parameters are stored at Eigen's maximum alignment") {
  for (std::size_t n = 1; n <= 40; ++n) {
    const MlpParameters p({n, 3}, 0.0);
    CHECK(reinterpret_cast<std::uintptr_t>(p.values.data()) % EIGEN_MAX_ALIGN_BYTES == 0);
  }
}

TEST_CASE("mlp init is deterministic and within the Kaiming bound") {
  const auto a = init_mlp({10, 8, 3}, 5);
  const auto b = init_mlp({10, 8, 3}, 5);
  CHECK(a.values == b.values);
  CHECK(init_mlp({10, 8, 3}, 6).values != a.values);
  const double bound = std::sqrt(6.0 / 10.0);
  for (std::size_t i = 0; i < 80; ++i) CHECK(std::abs(a.values[i]) <= bound);
}

TEST_CASE("mlp backward matches finite differences") {
  Rng rng(8);
  const auto params = init_mlp({4, 6, 5, 3}, 2);
  Matrix x(3, 4);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-1, 1);
  Matrix target(3, 3);
  for (Eigen::Index i = 0; i < target.size(); ++i) target.data()[i] = rng.uniform(-1, 1);

  struct Squared final : Objective {
    const Matrix& t;
    explicit Squared(const Matrix& t) : t(t) {}
    std::size_t num_samples() const override { return t.rows(); }
    std::size_t output_width() const override { return t.cols(); }
    double loss(const Matrix& o, Matrix* d) const override {
      if (d) *d = (o - t) * (2.0 / t.size());
      return (o - t).squaredNorm() / t.size();
    }
    void sample_errors(const Matrix&, std::vector<double>&) const override {}
  } objective(target);
  check_gradient(params, x, objective);
}

TEST_CASE("dropout zeroes or rescales hidden units and is reproducible") {
  const auto params = init_mlp({3, 200, 2}, 1, 0.5);
  Matrix x = Matrix::Ones(1, 3);
  Rng r1(4), r2(4);
  MlpTrace t1, t2;
  const Matrix a = mlp_forward(params, x, &t1, &r1);
  const Matrix b = mlp_forward(params, x, &t2, &r2);
  CHECK(a == b);
  REQUIRE(t1.masks.size() == 1);
  std::size_t zeros = 0;
  for (Eigen::Index i = 0; i < t1.masks[0].size(); ++i) {
    const double v = t1.masks[0].data()[i];
    CHECK((v == 0.0 || v == doctest::Approx(2.0)));
    zeros += v == 0.0;
  }
  CHECK(zeros > 50);
  CHECK(zeros < 150);
}

TEST_CASE("bpnn layout sizes and widths") {
  const std::vector<double> omegas{1, 2, 3, 4, 5, 6, 7, 8};
  const BpnnLayout layout(omegas, 3, 2);
  CHECK(layout.block() == 7);
  CHECK(layout.outputs() == 14);
  CHECK(layout.normalized.front() == doctest::Approx(-1.0));
  CHECK(layout.normalized.back() == doctest::Approx(1.0));
  BpnnConfig config;
  config.roots = 3;
  config.segments = 2;
  config.hidden = {16};
  CHECK(bpnn_widths(config, 8) == std::vector<std::size_t>{8, 16, 14});
}

TEST_CASE("bpnn prediction keeps the input magnitudes") {
  const auto data = toy_dataset(1, 12, 3);
  const BpnnLayout layout(data.omegas, 4, 1);
  const auto params = init_mlp({12, 16, layout.outputs()}, 9);
  std::vector<double> mags(data.magnitudes.row(0).begin(), data.magnitudes.row(0).end());
  const auto pred = bpnn_forward(params, mags, layout);
  for (std::size_t i = 0; i < mags.size(); ++i) CHECK(std::abs(pred[i]) == doctest::Approx(mags[i]).epsilon(1e-12));
}

TEST_CASE("bpnn loss is the mean squared complex error") {
  const std::vector<Complex> a{{1, 0}, {0, 1}};
  const std::vector<Complex> b{{0, 0}, {0, -1}};
  CHECK(bpnn_loss(a, b) == doctest::Approx((1.0 + 4.0) / 2.0));
}

TEST_CASE("bpnn objective gradient matches finite differences") {
  const auto data = toy_dataset(3, 8, 21);
  for (std::size_t segments : {1u, 2u}) {
    const BpnnLayout layout(data.omegas, 2, segments);
    const BpnnObjective objective(layout, data);
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const auto params = init_mlp({8, 16, layout.outputs()}, seed);
      check_gradient(params, data.magnitudes, objective);
    }
  }
}

TEST_CASE("bpnn objective sample errors average to the loss") {
  const auto data = toy_dataset(4, 10, 2);
  const BpnnLayout layout(data.omegas, 3, 1);
  const BpnnObjective objective(layout, data);
  const auto params = init_mlp({10, 8, layout.outputs()}, 1);
  const Matrix out = mlp_forward(params, data.magnitudes);
  std::vector<double> errors;
  objective.sample_errors(out, errors);
  double mean = 0.0;
  for (double e : errors) mean += e / errors.size();
  CHECK(mean == doctest::Approx(objective.loss(out, nullptr)).epsilon(1e-12));
}

TEST_CASE("training is deterministic and the best score bounds every recorded score") {
  const auto train = toy_dataset(4, 10, 5);
  const auto test = toy_dataset(6, 10, 6);
  BpnnConfig config;
  config.roots = 2;
  config.hidden = {8};
  config.epochs = 40;
  config.seed = 3;
  const auto a = train_bpnn(config, train, test);
  const auto b = train_bpnn(config, train, test);
  CHECK(a.training.report.test_mse == b.training.report.test_mse);
  CHECK(a.training.report.train_loss == b.training.report.train_loss);
  CHECK(a.training.report.test_mse.size() == 40);
  for (double m : a.training.report.test_mse) CHECK(a.training.report.best_test_mse <= m);
  const auto& r = a.training.report;
  CHECK(r.test_mse[r.best_epoch - 1] == r.best_test_mse);
  CHECK(r.final_test_mse == r.test_mse.back());
}

TEST_CASE("eval_every thins the evaluation but always scores the last epoch") {
  const auto train = toy_dataset(2, 6, 1);
  const auto test = toy_dataset(2, 6, 2);
  BpnnConfig config;
  config.hidden = {4};
  config.epochs = 25;
  config.eval_every = 10;
  const auto r = train_bpnn(config, train, test).training.report;
  CHECK(r.eval_epochs == std::vector<std::size_t>{10, 20, 25});
}

TEST_CASE("training reduces the loss on a single sample") {
  const auto train = toy_dataset(1, 10, 7);
  BpnnConfig config;
  config.roots = 4;
  config.hidden = {16, 16};
  config.epochs = 300;
  config.learning_rate = 1e-2;
  const auto r = train_bpnn(config, train, train).training.report;
  CHECK(r.train_loss.back() < 0.5 * r.train_loss.front());
}

TEST_CASE("config validation") {
  BpnnConfig c;
  c.roots = 0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.dropout = 1.0;
  CHECK_THROWS_AS(c.validate(), Error);
  c = {};
  c.learning_rate = 0.0;
  CHECK_THROWS_AS(c.validate(), Error);
}

TEST_CASE("checkpoint round trip is exact and rejects corruption") {
  BpnnCheckpoint ck;
  ck.config.roots = 3;
  ck.config.segments = 2;
  ck.config.hidden = {5};
  ck.omegas = {1.0, 1.5, 2.0, 2.5, 3.0, 3.25};
  ck.params = init_mlp(bpnn_widths(ck.config, ck.omegas.size()), 12);
  std::stringstream buffer;
  write_checkpoint(buffer, ck);
  const auto text = buffer.str();
  const auto back = read_checkpoint(buffer);
  CHECK(back.omegas == ck.omegas);
  CHECK(back.params.values == ck.params.values);
  CHECK(back.params.widths == ck.params.widths);
  CHECK(back.config.segments == 2);

  std::stringstream truncated(text.substr(0, text.size() / 2));
  CHECK_THROWS_AS(read_checkpoint(truncated), Error);
  std::stringstream garbage("not a checkpoint\n");
  CHECK_THROWS_AS(read_checkpoint(garbage), Error);
}
