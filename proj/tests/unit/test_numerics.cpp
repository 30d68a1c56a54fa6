#include <doctest.h>

#include <cmath>
#include <vector>

#include "phaseret/common/rng.hpp"
#include "phaseret/numerics/adam.hpp"
#include "phaseret/numerics/poly.hpp"
#include "phaseret/numerics/tape.hpp"

using namespace phaseret;
using namespace phaseret::numerics;

namespace {

Complex direct_poly(const std::vector<Complex>& roots, Complex z) {
  Complex p = 1.0;
  for (const Complex& a : roots) p *= z - a;
  return p;
}

std::vector<Complex> random_roots(Rng& rng, std::size_t m) {
  std::vector<Complex> roots;
  for (std::size_t k = 0; k < m; ++k) roots.emplace_back(rng.uniform(-2, 2), rng.uniform(-2, 2));
  return roots;
}

}  // namespace

TEST_CASE("polynomial from roots vanishes at each root and matches expansion") {
  Rng rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const auto roots = random_roots(rng, 1 + trial % 5);
    for (const Complex& a : roots) CHECK(std::abs(eval_poly_from_roots(roots, a)) < 1e-12);
    const Complex z{rng.uniform(-3, 3), rng.uniform(-3, 3)};
    CHECK(std::abs(eval_poly_from_roots(roots, z) - direct_poly(roots, z)) < 1e-12 * std::abs(direct_poly(roots, z)));
  }
}

TEST_CASE("para-conjugate equals the conjugate on the imaginary axis") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto roots = random_roots(rng, 1 + trial % 6);
    const double w = rng.uniform(-5, 5);
    const Complex z{0.0, w};
    const Complex expect = std::conj(direct_poly(roots, z));
    CHECK(std::abs(conj_reflect_eval(roots, z) - expect) < 1e-12 * (1 + std::abs(expect)));
    // Off the axis: conj(P(-conj(z))).
    const Complex s{rng.uniform(-2, 2), w};
    const Complex off = std::conj(direct_poly(roots, -std::conj(s)));
    CHECK(std::abs(conj_reflect_eval(roots, s) - off) < 1e-12 * (1 + std::abs(off)));
  }
}

TEST_CASE("tape gradients agree with central differences") {
  DiffTape tape;
  Var x{&tape, tape.param(0)};
  Var y{&tape, tape.param(1)};
  Var z{&tape, tape.param(2)};
  Var f = sin(x * y) + square(z) / (x + 3.0) - log(sqrt(y * y + 1.0)) + relu(z - x) + cos(z) * (-y);
  tape.set_output(f.id);

  Rng rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> p{rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(-1, 1)};
    if (std::abs(p[2] - p[0]) < 1e-3) continue;  // relu kink
    tape.forward(p);
    const auto g = tape.backward();
    for (std::size_t i = 0; i < 3; ++i) {
      const double h = 1e-6;
      auto hi = p, lo = p;
      hi[i] += h;
      lo[i] -= h;
      const double fd = (tape.forward(hi) - tape.forward(lo)) / (2 * h);
      CHECK(g[i] == doctest::Approx(fd).epsilon(1e-6));
    }
  }
}

TEST_CASE("complex tape arithmetic matches std::complex") {
  DiffTape tape;
  CVar a{{&tape, tape.param(0)}, {&tape, tape.param(1)}};
  CVar b{{&tape, tape.param(2)}, {&tape, tape.param(3)}};
  const CVar q = (a * b - conj(a)) / (b + a);
  Var out = norm(q);
  tape.set_output(out.id);
  const std::vector<double> p{0.3, -1.2, 0.7, 0.4};
  const Complex ca{p[0], p[1]}, cb{p[2], p[3]};
  const Complex cq = (ca * cb - std::conj(ca)) / (cb + ca);
  CHECK(tape.forward(p) == doctest::Approx(std::norm(cq)).epsilon(1e-14));
  CHECK(tape.value(q.re.id) == doctest::Approx(cq.real()).epsilon(1e-14));
  CHECK(tape.value(q.im.id) == doctest::Approx(cq.imag()).epsilon(1e-14));

  DiffTape t2;
  const CVar u = unit_phasor(Var{&t2, t2.param(0)});
  t2.set_output((u.re * u.re + u.im * u.im).id);
  CHECK(t2.forward(std::vector<double>{1.234}) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tape rejects backward before forward") {
  DiffTape tape;
  Var x{&tape, tape.param(0)};
  tape.set_output(square(x).id);
  CHECK_THROWS_AS(tape.backward(), Error);
}

TEST_CASE("adam first step moves each coordinate by the learning rate against the gradient sign") {
  Adam adam(3, {.learning_rate = 0.01});
  std::vector<double> params{1.0, -2.0, 0.5};
  const std::vector<double> grad{0.3, -4.0, 1e-3};
  adam.step(params, grad);
  // m_hat = g and v_hat = g^2 after bias correction.
  CHECK(params[0] == doctest::Approx(1.0 - 0.01 * 0.3 / (0.3 + 1e-8)));
  CHECK(params[1] == doctest::Approx(-2.0 + 0.01 * 4.0 / (4.0 + 1e-8)));
  CHECK(params[2] == doctest::Approx(0.5 - 0.01 * 1e-3 / (1e-3 + 1e-8)));
  CHECK(adam.steps() == 1);
}

TEST_CASE("adam matches a hand-rolled reference over several steps") {
  const AdamOptions o{.learning_rate = 0.05, .beta1 = 0.8, .beta2 = 0.99, .epsilon = 1e-6};
  Adam adam(1, o);
  std::vector<double> x{2.0};
  double ref = 2.0, m = 0.0, v = 0.0;
  for (int t = 1; t <= 25; ++t) {
    const double g = 2.0 * ref;  // d/dx x^2
    adam.step(x, std::vector<double>{g});
    m = o.beta1 * m + (1 - o.beta1) * g;
    v = o.beta2 * v + (1 - o.beta2) * g * g;
    const double mh = m / (1 - std::pow(o.beta1, t));
    const double vh = v / (1 - std::pow(o.beta2, t));
    ref -= o.learning_rate * mh / (std::sqrt(vh) + o.epsilon);
  }
  CHECK(x[0] == doctest::Approx(ref).epsilon(1e-13));
}

TEST_CASE("rng is deterministic and mix_seed separates streams") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(mix_seed(1, 0) != mix_seed(1, 1));
  CHECK(mix_seed(1, 0) != mix_seed(2, 0));
  Rng c(9);
  for (int i = 0; i < 1000; ++i) {
    const double u = c.uniform();
    CHECK((u >= 0.0 && u < 1.0));
    CHECK(c.below(7) < 7);
  }
}
