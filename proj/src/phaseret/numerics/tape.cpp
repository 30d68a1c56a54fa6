#include "phaseret/numerics/tape.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "phaseret/common/error.hpp"

namespace phaseret::numerics {

DiffTape::Node DiffTape::push(Entry entry) {
  require(ops_.size() < std::numeric_limits<Node>::max(), Errc::invalid_argument, "tape is full");
  ops_.push_back(entry);
  evaluated_ = false;
  differentiated_ = false;
  return static_cast<Node>(ops_.size() - 1);
}

void DiffTape::check_node(Node node) const {
  require(node < ops_.size(), Errc::invalid_argument, "tape node " + std::to_string(node) + " does not exist");
}

DiffTape::Node DiffTape::param(std::size_t index) {
  if (index + 1 > num_params_) num_params_ = index + 1;
  return push({Op::param, 0, 0, static_cast<double>(index)});
}

DiffTape::Node DiffTape::constant(double value) {
  require(std::isfinite(value), Errc::domain, "tape constant must be finite");
  return push({Op::constant, 0, 0, value});
}

#define PHASERET_BINARY(name, opcode)                  \
  DiffTape::Node DiffTape::name(Node a, Node b) {      \
    check_node(a);                                     \
    check_node(b);                                     \
    return push({Op::opcode, a, b, 0.0});              \
  }
#define PHASERET_UNARY(name, opcode)                   \
  DiffTape::Node DiffTape::name(Node a) {              \
    check_node(a);                                     \
    return push({Op::opcode, a, 0, 0.0});              \
  }

PHASERET_BINARY(add, add)
PHASERET_BINARY(sub, sub)
PHASERET_BINARY(mul, mul)
PHASERET_BINARY(div, div)
PHASERET_UNARY(neg, neg)
PHASERET_UNARY(relu, relu)
PHASERET_UNARY(sin, sin)
PHASERET_UNARY(cos, cos)
PHASERET_UNARY(sqrt, sqrt)
PHASERET_UNARY(log, log)
PHASERET_UNARY(square, square)

#undef PHASERET_BINARY
#undef PHASERET_UNARY

void DiffTape::set_output(Node node) {
  check_node(node);
  output_ = node;
  evaluated_ = false;
  differentiated_ = false;
}

double DiffTape::forward(std::span<const double> params) {
  require(output_.has_value(), Errc::invalid_argument, "tape has no scalar output node");
  require(params.size() >= num_params_, Errc::dimension_mismatch,
          "tape references parameter " + std::to_string(num_params_ - 1) + " but only " +
              std::to_string(params.size()) + " were supplied");
  values_.resize(ops_.size());
  double* v = values_.data();
  for (std::size_t i = 0; i < ops_.size(); ++i) {
    const Entry& e = ops_[i];
    switch (e.op) {
      case Op::param: v[i] = params[static_cast<std::size_t>(e.data)]; break;
      case Op::constant: v[i] = e.data; break;
      case Op::add: v[i] = v[e.a] + v[e.b]; break;
      case Op::sub: v[i] = v[e.a] - v[e.b]; break;
      case Op::mul: v[i] = v[e.a] * v[e.b]; break;
      case Op::div: v[i] = v[e.a] / v[e.b]; break;
      case Op::neg: v[i] = -v[e.a]; break;
      case Op::relu: v[i] = v[e.a] > 0.0 ? v[e.a] : 0.0; break;
      case Op::sin: v[i] = std::sin(v[e.a]); break;
      case Op::cos: v[i] = std::cos(v[e.a]); break;
      case Op::sqrt: v[i] = std::sqrt(v[e.a]); break;
      case Op::log: v[i] = std::log(v[e.a]); break;
      case Op::square: v[i] = v[e.a] * v[e.a]; break;
    }
  }
  evaluated_ = true;
  differentiated_ = false;
  return v[*output_];
}

std::vector<double> DiffTape::backward() {
  require(evaluated_, Errc::not_ready, "tape backward called before forward");
  adjoints_.assign(ops_.size(), 0.0);
  std::vector<double> grad(num_params_, 0.0);
  const double* v = values_.data();
  double* g = adjoints_.data();
  g[*output_] = 1.0;
  for (std::size_t i = *output_ + 1; i-- > 0;) {
    const Entry& e = ops_[i];
    const double gi = g[i];
    if (gi == 0.0) continue;
    switch (e.op) {
      case Op::param: grad[static_cast<std::size_t>(e.data)] += gi; break;
      case Op::constant: break;
      case Op::add:
        g[e.a] += gi;
        g[e.b] += gi;
        break;
      case Op::sub:
        g[e.a] += gi;
        g[e.b] -= gi;
        break;
      case Op::mul:
        g[e.a] += gi * v[e.b];
        g[e.b] += gi * v[e.a];
        break;
      case Op::div:
        g[e.a] += gi / v[e.b];
        g[e.b] -= gi * v[i] / v[e.b];
        break;
      case Op::neg: g[e.a] -= gi; break;
      // Subgradient 0 at the kink.
      case Op::relu: g[e.a] += v[e.a] > 0.0 ? gi : 0.0; break;
      case Op::sin: g[e.a] += gi * std::cos(v[e.a]); break;
      case Op::cos: g[e.a] -= gi * std::sin(v[e.a]); break;
      case Op::sqrt: g[e.a] += gi * 0.5 / v[i]; break;
      case Op::log: g[e.a] += gi / v[e.a]; break;
      case Op::square: g[e.a] += 2.0 * gi * v[e.a]; break;
    }
  }
  differentiated_ = true;
  return grad;
}

double DiffTape::value(Node node) const {
  check_node(node);
  require(evaluated_, Errc::not_ready, "tape value requested before forward");
  return values_[node];
}

double DiffTape::adjoint(Node node) const {
  check_node(node);
  require(differentiated_, Errc::not_ready, "tape adjoint requested before backward");
  return adjoints_[node];
}

namespace {
DiffTape& same_tape(Var a, Var b) {
  require(a.tape != nullptr && a.tape == b.tape, Errc::invalid_argument, "variables belong to different tapes");
  return *a.tape;
}
}  // namespace

Var operator+(Var a, Var b) { return {a.tape, same_tape(a, b).add(a.id, b.id)}; }
Var operator-(Var a, Var b) { return {a.tape, same_tape(a, b).sub(a.id, b.id)}; }
Var operator*(Var a, Var b) { return {a.tape, same_tape(a, b).mul(a.id, b.id)}; }
Var operator/(Var a, Var b) { return {a.tape, same_tape(a, b).div(a.id, b.id)}; }
Var operator-(Var a) { return {a.tape, a.tape->neg(a.id)}; }
Var operator+(Var a, double c) { return a + Var{a.tape, a.tape->constant(c)}; }
Var operator*(double c, Var a) { return Var{a.tape, a.tape->constant(c)} * a; }
Var relu(Var a) { return {a.tape, a.tape->relu(a.id)}; }
Var sin(Var a) { return {a.tape, a.tape->sin(a.id)}; }
Var cos(Var a) { return {a.tape, a.tape->cos(a.id)}; }
Var sqrt(Var a) { return {a.tape, a.tape->sqrt(a.id)}; }
Var log(Var a) { return {a.tape, a.tape->log(a.id)}; }
Var square(Var a) { return {a.tape, a.tape->square(a.id)}; }

CVar operator+(CVar a, CVar b) { return {a.re + b.re, a.im + b.im}; }
CVar operator-(CVar a, CVar b) { return {a.re - b.re, a.im - b.im}; }
CVar operator*(CVar a, CVar b) { return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re}; }
CVar operator/(CVar a, CVar b) {
  const Var den = norm(b);
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
CVar conj(CVar a) { return {a.re, -a.im}; }
Var norm(CVar a) { return square(a.re) + square(a.im); }
CVar unit_phasor(Var angle) { return {cos(angle), sin(angle)}; }

}  // namespace phaseret::numerics
