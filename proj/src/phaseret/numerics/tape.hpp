#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace phaseret::numerics {

/// Reverse-mode differentiation record over real scalars.
///
/// A tape is built once as a straight-line program over parameter slots and
/// constants, then re-evaluated with `forward` for any parameter vector. Nodes
/// are appended in topological order, so each node's operands precede it.
/// Complex arithmetic is expressed through pairs of real nodes (see CVar).
class DiffTape {
 public:
  using Node = std::uint32_t;

  Node param(std::size_t index);
  Node constant(double value);

  Node add(Node a, Node b);
  Node sub(Node a, Node b);
  Node mul(Node a, Node b);
  Node div(Node a, Node b);
  Node neg(Node a);
  Node relu(Node a);
  Node sin(Node a);
  Node cos(Node a);
  Node sqrt(Node a);
  Node log(Node a);
  Node square(Node a);

  /// Marks the scalar whose value `forward` returns and `backward` differentiates.
  void set_output(Node node);

  /// Evaluates every node; returns the output node's value.
  double forward(std::span<const double> params);

  /// Gradient of the output with respect to each parameter slot. Requires a
  /// preceding `forward` on the current tape contents.
  std::vector<double> backward();

  double value(Node node) const;
  double adjoint(Node node) const;

  std::size_t size() const { return ops_.size(); }
  std::size_t num_params() const { return num_params_; }

 private:
  enum class Op : std::uint8_t { param, constant, add, sub, mul, div, neg, relu, sin, cos, sqrt, log, square };

  struct Entry {
    Op op;
    Node a = 0;
    Node b = 0;
    double data = 0.0;  // constant value, or the parameter index for Op::param
  };

  Node push(Entry entry);
  void check_node(Node node) const;

  std::vector<Entry> ops_;
  std::vector<double> values_;
  std::vector<double> adjoints_;
  std::optional<Node> output_;
  std::size_t num_params_ = 0;
  bool evaluated_ = false;
  bool differentiated_ = false;
};

/// Lightweight handle for building tapes with ordinary arithmetic syntax.
struct Var {
  DiffTape* tape = nullptr;
  DiffTape::Node id = 0;
};

Var operator+(Var a, Var b);
Var operator-(Var a, Var b);
Var operator*(Var a, Var b);
Var operator/(Var a, Var b);
Var operator-(Var a);
Var operator+(Var a, double c);
Var operator*(double c, Var a);
Var relu(Var a);
Var sin(Var a);
Var cos(Var a);
Var sqrt(Var a);
Var log(Var a);
Var square(Var a);

/// Complex value held as two real tape nodes.
struct CVar {
  Var re;
  Var im;
};

CVar operator+(CVar a, CVar b);
CVar operator-(CVar a, CVar b);
CVar operator*(CVar a, CVar b);
CVar operator/(CVar a, CVar b);
CVar conj(CVar a);
/// Squared modulus re^2 + im^2.
Var norm(CVar a);
/// exp(j * angle) as a complex pair.
CVar unit_phasor(Var angle);

}  // namespace phaseret::numerics
