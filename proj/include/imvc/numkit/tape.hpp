#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <string>
#include <utility>
#include <vector>

#include "imvc/errors.hpp"
#include "imvc/numkit/matrix.hpp"

namespace imvc::num {

/// Trainable tensor living outside any tape. `grad` accumulates across
/// backward passes until an optimizer step (or zero_grad) clears it.
struct Parameter {
  std::string name;
  Matrix value;
  Matrix grad;

  Parameter() = default;
  Parameter(std::string n, Matrix v) : name(std::move(n)), value(std::move(v)), grad(value.rows(), value.cols()) {}

  void zero_grad() { grad = Matrix(value.rows(), value.cols()); }
};

class Tape;

/// Handle to a node on a Tape. Cheap to copy; valid while the tape lives.
class Var {
 public:
  Var() = default;

  const Matrix& value() const;
  const Matrix& grad() const;
  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  bool requires_grad() const;
  double scalar() const { return value()(0, 0); }

  Tape* tape() const noexcept { return tape_; }
  std::size_t id() const noexcept { return id_; }
  bool valid() const noexcept { return tape_ != nullptr; }

 private:
  friend class Tape;
  Var(Tape* t, std::size_t id) : tape_(t), id_(id) {}
  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

/// Full-graph reverse-mode tape. Nodes are appended in evaluation order, so
/// reverse insertion order is a valid reverse topological order.
class Tape {
 public:
  using Backward = std::function<void(Tape&, std::size_t)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var constant(Matrix value) { return push(std::move(value), false, {}); }
  /// Leaf whose gradient is kept on the tape (not bound to a Parameter).
  Var variable(Matrix value) { return push(std::move(value), true, {}); }
  Var parameter(Parameter& p) {
    Var v = push(p.value, true, {});
    nodes_[v.id_].param = &p;
    return v;
  }

  /// Append an interior node. `fn` is dropped when no parent needs a gradient.
  Var record(Matrix value, std::initializer_list<Var> parents, Backward fn) {
    return record(std::move(value), std::vector<Var>(parents), std::move(fn));
  }
  Var record(Matrix value, const std::vector<Var>& parents, Backward fn) {
    bool needs = false;
    for (const Var& p : parents) {
      if (p.tape_ != this) throw ContractError("Tape: operand recorded on a different tape");
      needs = needs || nodes_[p.id_].requires_grad;
    }
    return push(std::move(value), needs, needs ? std::move(fn) : Backward{});
  }

  const Matrix& value(std::size_t id) const { return nodes_[id].value; }
  const Matrix& grad(std::size_t id) const { return nodes_[id].grad; }
  bool requires_grad(std::size_t id) const { return nodes_[id].requires_grad; }

  /// Gradient accumulator of `v`, or nullptr when `v` needs no gradient.
  Matrix* sink(const Var& v) { return sink(v.id_); }
  Matrix* sink(std::size_t id) {
    Node& n = nodes_[id];
    return n.requires_grad ? &n.grad : nullptr;
  }

  std::size_t size() const noexcept { return nodes_.size(); }

  /// Reverse sweep from a 1x1 root. Node gradients are reset at the start of
  /// every sweep; bound Parameters accumulate.
  void backward(const Var& root) {
    if (root.tape_ != this) throw ContractError("backward: root belongs to another tape");
    const Matrix& rv = nodes_[root.id_].value;
    if (rv.rows() != 1 || rv.cols() != 1)
      throw ContractError("backward: root must be a 1x1 scalar, got " + rv.shape());
    for (Node& n : nodes_)
      if (n.requires_grad) n.grad = Matrix(n.value.rows(), n.value.cols());
    if (!nodes_[root.id_].requires_grad) return;
    nodes_[root.id_].grad(0, 0) = 1.0;
    for (std::size_t id = root.id_ + 1; id-- > 0;) {
      Node& n = nodes_[id];
      if (n.backward) n.backward(*this, id);
    }
    for (Node& n : nodes_)
      if (n.param) n.param->grad += n.grad;
  }

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    Backward backward;
    Parameter* param = nullptr;
  };

  Var push(Matrix value, bool requires_grad, Backward fn) {
    Node n;
    n.value = std::move(value);
    n.requires_grad = requires_grad;
    n.backward = std::move(fn);
    nodes_.push_back(std::move(n));
    return Var(this, nodes_.size() - 1);
  }

  std::vector<Node> nodes_;
};

inline const Matrix& Var::value() const { return tape_->value(id_); }
inline const Matrix& Var::grad() const { return tape_->grad(id_); }
inline bool Var::requires_grad() const { return tape_->requires_grad(id_); }

}  // namespace imvc::num
