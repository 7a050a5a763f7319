#pragma once

#include <cstddef>
#include <deque>
#include <functional>
#include <initializer_list>
#include <span>
#include <string_view>
#include <vector>

#include "pairlink/rng.hpp"
#include "pairlink/tensor.hpp"

namespace pairlink {

class Tape;
struct Parameter;

enum class Mode { train, eval };

// Handle to a value recorded on a Tape. Cheap to copy; valid while the tape
// is alive and not cleared.
class Tensor {
 public:
  Tensor() = default;

  const Matrix& value() const;
  /// Gradient from the most recent backward pass. Requires requires_grad().
  const Matrix& grad() const;
  bool requires_grad() const;

  std::size_t rows() const { return value().rows(); }
  std::size_t cols() const { return value().cols(); }
  /// Convenience for 1x1 tensors.
  double item() const;

  Tape* tape() const noexcept { return tape_; }
  std::size_t id() const noexcept { return id_; }

 private:
  friend class Tape;
  Tensor(Tape* tape, std::size_t id) : tape_(tape), id_(id) {}

  Tape* tape_ = nullptr;
  std::size_t id_ = 0;
};

// Records primitive operations in execution order and replays the chain rule
// in reverse. Parameter leaves push their gradient into the owning Parameter
// (accumulating, so two backward passes without zeroing double it).
// Clearing or destroying the tape releases every intermediate.
class Tape {
 public:
  using Backprop = std::function<void(Tape&, const Matrix& out_grad)>;

  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Tensor constant(Matrix value);
  /// Leaf bound to a parameter. The parameter must outlive the tape.
  Tensor parameter(Parameter& p);

  void backward(const Tensor& loss);
  void clear();
  std::size_t size() const noexcept { return nodes_.size(); }

  // Primitive-implementation interface.
  Tensor record(Matrix value, std::initializer_list<Tensor> inputs, Backprop backprop,
                std::string_view op);
  const Matrix& value_of(std::size_t id) const;
  const Matrix& grad_of(std::size_t id) const;
  bool requires_grad(std::size_t id) const;
  /// Adds `delta` into the gradient of node `id` (no-op when it needs none).
  void accumulate(std::size_t id, const Matrix& delta);
  Matrix& grad_buffer(std::size_t id);

 private:
  struct Node {
    Matrix value;
    Matrix grad;
    bool requires_grad = false;
    Parameter* param = nullptr;
    Backprop backprop;
  };

  void check_owned(const Tensor& t) const;

  std::deque<Node> nodes_;
};

// Primitive set. Each checks shapes (DimensionError naming both shapes) and
// finiteness of its result (NumericError), and records a backward rule when
// any input requires a gradient.
Tensor matmul(const Tensor& a, const Tensor& b);
/// Sparse constant times dense tensor. `s` must outlive the tape.
Tensor spmm(const SparseMatrix& s, const Tensor& d);
/// Elementwise add; `b` may also be a 1 x cols row broadcast over a's rows.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor hadamard(const Tensor& a, const Tensor& b);
Tensor hconcat(const Tensor& a, const Tensor& b);
Tensor relu(const Tensor& a);
Tensor sigmoid(const Tensor& a);
/// log(1 + exp(x)), evaluated without overflow.
Tensor softplus(const Tensor& a);
Tensor square(const Tensor& a);
Tensor scale(const Tensor& a, double factor);
Tensor add_scalar(const Tensor& a, double c);
/// rows x 1 column of row sums.
Tensor row_sum(const Tensor& a);
/// rows x 1 column of row means.
Tensor row_mean(const Tensor& a);
/// 1 x 1 sum of all entries.
Tensor sum(const Tensor& a);
/// 1 x 1 mean of all entries.
Tensor mean(const Tensor& a);
/// Selects rows by index (embedding lookup); backward scatter-adds.
Tensor gather_rows(const Tensor& a, std::span<const std::size_t> rows);
/// Inverted dropout: zeroes with probability p, scales survivors by 1/(1-p)
/// in train mode; identity in eval mode or when p == 0.
Tensor dropout(const Tensor& a, double p, Mode mode, Rng& rng);

}  // namespace pairlink
