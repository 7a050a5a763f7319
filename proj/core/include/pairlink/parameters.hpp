#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>

#include "pairlink/rng.hpp"
#include "pairlink/tensor.hpp"

namespace pairlink {

// A trainable array with its gradient buffer and optimizer moments.
struct Parameter {
  Matrix value;
  Matrix grad;
  Matrix first_moment;
  Matrix second_moment;
};

// Named parameters, iterated in name order. Addresses are stable for the
// lifetime of the store, so tapes may hold references into it.
class ParameterStore {
 public:
  Parameter& add(const std::string& name, Matrix init);
  Parameter& at(std::string_view name);
  const Parameter& at(std::string_view name) const;
  bool contains(std::string_view name) const;

  std::size_t size() const noexcept { return params_.size(); }
  /// Total scalar count across all parameters.
  std::size_t num_values() const;

  auto begin() { return params_.begin(); }
  auto end() { return params_.end(); }
  auto begin() const { return params_.begin(); }
  auto end() const { return params_.end(); }

  void zero_grad();

  std::uint64_t step_count() const noexcept { return steps_; }
  void set_step_count(std::uint64_t n) noexcept { steps_ = n; }

 private:
  std::map<std::string, Parameter, std::less<>> params_;
  std::uint64_t steps_ = 0;
};

/// Uniform in +-sqrt(6 / (fan_in + fan_out)).
Matrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng);
Matrix normal_init(std::size_t rows, std::size_t cols, double stddev, Rng& rng);

enum class OptimizerKind { sgd, adam };

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::adam;
  double lr = 0.001;
  /// L2 weight; lambda * p is added to every gradient before the update.
  double lambda = 0.0;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

/// One update over every parameter, then zeroes the gradients.
void optimizer_step(ParameterStore& store, const OptimizerConfig& cfg);

}  // namespace pairlink
