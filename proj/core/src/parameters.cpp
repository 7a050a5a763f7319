#include "pairlink/parameters.hpp"

#include <cmath>

#include "pairlink/error.hpp"

namespace pairlink {

Parameter& ParameterStore::add(const std::string& name, Matrix init) {
  if (params_.contains(name)) throw ValidationError("duplicate parameter '" + name + "'");
  Parameter p;
  p.grad = Matrix(init.rows(), init.cols());
  p.first_moment = Matrix(init.rows(), init.cols());
  p.second_moment = Matrix(init.rows(), init.cols());
  p.value = std::move(init);
  return params_.emplace(name, std::move(p)).first->second;
}

Parameter& ParameterStore::at(std::string_view name) {
  auto it = params_.find(name);
  if (it == params_.end()) throw IndexError("no parameter named '" + std::string(name) + "'");
  return it->second;
}

const Parameter& ParameterStore::at(std::string_view name) const {
  auto it = params_.find(name);
  if (it == params_.end()) throw IndexError("no parameter named '" + std::string(name) + "'");
  return it->second;
}

bool ParameterStore::contains(std::string_view name) const { return params_.find(name) != params_.end(); }

std::size_t ParameterStore::num_values() const {
  std::size_t n = 0;
  for (const auto& [name, p] : params_) n += p.value.size();
  return n;
}

void ParameterStore::zero_grad() {
  for (auto& [name, p] : params_) p.grad.fill(0.0);
}

Matrix glorot_uniform(std::size_t fan_in, std::size_t fan_out, Rng& rng) {
  const double bound = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
  std::uniform_real_distribution<double> u(-bound, bound);
  Matrix m(fan_in, fan_out);
  for (double& x : m.data()) x = u(rng);
  return m;
}

Matrix normal_init(std::size_t rows, std::size_t cols, double stddev, Rng& rng) {
  std::normal_distribution<double> n(0.0, stddev);
  Matrix m(rows, cols);
  for (double& x : m.data()) x = n(rng);
  return m;
}

void optimizer_step(ParameterStore& store, const OptimizerConfig& cfg) {
  if (!(cfg.lr > 0.0)) throw ValidationError("learning rate must be > 0");
  if (cfg.lambda < 0.0) throw ValidationError("L2 weight must be >= 0");
  store.set_step_count(store.step_count() + 1);
  const auto t = static_cast<double>(store.step_count());
  const double bias1 = 1.0 - std::pow(cfg.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg.beta2, t);

  for (auto& [name, p] : store) {
    auto value = p.value.data();
    auto grad = p.grad.data();
    if (grad.size() != value.size()) throw DimensionError("gradient shape mismatch for '" + name + "'");
    if (cfg.kind == OptimizerKind::sgd) {
      for (std::size_t i = 0; i < value.size(); ++i) {
        value[i] -= cfg.lr * (grad[i] + cfg.lambda * value[i]);
      }
    } else {
      auto m = p.first_moment.data();
      auto v = p.second_moment.data();
      for (std::size_t i = 0; i < value.size(); ++i) {
        const double g = grad[i] + cfg.lambda * value[i];
        m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g;
        v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g * g;
        const double mhat = m[i] / bias1;
        const double vhat = v[i] / bias2;
        value[i] -= cfg.lr * mhat / (std::sqrt(vhat) + cfg.epsilon);
      }
    }
    p.grad.fill(0.0);
  }
}

}  // namespace pairlink
