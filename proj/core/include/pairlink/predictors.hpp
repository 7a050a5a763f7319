#pragma once

#include <cstddef>
#include <span>
#include <string>

#include "pairlink/autodiff.hpp"
#include "pairlink/parameters.hpp"

namespace pairlink {

enum class PredictorKind { dot, bilinear, mlp_hadamard, mlp_concat };

struct PredictorConfig {
  PredictorKind kind = PredictorKind::dot;
  /// Linear layers in the MLP, output layer included.
  std::size_t mlp_layers = 2;
  std::size_t mlp_hidden = 64;
  double dropout = 0.0;

  void validate() const;
};

std::string to_string(PredictorKind kind);
PredictorKind parse_predictor_kind(const std::string& s);

bool is_commutative(PredictorKind kind);

// Parameter names: "predictor.bilinear" (d x d), "predictor.mlp.<l>.weight"
// and "predictor.mlp.<l>.bias".
void init_predictor(ParameterStore& store, const PredictorConfig& cfg, std::size_t input_dim,
                    Rng& rng);

/// Row-aligned batch scoring: m x d and m x d in, m x 1 raw scores out.
Tensor score(Tape& tape, const Tensor& h_src, const Tensor& h_dst, const PredictorConfig& cfg,
             ParameterStore& store, Mode mode, Rng& rng);

/// Single pair, eval mode.
double score(std::span<const double> h_src, std::span<const double> h_dst,
             const PredictorConfig& cfg, ParameterStore& store);

/// MLP head alone, for pair-level representations (m x d in, m x 1 out).
Tensor mlp_head(Tape& tape, const Tensor& x, const PredictorConfig& cfg, ParameterStore& store,
                Mode mode, Rng& rng);

}  // namespace pairlink
