#pragma once

#include <span>
#include <string>
#include <vector>

#include "pairlink/encoders.hpp"
#include "pairlink/graph.hpp"
#include "pairlink/predictors.hpp"

namespace pairlink {

// Encoder plus predictor over one (training) graph. Holds no parameters; all
// trainable state lives in the ParameterStore passed to each call. The graph
// and features must outlive the model.
class LinkModel {
 public:
  LinkModel(const Graph& graph, const NodeFeatures* features, EncoderConfig encoder,
            PredictorConfig predictor);

  const EncoderConfig& encoder_config() const noexcept { return encoder_; }
  const PredictorConfig& predictor_config() const noexcept { return predictor_; }
  std::size_t feature_dim() const noexcept { return features_ ? features_->dim() : 0; }
  const Graph& graph() const noexcept { return *graph_; }

  void init(ParameterStore& store, Rng& rng) const;

  /// Full-graph node representations (N x d).
  Tensor encode(Tape& tape, ParameterStore& store, Mode mode, Rng& rng) const;

  /// Scores pairs against an encoding produced on the same tape (m x 1).
  Tensor score_pairs(Tape& tape, const Tensor& encoded, std::span<const NodePair> pairs,
                     ParameterStore& store, Mode mode, Rng& rng) const;

  /// Eval-mode encoding as a plain matrix.
  Matrix embed(ParameterStore& store) const;

  /// Eval-mode scores from a precomputed encoding, in chunks of `chunk` pairs.
  std::vector<double> score_with(const Matrix& encoded, ParameterStore& store,
                                 std::span<const NodePair> pairs, std::size_t chunk = 8192) const;

  /// Hash over everything that fixes parameter shapes.
  std::string architecture_hash() const;

 private:
  const Graph* graph_;
  const NodeFeatures* features_;
  EncoderConfig encoder_;
  PredictorConfig predictor_;
  NormalizedAdjacency adjacency_;
};

}  // namespace pairlink
