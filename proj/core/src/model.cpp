#include "pairlink/model.hpp"

#include <algorithm>
#include <cstdio>

#include "pairlink/error.hpp"
#include "pairlink/log.hpp"

namespace pairlink {

LinkModel::LinkModel(const Graph& graph, const NodeFeatures* features, EncoderConfig encoder,
                     PredictorConfig predictor)
    : graph_(&graph),
      features_(features),
      encoder_(encoder),
      predictor_(predictor),
      adjacency_(NormalizedAdjacency::build(graph, encoder.kind)) {
  encoder_.validate(features_ != nullptr);
  predictor_.validate();
  if (features_ && features_->values.rows() != graph.num_nodes()) {
    throw DimensionError("feature rows (" + std::to_string(features_->values.rows()) +
                         ") do not match node count (" + std::to_string(graph.num_nodes()) + ")");
  }
  if (graph.directed() && is_commutative(predictor_.kind)) {
    warn("predictor '" + to_string(predictor_.kind) +
         "' is symmetric; bilinear or mlp_concat suit directed graphs");
  }
}

void LinkModel::init(ParameterStore& store, Rng& rng) const {
  init_encoder(store, encoder_, graph_->num_nodes(), feature_dim(), rng);
  init_predictor(store, predictor_, output_dim(encoder_, feature_dim()), rng);
}

Tensor LinkModel::encode(Tape& tape, ParameterStore& store, Mode mode, Rng& rng) const {
  return pairlink::encode(tape, adjacency_, features_, store, encoder_, mode, rng);
}

Tensor LinkModel::score_pairs(Tape& tape, const Tensor& encoded, std::span<const NodePair> pairs,
                              ParameterStore& store, Mode mode, Rng& rng) const {
  std::vector<std::size_t> src, dst;
  src.reserve(pairs.size());
  dst.reserve(pairs.size());
  for (const auto& p : pairs) {
    src.push_back(p.src);
    dst.push_back(p.dst);
  }
  return score(tape, gather_rows(encoded, src), gather_rows(encoded, dst), predictor_, store, mode,
               rng);
}

Matrix LinkModel::embed(ParameterStore& store) const {
  Tape tape;
  Rng unused(0);
  return encode(tape, store, Mode::eval, unused).value();
}

std::vector<double> LinkModel::score_with(const Matrix& encoded, ParameterStore& store,
                                          std::span<const NodePair> pairs,
                                          std::size_t chunk) const {
  std::vector<double> out;
  out.reserve(pairs.size());
  Rng unused(0);
  for (std::size_t begin = 0; begin < pairs.size(); begin += chunk) {
    const std::size_t end = std::min(pairs.size(), begin + chunk);
    Tape tape;
    Tensor h = tape.constant(encoded);
    Tensor s = score_pairs(tape, h, pairs.subspan(begin, end - begin), store, Mode::eval, unused);
    for (double v : s.value().data()) out.push_back(v);
  }
  return out;
}

std::string LinkModel::architecture_hash() const {
  std::string desc = "encoder=" + to_string(encoder_.kind) +
                     ";layers=" + std::to_string(encoder_.num_layers) +
                     ";hidden=" + std::to_string(encoder_.hidden_dim) +
                     ";input=" + to_string(encoder_.node_input) +
                     ";embedding=" + std::to_string(encoder_.embedding_dim) +
                     ";features=" + std::to_string(feature_dim()) +
                     ";nodes=" + std::to_string(graph_->num_nodes()) +
                     ";predictor=" + to_string(predictor_.kind) +
                     ";mlp_layers=" + std::to_string(predictor_.mlp_layers) +
                     ";mlp_hidden=" + std::to_string(predictor_.mlp_hidden);
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(desc)));
  return buf;
}

}  // namespace pairlink
