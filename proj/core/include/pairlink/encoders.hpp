#pragma once

#include <cstddef>
#include <string>

#include "pairlink/autodiff.hpp"
#include "pairlink/graph.hpp"
#include "pairlink/parameters.hpp"

namespace pairlink {

enum class EncoderKind { gcn, sage, embedding_only };
enum class NodeInput { features, embedding, concat };

struct EncoderConfig {
  EncoderKind kind = EncoderKind::sage;
  std::size_t num_layers = 2;
  std::size_t hidden_dim = 64;
  double dropout = 0.0;
  NodeInput node_input = NodeInput::embedding;
  std::size_t embedding_dim = 64;

  /// Throws ConfigError on an inconsistent combination.
  void validate(bool has_features) const;
};

std::string to_string(EncoderKind kind);
std::string to_string(NodeInput input);
EncoderKind parse_encoder_kind(const std::string& s);
NodeInput parse_node_input(const std::string& s);

// Message-passing operator for one encoder kind.
//  gcn:  D^-1/2 (A + I) D^-1/2, degrees counted with the self-loop.
//  sage: row-mean over true neighbors, no self-loop; rows of isolated nodes
//        are empty.
// embedding_only carries an empty operator.
struct NormalizedAdjacency {
  EncoderKind kind = EncoderKind::gcn;
  SparseMatrix op;

  static NormalizedAdjacency build(const Graph& g, EncoderKind kind);
};

/// Width of the composed node input x_i.
std::size_t input_dim(const EncoderConfig& cfg, std::size_t feature_dim);
/// Width of the encoder output h_i.
std::size_t output_dim(const EncoderConfig& cfg, std::size_t feature_dim);

// Parameter names: "embedding" (N x embedding_dim), "encoder.<l>.weight" for
// gcn, "encoder.<l>.self" / "encoder.<l>.neigh" for sage.
void init_encoder(ParameterStore& store, const EncoderConfig& cfg, std::size_t num_nodes,
                  std::size_t feature_dim, Rng& rng);

/// Node inputs: raw features, the embedding table, or both side by side.
Tensor compose_node_input(Tape& tape, const NodeFeatures* features, ParameterStore& store,
                          const EncoderConfig& cfg);

// Layer stack over a prepared input. gcn: H <- relu(A_hat H W); sage:
// H <- relu(H W_self + M H W_neigh). Dropout follows every layer but the
// last (train mode only); the last layer is linear.
Tensor encode_input(Tape& tape, const Tensor& input, const NormalizedAdjacency& adj,
                    ParameterStore& store, const EncoderConfig& cfg, Mode mode, Rng& rng);

/// Full-graph encoding: N x output_dim.
Tensor encode(Tape& tape, const NormalizedAdjacency& adj, const NodeFeatures* features,
              ParameterStore& store, const EncoderConfig& cfg, Mode mode, Rng& rng);

// Edge-level encoders consume a node-pair subgraph (see pair_subgraph) and
// emit a single vector per pair. No concrete implementation ships; this is
// the contract predictors accept through the MLP-on-pair-vector path.
class EdgeNeighborhoodEncoder {
 public:
  virtual ~EdgeNeighborhoodEncoder() = default;
  /// Returns a 1 x width row for the pair (u, v) of the parent graph.
  virtual Tensor encode_pair(Tape& tape, const Subgraph& sub, NodeId u, NodeId v,
                             ParameterStore& store, Mode mode, Rng& rng) = 0;
  virtual std::size_t width() const = 0;
};

}  // namespace pairlink
