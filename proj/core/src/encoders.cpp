#include "pairlink/encoders.hpp"

#include <cmath>

#include "pairlink/error.hpp"

namespace pairlink {

std::string to_string(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::gcn: return "gcn";
    case EncoderKind::sage: return "sage";
    case EncoderKind::embedding_only: return "embedding_only";
  }
  return "?";
}

std::string to_string(NodeInput input) {
  switch (input) {
    case NodeInput::features: return "features";
    case NodeInput::embedding: return "embedding";
    case NodeInput::concat: return "concat";
  }
  return "?";
}

EncoderKind parse_encoder_kind(const std::string& s) {
  if (s == "gcn") return EncoderKind::gcn;
  if (s == "sage") return EncoderKind::sage;
  if (s == "embedding_only" || s == "embedding") return EncoderKind::embedding_only;
  throw ConfigError("unknown encoder '" + s + "' (gcn, sage, embedding_only)");
}

NodeInput parse_node_input(const std::string& s) {
  if (s == "features") return NodeInput::features;
  if (s == "embedding") return NodeInput::embedding;
  if (s == "concat") return NodeInput::concat;
  throw ConfigError("unknown node_input '" + s + "' (features, embedding, concat)");
}

void EncoderConfig::validate(bool has_features) const {
  if (kind == EncoderKind::embedding_only && num_layers != 0) {
    throw ConfigError("encoder_layers: embedding_only takes 0 layers");
  }
  if (kind != EncoderKind::embedding_only && num_layers == 0) {
    throw ConfigError("encoder_layers: gcn and sage need at least one layer");
  }
  if (hidden_dim == 0) throw ConfigError("hidden_dim must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("encoder_dropout must be in [0, 1)");
  if (node_input != NodeInput::features && embedding_dim == 0) {
    throw ConfigError("embedding_dim must be >= 1 when embeddings are used");
  }
  if (node_input != NodeInput::embedding && !has_features) {
    throw ConfigError("node_input=" + to_string(node_input) + " needs node features");
  }
}

std::size_t input_dim(const EncoderConfig& cfg, std::size_t feature_dim) {
  switch (cfg.node_input) {
    case NodeInput::features: return feature_dim;
    case NodeInput::embedding: return cfg.embedding_dim;
    case NodeInput::concat: return feature_dim + cfg.embedding_dim;
  }
  return 0;
}

std::size_t output_dim(const EncoderConfig& cfg, std::size_t feature_dim) {
  return cfg.kind == EncoderKind::embedding_only ? input_dim(cfg, feature_dim) : cfg.hidden_dim;
}

NormalizedAdjacency NormalizedAdjacency::build(const Graph& g, EncoderKind kind) {
  NormalizedAdjacency adj;
  adj.kind = kind;
  const std::size_t n = g.num_nodes();
  auto& op = adj.op;
  op.rows = op.cols = n;
  op.indptr.assign(1, 0);
  if (kind == EncoderKind::embedding_only) {
    op.indptr.assign(n + 1, 0);
    return adj;
  }
  if (kind == EncoderKind::gcn) {
    std::vector<double> inv_sqrt(n);
    for (NodeId v = 0; v < n; ++v) inv_sqrt[v] = 1.0 / std::sqrt(static_cast<double>(g.degree(v) + 1));
    for (NodeId v = 0; v < n; ++v) {
      bool self_done = false;
      auto push_self = [&] {
        op.indices.push_back(v);
        op.values.push_back(inv_sqrt[v] * inv_sqrt[v]);
        self_done = true;
      };
      for (NodeId u : g.neighbors(v)) {
        if (!self_done && u > v) push_self();
        op.indices.push_back(u);
        op.values.push_back(inv_sqrt[v] * inv_sqrt[u]);
      }
      if (!self_done) push_self();
      op.indptr.push_back(op.indices.size());
    }
  } else {
    for (NodeId v = 0; v < n; ++v) {
      auto nb = g.neighbors(v);
      const double w = nb.empty() ? 0.0 : 1.0 / static_cast<double>(nb.size());
      for (NodeId u : nb) {
        op.indices.push_back(u);
        op.values.push_back(w);
      }
      op.indptr.push_back(op.indices.size());
    }
  }
  return adj;
}

namespace {

std::string layer_name(std::size_t layer, const char* part) {
  return "encoder." + std::to_string(layer) + "." + part;
}

}  // namespace

void init_encoder(ParameterStore& store, const EncoderConfig& cfg, std::size_t num_nodes,
                  std::size_t feature_dim, Rng& rng) {
  cfg.validate(feature_dim > 0);
  if (cfg.node_input != NodeInput::features) {
    store.add("embedding", normal_init(num_nodes, cfg.embedding_dim, 0.1, rng));
  }
  std::size_t in = input_dim(cfg, feature_dim);
  for (std::size_t l = 0; l < cfg.num_layers; ++l) {
    if (cfg.kind == EncoderKind::gcn) {
      store.add(layer_name(l, "weight"), glorot_uniform(in, cfg.hidden_dim, rng));
    } else if (cfg.kind == EncoderKind::sage) {
      store.add(layer_name(l, "self"), glorot_uniform(in, cfg.hidden_dim, rng));
      store.add(layer_name(l, "neigh"), glorot_uniform(in, cfg.hidden_dim, rng));
    }
    in = cfg.hidden_dim;
  }
}

Tensor compose_node_input(Tape& tape, const NodeFeatures* features, ParameterStore& store,
                          const EncoderConfig& cfg) {
  cfg.validate(features != nullptr);
  switch (cfg.node_input) {
    case NodeInput::features: return tape.constant(features->values);
    case NodeInput::embedding: return tape.parameter(store.at("embedding"));
    case NodeInput::concat:
      return hconcat(tape.constant(features->values), tape.parameter(store.at("embedding")));
  }
  throw ConfigError("bad node_input");
}

Tensor encode_input(Tape& tape, const Tensor& input, const NormalizedAdjacency& adj,
                    ParameterStore& store, const EncoderConfig& cfg, Mode mode, Rng& rng) {
  if (cfg.kind == EncoderKind::embedding_only) return input;
  if (adj.kind != cfg.kind) throw ConfigError("adjacency was built for a different encoder kind");
  if (adj.op.rows != input.rows()) {
    throw DimensionError("adjacency has " + std::to_string(adj.op.rows) + " rows, input is " +
                         input.value().shape_string());
  }
  Tensor h = input;
  for (std::size_t l = 0; l < cfg.num_layers; ++l) {
    const bool last = l + 1 == cfg.num_layers;
    if (cfg.kind == EncoderKind::gcn) {
      Tensor w = tape.parameter(store.at(layer_name(l, "weight")));
      h = matmul(spmm(adj.op, h), w);
    } else {
      Tensor ws = tape.parameter(store.at(layer_name(l, "self")));
      Tensor wn = tape.parameter(store.at(layer_name(l, "neigh")));
      h = add(matmul(h, ws), matmul(spmm(adj.op, h), wn));
    }
    if (!last) h = dropout(relu(h), cfg.dropout, mode, rng);
  }
  return h;
}

Tensor encode(Tape& tape, const NormalizedAdjacency& adj, const NodeFeatures* features,
              ParameterStore& store, const EncoderConfig& cfg, Mode mode, Rng& rng) {
  Tensor x = compose_node_input(tape, features, store, cfg);
  return encode_input(tape, x, adj, store, cfg, mode, rng);
}

}  // namespace pairlink
