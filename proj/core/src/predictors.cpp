#include "pairlink/predictors.hpp"

#include "pairlink/error.hpp"

namespace pairlink {

std::string to_string(PredictorKind kind) {
  switch (kind) {
    case PredictorKind::dot: return "dot";
    case PredictorKind::bilinear: return "bilinear";
    case PredictorKind::mlp_hadamard: return "mlp_hadamard";
    case PredictorKind::mlp_concat: return "mlp_concat";
  }
  return "?";
}

PredictorKind parse_predictor_kind(const std::string& s) {
  if (s == "dot") return PredictorKind::dot;
  if (s == "bilinear") return PredictorKind::bilinear;
  if (s == "mlp_hadamard" || s == "mlp") return PredictorKind::mlp_hadamard;
  if (s == "mlp_concat") return PredictorKind::mlp_concat;
  throw ConfigError("unknown predictor '" + s + "' (dot, bilinear, mlp_hadamard, mlp_concat)");
}

bool is_commutative(PredictorKind kind) {
  return kind == PredictorKind::dot || kind == PredictorKind::mlp_hadamard;
}

namespace {

bool is_mlp(PredictorKind kind) {
  return kind == PredictorKind::mlp_hadamard || kind == PredictorKind::mlp_concat;
}

std::string mlp_name(std::size_t layer, const char* part) {
  return "predictor.mlp." + std::to_string(layer) + "." + part;
}

}  // namespace

void PredictorConfig::validate() const {
  if (is_mlp(kind)) {
    if (mlp_layers == 0) throw ConfigError("mlp_layers must be >= 1 for MLP predictors");
    if (mlp_layers > 1 && mlp_hidden == 0) throw ConfigError("mlp_hidden must be >= 1");
  }
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("predictor_dropout must be in [0, 1)");
}

void init_predictor(ParameterStore& store, const PredictorConfig& cfg, std::size_t input_dim,
                    Rng& rng) {
  cfg.validate();
  if (cfg.kind == PredictorKind::bilinear) {
    store.add("predictor.bilinear", glorot_uniform(input_dim, input_dim, rng));
    return;
  }
  if (!is_mlp(cfg.kind)) return;
  std::size_t in = cfg.kind == PredictorKind::mlp_concat ? 2 * input_dim : input_dim;
  for (std::size_t l = 0; l < cfg.mlp_layers; ++l) {
    const std::size_t out = l + 1 == cfg.mlp_layers ? 1 : cfg.mlp_hidden;
    store.add(mlp_name(l, "weight"), glorot_uniform(in, out, rng));
    store.add(mlp_name(l, "bias"), Matrix(1, out));
    in = out;
  }
}

Tensor mlp_head(Tape& tape, const Tensor& x, const PredictorConfig& cfg, ParameterStore& store,
                Mode mode, Rng& rng) {
  Tensor h = x;
  for (std::size_t l = 0; l < cfg.mlp_layers; ++l) {
    Tensor w = tape.parameter(store.at(mlp_name(l, "weight")));
    Tensor b = tape.parameter(store.at(mlp_name(l, "bias")));
    h = add(matmul(h, w), b);
    if (l + 1 < cfg.mlp_layers) h = dropout(relu(h), cfg.dropout, mode, rng);
  }
  return h;
}

Tensor score(Tape& tape, const Tensor& h_src, const Tensor& h_dst, const PredictorConfig& cfg,
             ParameterStore& store, Mode mode, Rng& rng) {
  const auto& a = h_src.value();
  const auto& b = h_dst.value();
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw DimensionError("score inputs differ in shape: " + a.shape_string() + " vs " +
                         b.shape_string());
  }
  switch (cfg.kind) {
    case PredictorKind::dot: return row_sum(hadamard(h_src, h_dst));
    case PredictorKind::bilinear: {
      Tensor w = tape.parameter(store.at("predictor.bilinear"));
      return row_sum(hadamard(matmul(h_src, w), h_dst));
    }
    case PredictorKind::mlp_hadamard:
      return mlp_head(tape, hadamard(h_src, h_dst), cfg, store, mode, rng);
    case PredictorKind::mlp_concat:
      return mlp_head(tape, hconcat(h_src, h_dst), cfg, store, mode, rng);
  }
  throw ConfigError("bad predictor kind");
}

double score(std::span<const double> h_src, std::span<const double> h_dst,
             const PredictorConfig& cfg, ParameterStore& store) {
  if (h_src.size() != h_dst.size()) {
    throw DimensionError("score inputs differ in width: " + std::to_string(h_src.size()) + " vs " +
                         std::to_string(h_dst.size()));
  }
  Tape tape;
  Rng unused(0);
  auto row = [](std::span<const double> v) {
    return Matrix(1, v.size(), std::vector<double>(v.begin(), v.end()));
  };
  Tensor s = score(tape, tape.constant(row(h_src)), tape.constant(row(h_dst)), cfg, store,
                   Mode::eval, unused);
  return s.item();
}

}  // namespace pairlink
