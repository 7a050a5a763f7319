#include "pairlink/config.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pairlink/error.hpp"
#include "pairlink/heuristics.hpp"
#include "pairlink/log.hpp"

namespace pairlink {
namespace {

using nlohmann::json;

std::string type_name(const json& v) { return v.type_name(); }

[[noreturn]] void type_error(const std::string& key, const char* expected, const json& v) {
  throw ConfigError("key '" + key + "': expected " + expected + ", got " + type_name(v) + " " +
                    v.dump());
}

std::size_t as_count(const std::string& key, const json& v) {
  if (v.is_number_unsigned()) return v.get<std::size_t>();
  if (v.is_number_integer()) {
    if (v.get<long long>() < 0) throw ConfigError("key '" + key + "': must be >= 0");
    return static_cast<std::size_t>(v.get<long long>());
  }
  type_error(key, "non-negative integer", v);
}

double as_real(const std::string& key, const json& v) {
  if (!v.is_number()) type_error(key, "number", v);
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ConfigError("key '" + key + "': must be finite");
  return d;
}

bool as_bool(const std::string& key, const json& v) {
  if (!v.is_boolean()) type_error(key, "boolean", v);
  return v.get<bool>();
}

std::string as_string(const std::string& key, const json& v) {
  if (!v.is_string()) type_error(key, "string", v);
  return v.get<std::string>();
}

// Enum parsers throw ConfigError without the key; add it.
template <typename F>
auto with_key(const std::string& key, F&& parse) {
  try {
    return parse();
  } catch (const ConfigError& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

struct Field {
  std::function<void(ExperimentConfig&, const std::string&, const json&)> set;
  std::function<json(const ExperimentConfig&)> get;
};

#define PL_COUNT(member)                                                                        \
  Field {                                                                                       \
    [](ExperimentConfig& c, const std::string& k, const json& v) { c.member = as_count(k, v); }, \
        [](const ExperimentConfig& c) { return json(c.member); }                                \
  }
#define PL_REAL(member)                                                                        \
  Field {                                                                                      \
    [](ExperimentConfig& c, const std::string& k, const json& v) { c.member = as_real(k, v); }, \
        [](const ExperimentConfig& c) { return json(c.member); }                               \
  }
#define PL_BOOL(member)                                                                        \
  Field {                                                                                      \
    [](ExperimentConfig& c, const std::string& k, const json& v) { c.member = as_bool(k, v); }, \
        [](const ExperimentConfig& c) { return json(c.member); }                               \
  }
#define PL_STRING(member)                                                                        \
  Field {                                                                                        \
    [](ExperimentConfig& c, const std::string& k, const json& v) { c.member = as_string(k, v); }, \
        [](const ExperimentConfig& c) { return json(c.member); }                                 \
  }
#define PL_ENUM(member, parse)                                                         \
  Field {                                                                              \
    [](ExperimentConfig& c, const std::string& k, const json& v) {                     \
      const auto s = as_string(k, v);                                                  \
      c.member = with_key(k, [&] { return parse(s); });                                \
    },                                                                                 \
        [](const ExperimentConfig& c) { return json(to_string(c.member)); }            \
  }

OptimizerKind parse_optimizer(const std::string& s) {
  if (s == "adam") return OptimizerKind::adam;
  if (s == "sgd") return OptimizerKind::sgd;
  throw ConfigError("unknown optimizer '" + s + "' (sgd, adam)");
}

std::string to_string(OptimizerKind k) { return k == OptimizerKind::adam ? "adam" : "sgd"; }

SplitKind parse_split(const std::string& s) {
  if (s == "random") return SplitKind::random;
  if (s == "provided") return SplitKind::provided;
  throw ConfigError("unknown split '" + s + "' (random, provided)");
}

std::string to_string(SplitKind k) { return k == SplitKind::random ? "random" : "provided"; }

const std::map<std::string, Field>& fields() {
  static const std::map<std::string, Field> table = {
      {"preset", PL_STRING(preset)},
      {"graph", PL_STRING(graph_path)},
      {"features", PL_STRING(features_path)},
      {"valid_edges", PL_STRING(valid_path)},
      {"test_edges", PL_STRING(test_path)},
      {"directed", PL_BOOL(directed)},
      {"encoder",
       Field{[](ExperimentConfig& c, const std::string& k, const json& v) {
               const auto s = as_string(k, v);
               c.encoder.kind = with_key(k, [&] { return parse_encoder_kind(s); });
               // Layer count follows the kind unless set explicitly afterwards.
               if (c.encoder.kind == EncoderKind::embedding_only) {
                 c.encoder.num_layers = 0;
               } else if (c.encoder.num_layers == 0) {
                 c.encoder.num_layers = 2;
               }
             },
             [](const ExperimentConfig& c) { return json(to_string(c.encoder.kind)); }}},
      {"encoder_layers", PL_COUNT(encoder.num_layers)},
      {"hidden_dim", PL_COUNT(encoder.hidden_dim)},
      {"encoder_dropout", PL_REAL(encoder.dropout)},
      {"node_input", PL_ENUM(encoder.node_input, parse_node_input)},
      {"embedding_dim", PL_COUNT(encoder.embedding_dim)},
      {"predictor", PL_ENUM(predictor.kind, parse_predictor_kind)},
      {"mlp_layers", PL_COUNT(predictor.mlp_layers)},
      {"mlp_hidden", PL_COUNT(predictor.mlp_hidden)},
      {"predictor_dropout", PL_REAL(predictor.dropout)},
      {"loss", PL_ENUM(loss, parse_loss_kind)},
      {"edge_weights", PL_BOOL(edge_weights)},
      {"sampler", PL_ENUM(sampler.strategy, parse_sampler_strategy)},
      {"num_neg", PL_COUNT(sampler.num_neg)},
      {"degree_power", PL_REAL(sampler.degree_power)},
      {"anchor", PL_ENUM(sampler.anchor, parse_anchor_rule)},
      {"filter_negatives", PL_BOOL(filter_negatives)},
      {"walk_aug", PL_BOOL(walk_aug)},
      {"walk_length", PL_COUNT(walk_length)},
      {"walks_per_node", PL_COUNT(walks_per_node)},
      {"walk_refresh", PL_COUNT(walk_refresh)},
      {"optimizer", PL_ENUM(optimizer.kind, parse_optimizer)},
      {"lr", PL_REAL(optimizer.lr)},
      {"lambda", PL_REAL(optimizer.lambda)},
      {"epochs", PL_COUNT(epochs)},
      {"batch_size", PL_COUNT(batch_size)},
      {"eval_metric", PL_STRING(eval_metric)},
      {"eval_mode", PL_ENUM(eval.mode, parse_eval_mode)},
      {"eval_num_neg", PL_COUNT(eval.num_neg)},
      {"hits_k",
       Field{[](ExperimentConfig& c, const std::string& k, const json& v) {
               c.eval.hits_k = {as_count(k, v)};
             },
             [](const ExperimentConfig& c) {
               return c.eval.hits_k.empty() ? json(0) : json(c.eval.hits_k.front());
             }}},
      {"split", PL_ENUM(split, parse_split)},
      {"train_fraction", PL_REAL(train_fraction)},
      {"valid_fraction", PL_REAL(valid_fraction)},
      {"test_fraction", PL_REAL(test_fraction)},
      {"train_on_valid", PL_BOOL(train_on_valid)},
      {"seed",
       Field{[](ExperimentConfig& c, const std::string& k, const json& v) {
               if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
                 type_error(k, "non-negative integer", v);
               }
               c.seed = v.get<std::uint64_t>();
             },
             [](const ExperimentConfig& c) { return json(c.seed); }}},
      {"runs", PL_COUNT(runs)},
      {"ablation_loss", PL_ENUM(ablation_loss, parse_loss_kind)},
      {"heuristic", PL_STRING(heuristic)},
  };
  return table;
}

#undef PL_COUNT
#undef PL_REAL
#undef PL_BOOL
#undef PL_STRING
#undef PL_ENUM

void set_key(ExperimentConfig& cfg, const std::string& key, const json& value) {
  const auto& table = fields();
  auto it = table.find(key);
  if (it == table.end()) throw ConfigError("unknown key '" + key + "'");
  if (value.is_object() || value.is_array() || value.is_null()) {
    throw ConfigError("key '" + key + "': expected a scalar value, got " + type_name(value));
  }
  it->second.set(cfg, key, value);
}

json parse_value(const std::string& text) {
  json v = json::parse(text, nullptr, false);
  if (v.is_discarded()) return json(text);
  return v;
}

void require_file(const std::string& key, const std::string& path) {
  if (path.empty()) return;
  if (!std::filesystem::is_regular_file(path)) {
    throw ConfigError("key '" + key + "': file '" + path + "' does not exist");
  }
}

}  // namespace

void ExperimentConfig::validate(bool check_files) const {
  if (check_files) {
    if (graph_path.empty()) throw ConfigError("key 'graph': an edge-list path is required");
    require_file("graph", graph_path);
    require_file("features", features_path);
    require_file("valid_edges", valid_path);
    require_file("test_edges", test_path);
  }
  if (split == SplitKind::provided && (valid_path.empty() || test_path.empty())) {
    throw ConfigError("key 'split': provided split needs valid_edges and test_edges");
  }
  if (split == SplitKind::random) {
    for (auto [key, f] : {std::pair{"train_fraction", train_fraction},
                          std::pair{"valid_fraction", valid_fraction},
                          std::pair{"test_fraction", test_fraction}}) {
      if (!(f > 0.0 && f < 1.0)) throw ConfigError(std::string("key '") + key + "': must lie in (0, 1)");
    }
    if (std::abs(train_fraction + valid_fraction + test_fraction - 1.0) > 1e-9) {
      throw ConfigError("key 'train_fraction': split fractions must sum to 1");
    }
  }

  const bool has_features = !features_path.empty() || !check_files;
  try {
    encoder.validate(has_features);
  } catch (const ConfigError& e) {
    throw ConfigError(std::string("encoder: ") + e.what());
  }
  predictor.validate();
  sampler.validate();

  if (loss == LossKind::weighted_hinge_auc && !walk_aug && !edge_weights) {
    throw ConfigError("key 'loss': weighted_hinge_auc needs walk_aug or edge_weights");
  }
  if (walk_aug && walk_length == 0) throw ConfigError("key 'walk_length': must be >= 1");
  if (walk_aug && walks_per_node == 0) throw ConfigError("key 'walks_per_node': must be >= 1");
  if (walk_refresh == 0) throw ConfigError("key 'walk_refresh': must be >= 1");

  if (optimizer.lr < 0.0) throw ConfigError("key 'lr': must be >= 0");
  if (optimizer.lambda < 0.0) throw ConfigError("key 'lambda': must be >= 0");
  if (epochs == 0) throw ConfigError("key 'epochs': must be >= 1");
  if (batch_size == 0) throw ConfigError("key 'batch_size': must be >= 1");
  if (runs == 0) throw ConfigError("key 'runs': must be >= 1");

  if (eval.num_neg == 0) throw ConfigError("key 'eval_num_neg': must be >= 1");
  if (eval_metric == "hits") {
    if (eval.mode != EvalMode::shared) throw ConfigError("key 'eval_metric': hits needs eval_mode=shared");
    if (eval.hits_k.empty() || eval.hits_k.front() == 0) throw ConfigError("key 'hits_k': must be >= 1");
    if (eval.hits_k.front() > eval.num_neg) {
      throw ConfigError("key 'hits_k': exceeds eval_num_neg");
    }
  } else if (eval_metric == "mrr") {
    if (eval.mode != EvalMode::per_positive) {
      throw ConfigError("key 'eval_metric': mrr needs eval_mode=per_positive");
    }
  } else if (eval_metric != "auc") {
    throw ConfigError("key 'eval_metric': unknown metric '" + eval_metric + "' (auc, hits, mrr)");
  }

  if (heuristic != "all") {
    try {
      parse_heuristic_kind(heuristic);
    } catch (const Error& e) {
      throw ConfigError(std::string("key 'heuristic': ") + e.what());
    }
  }
  if (directed && is_commutative(predictor.kind)) {
    warn("predictor '" + to_string(predictor.kind) +
         "' cannot tell edge direction; bilinear or mlp_concat suit directed graphs");
  }
}

std::string ExperimentConfig::to_json() const {
  json out = json::object();
  for (const auto& [key, field] : fields()) out[key] = field.get(*this);
  return out.dump();
}

std::string ExperimentConfig::hash() const {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_json())));
  return buf;
}

std::string ExperimentConfig::selection_metric() const {
  if (eval_metric == "hits") return "hits@" + std::to_string(eval.hits_k.front());
  return eval_metric;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const auto& entry : fields()) keys.push_back(entry.first);
  return keys;
}

std::vector<std::string> preset_names() {
  return {"ddi-style", "collab-style", "ppa-style", "citation2-style"};
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig c;
  c.preset = name;
  c.optimizer.lr = 0.001;
  if (name == "ddi-style") {
    c.encoder = {EncoderKind::sage, 2, 512, 0.3, NodeInput::embedding, 512};
    c.predictor = {PredictorKind::mlp_hadamard, 2, 512, 0.3};
    c.loss = LossKind::auc;
    c.sampler.num_neg = 3;
    c.epochs = 500;
    c.eval_metric = "hits";
    c.eval.hits_k = {20};
    c.eval.num_neg = 100000;
  } else if (name == "collab-style") {
    c.encoder = {EncoderKind::sage, 1, 256, 0.3, NodeInput::embedding, 256};
    c.predictor = {PredictorKind::dot, 2, 256, 0.0};
    c.loss = LossKind::weighted_hinge_auc;
    c.sampler.num_neg = 1;
    c.walk_aug = true;
    c.walk_length = 10;
    c.epochs = 800;
    c.eval_metric = "hits";
    c.eval.hits_k = {50};
    c.eval.num_neg = 100000;
  } else if (name == "ppa-style") {
    c.encoder = {EncoderKind::sage, 2, 256, 0.3, NodeInput::concat, 256};
    c.predictor = {PredictorKind::dot, 2, 256, 0.0};
    c.loss = LossKind::auc;
    c.sampler.num_neg = 3;
    c.epochs = 200;
    c.eval_metric = "hits";
    c.eval.hits_k = {100};
    c.eval.num_neg = 3000000;
  } else if (name == "citation2-style") {
    c.encoder = {EncoderKind::gcn, 2, 200, 0.0, NodeInput::concat, 50};
    c.predictor = {PredictorKind::mlp_hadamard, 2, 200, 0.0};
    c.loss = LossKind::auc;
    c.sampler.strategy = SamplerStrategy::local;
    c.sampler.num_neg = 3;
    c.epochs = 100;
    c.eval_metric = "mrr";
    c.eval.mode = EvalMode::per_positive;
    c.eval.num_neg = 1000;
  } else {
    std::string known;
    for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
    throw ConfigError("key 'preset': unknown preset '" + name + "' (" + known + ")");
  }
  return c;
}

void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  set_key(cfg, key, parse_value(value));
}

void apply_override(ExperimentConfig& cfg, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' is not of the form key=value");
  }
  apply_override(cfg, assignment.substr(0, eq), assignment.substr(eq + 1));
}

namespace {

ExperimentConfig build_config(const std::string& text, const std::vector<std::string>& overrides,
                              bool check_files, const std::filesystem::path& base) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) throw ConfigError("config is not valid JSON");
  if (!doc.is_object()) throw ConfigError("config must be a JSON object of key/value pairs");

  // A preset named on the command line wins over the file's.
  std::string preset_name;
  if (doc.contains("preset")) preset_name = as_string("preset", doc["preset"]);
  for (const auto& o : overrides) {
    if (o.rfind("preset=", 0) == 0) preset_name = as_string("preset", parse_value(o.substr(7)));
  }

  ExperimentConfig cfg = preset_name.empty() ? ExperimentConfig{} : preset(preset_name);
  for (const auto& [key, value] : doc.items()) {
    if (key != "preset") set_key(cfg, key, value);
  }
  // Paths in a config file are relative to that file.
  if (!base.empty()) {
    for (auto* p : {&cfg.graph_path, &cfg.features_path, &cfg.valid_path, &cfg.test_path}) {
      if (!p->empty() && std::filesystem::path(*p).is_relative()) {
        *p = (base / *p).lexically_normal().string();
      }
    }
  }
  for (const auto& o : overrides) {
    if (o.rfind("preset=", 0) != 0) apply_override(cfg, o);
  }
  cfg.validate(check_files);
  return cfg;
}

}  // namespace

ExperimentConfig config_from_json(const std::string& text, const std::vector<std::string>& overrides,
                                  bool check_files) {
  return build_config(text, overrides, check_files, {});
}

ExperimentConfig parse_config(const std::string& path, const std::vector<std::string>& overrides,
                              bool check_files) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return build_config(buffer.str(), overrides, check_files, std::filesystem::path(path).parent_path());
}

}  // namespace pairlink
