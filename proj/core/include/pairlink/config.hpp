#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pairlink/encoders.hpp"
#include "pairlink/evaluation.hpp"
#include "pairlink/objectives.hpp"
#include "pairlink/parameters.hpp"
#include "pairlink/predictors.hpp"
#include "pairlink/sampling.hpp"

namespace pairlink {

enum class SplitKind { random, provided };

// Declarative description of one experiment. Serialized as a flat JSON object
// whose keys are listed in config_keys(); unknown keys are rejected.
struct ExperimentConfig {
  std::string preset;

  std::string graph_path;
  std::string features_path;
  std::string valid_path;
  std::string test_path;
  bool directed = false;

  EncoderConfig encoder;
  PredictorConfig predictor;

  LossKind loss = LossKind::auc;
  /// Use normalized input edge weights as margins for weighted_hinge_auc.
  bool edge_weights = false;

  SamplerConfig sampler;
  /// Sample training negatives against valid/test edges too.
  bool filter_negatives = false;

  bool walk_aug = false;
  std::size_t walk_length = 10;
  std::size_t walks_per_node = 1;
  /// Regenerate the augmented set every this many epochs.
  std::size_t walk_refresh = 1;

  OptimizerConfig optimizer;
  std::size_t epochs = 100;
  /// Positive edges per batch.
  std::size_t batch_size = 65536;

  /// Model-selection metric: auc, hits or mrr.
  std::string eval_metric = "auc";
  EvalProtocol eval;

  SplitKind split = SplitKind::random;
  double train_fraction = 0.8;
  double valid_fraction = 0.1;
  double test_fraction = 0.1;
  bool train_on_valid = false;

  std::uint64_t seed = 0;
  std::size_t runs = 1;

  /// Second arm of run_ablation.
  LossKind ablation_loss = LossKind::cross_entropy;
  /// Heuristic for the `heuristic` verb: cn, jaccard, pa, aa, ra or all.
  std::string heuristic = "all";

  /// Throws ConfigError naming the offending key.
  void validate(bool check_files = true) const;

  /// Every key, sorted, with its current value.
  std::string to_json() const;
  /// FNV-1a of to_json(), hex.
  std::string hash() const;
  /// Metric key used for model selection, e.g. "auc", "hits@20", "mrr".
  std::string selection_metric() const;
};

std::vector<std::string> config_keys();
std::vector<std::string> preset_names();
/// Table-style presets: ddi-style, collab-style, ppa-style, citation2-style.
ExperimentConfig preset(const std::string& name);

/// Sets one key from JSON text; bare words are taken as strings.
void apply_override(ExperimentConfig& cfg, const std::string& key, const std::string& value);
/// `key=value` form.
void apply_override(ExperimentConfig& cfg, const std::string& assignment);

// Parses a flat JSON object of scalars. A "preset" key seeds the defaults;
// the remaining keys then apply on top, then the overrides, then validation.
ExperimentConfig config_from_json(const std::string& text,
                                  const std::vector<std::string>& overrides = {},
                                  bool check_files = true);
ExperimentConfig parse_config(const std::string& path,
                              const std::vector<std::string>& overrides = {},
                              bool check_files = true);

}  // namespace pairlink
