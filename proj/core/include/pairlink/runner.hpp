#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pairlink/config.hpp"
#include "pairlink/graph.hpp"
#include "pairlink/heuristics.hpp"
#include "pairlink/metrics.hpp"
#include "pairlink/parameters.hpp"

namespace pairlink {

// Positive edges per split. The training graph has the full node set but only
// training edges (plus validation edges when train_on_valid is set).
struct EdgeSplit {
  std::vector<NodePair> train;
  std::vector<NodePair> valid;
  std::vector<NodePair> test;
  Graph train_graph;
};

/// Uniform random partition with round(f * E) valid and test edges; training
/// takes the rest. Throws ValidationError if any part ends up empty.
EdgeSplit split_edges(const Graph& g, double train_fraction, double valid_fraction,
                      double test_fraction, Rng& rng);

struct Dataset {
  Graph full;
  std::optional<NodeFeatures> features;
  EdgeSplit split;
};

/// Splits an in-memory graph according to cfg (random split only).
Dataset make_dataset(Graph full, std::optional<NodeFeatures> features,
                     const ExperimentConfig& cfg, std::uint64_t seed);

/// Reads the graph, features and (for provided splits) the valid/test files.
Dataset load_dataset(const ExperimentConfig& cfg, std::uint64_t seed);

struct EpochLog {
  std::size_t epoch = 0;
  double loss = 0.0;
  std::size_t pairs = 0;
  std::map<std::string, double> valid;
};

std::string log_to_json(const std::vector<EpochLog>& log);

struct RunResult {
  /// Parameters from the epoch with the best validation metric.
  ParameterStore store;
  std::vector<EpochLog> log;
  MetricReport valid;
  MetricReport test;
  std::size_t best_epoch = 0;
  std::uint64_t seed = 0;
  std::string architecture_hash;
  /// Loss of the first batch before any update.
  double initial_loss = 0.0;
};

using EpochCallback = std::function<void(const EpochLog&)>;

// Pairwise training loop. Per epoch: refresh the augmented positives when
// due, shuffle, then per batch draw one negative per positive, expand with
// share_negatives, encode the full graph, score, apply the loss, backprop and
// step. Validation after every epoch selects the best parameters; the test
// split is scored once on those. Non-finite loss throws DivergenceError.
RunResult train(const ExperimentConfig& cfg, const Dataset& data, std::uint64_t seed,
                const EpochCallback& on_epoch = {});

struct ArmSummary {
  LossKind loss = LossKind::auc;
  std::vector<MetricReport> test;
  std::map<std::string, double> mean;
  std::map<std::string, double> stddev;
};

struct AblationReport {
  std::string metric;
  ArmSummary pairwise;
  ArmSummary classification;
  /// Fraction of runs where the first arm's test metric is strictly higher.
  double win_rate = 0.0;
  std::vector<std::uint64_t> seeds;

  std::string to_json() const;
};

using DatasetFactory = std::function<Dataset(std::uint64_t seed)>;

// Runs cfg.loss against cfg.ablation_loss over cfg.runs seeds; both arms see
// the same dataset, architecture and per-epoch negative budget.
AblationReport run_ablation(const ExperimentConfig& cfg, const DatasetFactory& dataset_for_seed);

/// Run r uses seed cfg.seed + r.
std::uint64_t run_seed(const ExperimentConfig& cfg, std::size_t run);

struct RunCheckpointInfo {
  std::uint64_t seed = 0;
  std::size_t best_epoch = 0;
  MetricReport valid;
};

void save_run_checkpoint(const std::string& path, const RunResult& run, const Graph& graph,
                         const ExperimentConfig& cfg);

struct EvaluationOutcome {
  MetricReport valid;
  MetricReport test;
  RunCheckpointInfo stored;
};

/// Restores a checkpoint, rebuilds the run's split and candidates from the
/// stored seed, and re-scores valid and test.
EvaluationOutcome evaluate_checkpoint(const ExperimentConfig& cfg, const std::string& path,
                                      bool allow_mismatch = false);
EvaluationOutcome evaluate_checkpoint(const ExperimentConfig& cfg, const Dataset& data,
                                      const std::string& path, bool allow_mismatch = false);

/// Heuristic scores on the test split, computed over the training graph.
MetricReport evaluate_heuristic(const ExperimentConfig& cfg, const Dataset& data,
                                HeuristicKind kind, std::uint64_t seed);

}  // namespace pairlink
