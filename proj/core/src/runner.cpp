#include "pairlink/runner.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>

#include <nlohmann/json.hpp>

#include "pairlink/autodiff.hpp"
#include "pairlink/checkpoint.hpp"
#include "pairlink/error.hpp"
#include "pairlink/evaluation.hpp"
#include "pairlink/model.hpp"
#include "pairlink/objectives.hpp"
#include "pairlink/sampling.hpp"

namespace pairlink {
namespace {

using nlohmann::ordered_json;

Graph graph_from_pairs(const Graph& like, std::span<const NodePair> pairs) {
  std::vector<WeightedEdge> edges;
  edges.reserve(pairs.size());
  for (const auto& p : pairs) {
    edges.push_back({p.src, p.dst, like.weighted() ? like.edge_weight(p.src, p.dst) : 1.0});
  }
  return Graph(like.num_nodes(), like.directed(), edges, like.weighted(), like.tokens());
}

void check_fractions(double ft, double fv, double fte) {
  for (double f : {ft, fv, fte}) {
    if (!(f > 0.0 && f < 1.0)) throw ValidationError("split fractions must lie in (0, 1)");
  }
  if (std::abs(ft + fv + fte - 1.0) > 1e-9) throw ValidationError("split fractions must sum to 1");
}

void finish_split(EdgeSplit& split, const Graph& full, bool train_on_valid) {
  if (train_on_valid) split.train.insert(split.train.end(), split.valid.begin(), split.valid.end());
  split.train_graph = graph_from_pairs(full, split.train);
}

std::ifstream open_edges(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open edge list '" + path + "'");
  return in;
}

struct Positives {
  std::vector<NodePair> pairs;
  std::vector<double> gammas;
};

Positives base_positives(const ExperimentConfig& cfg, const Dataset& data) {
  Positives p;
  p.pairs = data.split.train;
  p.gammas.assign(p.pairs.size(), 1.0);
  if (cfg.edge_weights && data.split.train_graph.weighted()) {
    double top = 0.0;
    for (const auto& e : p.pairs) top = std::max(top, data.split.train_graph.edge_weight(e.src, e.dst));
    for (std::size_t i = 0; i < p.pairs.size(); ++i) {
      p.gammas[i] = data.split.train_graph.edge_weight(p.pairs[i].src, p.pairs[i].dst) / top;
    }
  }
  return p;
}

Positives augmented_positives(const ExperimentConfig& cfg, const Graph& train_graph, Rng& rng) {
  Positives p;
  for (const auto& wp : walk_augment(train_graph, cfg.walk_length, rng, cfg.walks_per_node).pairs) {
    p.pairs.push_back(wp.pair);
    p.gammas.push_back(wp.weight);
  }
  return p;
}

std::uint64_t candidate_seed(std::uint64_t seed, const char* split) {
  return derive_seed(seed, std::string("candidates:") + split);
}

const NodeFeatures* features_of(const Dataset& data) {
  return data.features ? &*data.features : nullptr;
}

void stamp(MetricReport& report, const ExperimentConfig& cfg, std::uint64_t seed, std::size_t epoch) {
  report.seed = seed;
  report.config_hash = cfg.hash();
  report.epoch = epoch;
}

double metric_or_throw(const MetricReport& report, const std::string& name) {
  auto it = report.metrics.find(name);
  if (it == report.metrics.end()) throw ConfigError("selection metric '" + name + "' was not computed");
  return it->second;
}

ArmSummary summarize(LossKind loss, std::vector<MetricReport> reports) {
  ArmSummary arm;
  arm.loss = loss;
  arm.test = std::move(reports);
  std::map<std::string, std::vector<double>> values;
  for (const auto& r : arm.test) {
    for (const auto& [k, v] : r.metrics) values[k].push_back(v);
  }
  for (const auto& [k, vs] : values) {
    const double n = static_cast<double>(vs.size());
    const double mean = std::accumulate(vs.begin(), vs.end(), 0.0) / n;
    double ss = 0.0;
    for (double v : vs) ss += (v - mean) * (v - mean);
    arm.mean[k] = mean;
    arm.stddev[k] = vs.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  return arm;
}

ordered_json arm_to_json(const ArmSummary& arm) {
  ordered_json j;
  j["loss"] = to_string(arm.loss);
  j["mean"] = arm.mean;
  j["stddev"] = arm.stddev;
  auto runs = ordered_json::array();
  for (const auto& r : arm.test) runs.push_back(ordered_json::parse(r.to_json()));
  j["runs"] = std::move(runs);
  return j;
}

}  // namespace

EdgeSplit split_edges(const Graph& g, double train_fraction, double valid_fraction,
                      double test_fraction, Rng& rng) {
  check_fractions(train_fraction, valid_fraction, test_fraction);
  auto edges = g.edges();
  std::shuffle(edges.begin(), edges.end(), rng);
  const auto total = static_cast<double>(edges.size());
  const auto n_valid = static_cast<std::size_t>(std::llround(valid_fraction * total));
  const auto n_test = static_cast<std::size_t>(std::llround(test_fraction * total));
  if (n_valid == 0 || n_test == 0 || n_valid + n_test >= edges.size()) {
    throw ValidationError("split of " + std::to_string(edges.size()) +
                          " edges leaves a part empty (valid " + std::to_string(n_valid) +
                          ", test " + std::to_string(n_test) + ")");
  }
  EdgeSplit split;
  split.valid.assign(edges.begin(), edges.begin() + static_cast<std::ptrdiff_t>(n_valid));
  split.test.assign(edges.begin() + static_cast<std::ptrdiff_t>(n_valid),
                    edges.begin() + static_cast<std::ptrdiff_t>(n_valid + n_test));
  split.train.assign(edges.begin() + static_cast<std::ptrdiff_t>(n_valid + n_test), edges.end());
  split.train_graph = graph_from_pairs(g, split.train);
  return split;
}

Dataset make_dataset(Graph full, std::optional<NodeFeatures> features, const ExperimentConfig& cfg,
                     std::uint64_t seed) {
  if (cfg.split != SplitKind::random) throw ConfigError("make_dataset only performs random splits");
  if (features && features->values.rows() != full.num_nodes()) {
    throw DimensionError("feature rows do not match node count");
  }
  Dataset data{std::move(full), std::move(features), {}};
  Rng rng = make_rng(seed, "split");
  data.split = split_edges(data.full, cfg.train_fraction, cfg.valid_fraction, cfg.test_fraction, rng);
  if (cfg.train_on_valid) finish_split(data.split, data.full, true);
  return data;
}

Dataset load_dataset(const ExperimentConfig& cfg, std::uint64_t seed) {
  if (cfg.split == SplitKind::random) {
    Graph full = load_edge_list(cfg.graph_path, cfg.directed);
    std::optional<NodeFeatures> feats;
    if (!cfg.features_path.empty()) feats = load_features(cfg.features_path, full);
    return make_dataset(std::move(full), std::move(feats), cfg, seed);
  }

  // Provided split: one token map across the three files.
  TokenMap tokens;
  auto read = [&](const std::string& path) {
    auto in = open_edges(path);
    return parse_edge_records(in, tokens);
  };
  EdgeRecords train = read(cfg.graph_path);
  EdgeRecords valid = read(cfg.valid_path);
  EdgeRecords test = read(cfg.test_path);

  EdgeRecords all = train;
  all.edges.insert(all.edges.end(), valid.edges.begin(), valid.edges.end());
  all.edges.insert(all.edges.end(), test.edges.begin(), test.edges.end());
  all.has_explicit_weights = train.has_explicit_weights || valid.has_explicit_weights ||
                             test.has_explicit_weights;

  Dataset data{build_graph(all, tokens, cfg.directed), std::nullopt, {}};
  Graph train_graph = build_graph(train, tokens, cfg.directed);
  auto to_pairs = [&](const EdgeRecords& r) {
    Graph g(tokens.size(), cfg.directed, r.edges, false);
    return g.edges();
  };
  data.split.train = train_graph.edges();
  data.split.valid = to_pairs(valid);
  data.split.test = to_pairs(test);
  for (const auto& part : {data.split.train, data.split.valid, data.split.test}) {
    if (part.empty()) throw ValidationError("provided split has an empty part");
  }
  for (const auto& e : data.split.valid) {
    if (train_graph.has_edge(e.src, e.dst)) throw ValidationError("validation edge also in training edges");
  }
  for (const auto& e : data.split.test) {
    if (train_graph.has_edge(e.src, e.dst)) throw ValidationError("test edge also in training edges");
  }
  data.split.train_graph = std::move(train_graph);
  if (cfg.train_on_valid) finish_split(data.split, data.full, true);
  if (!cfg.features_path.empty()) data.features = load_features(cfg.features_path, data.full);
  return data;
}

std::string log_to_json(const std::vector<EpochLog>& log) {
  auto arr = ordered_json::array();
  for (const auto& e : log) {
    ordered_json j;
    j["epoch"] = e.epoch;
    j["loss"] = e.loss;
    j["pairs"] = e.pairs;
    j["valid"] = e.valid;
    arr.push_back(std::move(j));
  }
  return arr.dump();
}

RunResult train(const ExperimentConfig& cfg, const Dataset& data, std::uint64_t seed,
                const EpochCallback& on_epoch) {
  cfg.validate(false);
  const Graph& train_graph = data.split.train_graph;
  LinkModel model(train_graph, features_of(data), cfg.encoder, cfg.predictor);

  RunResult result;
  result.seed = seed;
  result.architecture_hash = model.architecture_hash();

  ParameterStore store;
  Rng init_rng = make_rng(seed, "init");
  model.init(store, init_rng);

  Rng order_rng = make_rng(seed, "shuffle");
  Rng neg_rng = make_rng(seed, "negatives");
  Rng share_rng = make_rng(seed, "share");
  Rng dropout_rng = make_rng(seed, "dropout");
  Rng walk_rng = make_rng(seed, "walks");

  // Negatives are non-edges of the training graph unless filtering is on.
  const Graph& exclusion = cfg.filter_negatives ? data.full : train_graph;
  std::optional<LocalSampler> local;
  if (cfg.sampler.strategy == SamplerStrategy::local) local.emplace(exclusion, cfg.sampler.degree_power);

  const auto valid_candidates =
      make_eval_candidates(data.full, data.split.valid, cfg.eval, candidate_seed(seed, "valid"));
  const auto test_candidates =
      make_eval_candidates(data.full, data.split.test, cfg.eval, candidate_seed(seed, "test"));
  const std::string selection = cfg.selection_metric();

  Positives positives = base_positives(cfg, data);
  const bool use_gammas = cfg.loss == LossKind::weighted_hinge_auc;
  double best = -std::numeric_limits<double>::infinity();
  bool first_batch = true;

  for (std::size_t epoch = 1; epoch <= cfg.epochs; ++epoch) {
    if (cfg.walk_aug && (epoch - 1) % cfg.walk_refresh == 0) {
      positives = augmented_positives(cfg, train_graph, walk_rng);
    }
    std::vector<std::size_t> order(positives.pairs.size());
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), order_rng);

    double loss_sum = 0.0;
    std::size_t pair_count = 0;
    std::size_t batch_index = 0;
    for (std::size_t begin = 0; begin < order.size(); begin += cfg.batch_size, ++batch_index) {
      const std::size_t end = std::min(order.size(), begin + cfg.batch_size);
      std::vector<NodePair> pos;
      std::vector<double> gammas;
      for (std::size_t i = begin; i < end; ++i) {
        pos.push_back(positives.pairs[order[i]]);
        gammas.push_back(positives.gammas[order[i]]);
      }
      std::vector<NodePair> neg;
      if (local) {
        neg.reserve(pos.size());
        for (const auto& p : pos) neg.push_back(local->sample(p, cfg.sampler.anchor, neg_rng));
      } else {
        neg = sample_global(exclusion, pos.size(), neg_rng);
      }
      const auto pairs = share_negatives(pos, neg, cfg.sampler.num_neg, share_rng, gammas);

      std::vector<NodePair> pos_side, neg_side;
      std::vector<double> pair_gammas;
      pos_side.reserve(pairs.size());
      neg_side.reserve(pairs.size());
      for (const auto& tp : pairs) {
        pos_side.push_back(tp.pos);
        neg_side.push_back(tp.neg);
        pair_gammas.push_back(tp.gamma);
      }

      double value = 0.0;
      try {
        Tape tape;
        Tensor h = model.encode(tape, store, Mode::train, dropout_rng);
        Tensor s_pos = model.score_pairs(tape, h, pos_side, store, Mode::train, dropout_rng);
        Tensor s_neg = model.score_pairs(tape, h, neg_side, store, Mode::train, dropout_rng);
        Tensor l = loss(tape, s_pos, s_neg,
                        use_gammas ? std::span<const double>(pair_gammas) : std::span<const double>{},
                        cfg.loss);
        value = l.item();
        tape.backward(l);
      } catch (const NumericError& e) {
        throw DivergenceError("non-finite values at epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(batch_index) + ": " + e.what());
      }
      if (!std::isfinite(value)) {
        throw DivergenceError("non-finite loss at epoch " + std::to_string(epoch) + ", batch " +
                              std::to_string(batch_index));
      }
      if (first_batch) {
        result.initial_loss = value;
        first_batch = false;
      }
      if (cfg.optimizer.lr > 0.0) {
        optimizer_step(store, cfg.optimizer);
      } else {
        store.zero_grad();
      }
      loss_sum += value * static_cast<double>(pairs.size());
      pair_count += pairs.size();
    }

    EpochLog entry;
    entry.epoch = epoch;
    entry.pairs = pair_count;
    entry.loss = pair_count ? loss_sum / static_cast<double>(pair_count) : 0.0;
    MetricReport valid = evaluate_model(model, store, valid_candidates, cfg.eval);
    entry.valid = valid.metrics;
    const double score = metric_or_throw(valid, selection);
    if (score > best) {
      best = score;
      result.store = store;
      result.best_epoch = epoch;
      result.valid = valid;
    }
    result.log.push_back(entry);
    if (on_epoch) on_epoch(entry);
  }

  stamp(result.valid, cfg, seed, result.best_epoch);
  result.test = evaluate_model(model, result.store, test_candidates, cfg.eval);
  stamp(result.test, cfg, seed, result.best_epoch);
  return result;
}

std::uint64_t run_seed(const ExperimentConfig& cfg, std::size_t run) { return cfg.seed + run; }

std::string AblationReport::to_json() const {
  ordered_json j;
  j["metric"] = metric;
  j["win_rate"] = win_rate;
  j["seeds"] = seeds;
  j["pairwise"] = arm_to_json(pairwise);
  j["classification"] = arm_to_json(classification);
  return j.dump(2);
}

AblationReport run_ablation(const ExperimentConfig& cfg, const DatasetFactory& dataset_for_seed) {
  ExperimentConfig first = cfg;
  ExperimentConfig second = cfg;
  second.loss = cfg.ablation_loss;
  first.validate(false);
  second.validate(false);

  AblationReport report;
  report.metric = cfg.selection_metric();
  std::vector<MetricReport> a, b;
  std::size_t wins = 0;
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    const std::uint64_t seed = run_seed(cfg, r);
    report.seeds.push_back(seed);
    const Dataset data = dataset_for_seed(seed);
    // Same seed: same split, initialization and negative stream in both arms.
    a.push_back(train(first, data, seed).test);
    b.push_back(train(second, data, seed).test);
    if (a.back().at(report.metric) > b.back().at(report.metric)) ++wins;
  }
  report.win_rate = static_cast<double>(wins) / static_cast<double>(cfg.runs);
  report.pairwise = summarize(first.loss, std::move(a));
  report.classification = summarize(second.loss, std::move(b));
  return report;
}

void save_run_checkpoint(const std::string& path, const RunResult& run, const Graph& graph,
                         const ExperimentConfig& cfg) {
  Checkpoint ckpt;
  ckpt.store = run.store;
  ckpt.config_hash = run.architecture_hash;
  ckpt.node_tokens = graph.tokens();
  ordered_json meta;
  meta["seed"] = run.seed;
  meta["best_epoch"] = run.best_epoch;
  meta["valid"] = ordered_json::parse(run.valid.to_json());
  meta["config"] = ordered_json::parse(cfg.to_json());
  ckpt.metadata = meta.dump();
  save_checkpoint(path, ckpt);
}

namespace {

RunCheckpointInfo read_info(const Checkpoint& ckpt) {
  RunCheckpointInfo info;
  try {
    auto meta = nlohmann::json::parse(ckpt.metadata);
    info.seed = meta.at("seed").get<std::uint64_t>();
    info.best_epoch = meta.at("best_epoch").get<std::size_t>();
    info.valid = MetricReport::from_json(meta.at("valid").dump());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("checkpoint lacks run metadata: ") + e.what());
  }
  return info;
}

}  // namespace

EvaluationOutcome evaluate_checkpoint(const ExperimentConfig& cfg, const std::string& path,
                                      bool allow_mismatch) {
  const RunCheckpointInfo info = read_info(load_checkpoint(path));
  return evaluate_checkpoint(cfg, load_dataset(cfg, info.seed), path, allow_mismatch);
}

EvaluationOutcome evaluate_checkpoint(const ExperimentConfig& cfg, const Dataset& data,
                                      const std::string& path, bool allow_mismatch) {
  LinkModel model(data.split.train_graph, features_of(data), cfg.encoder, cfg.predictor);
  Checkpoint ckpt = load_checkpoint(path, model.architecture_hash(), allow_mismatch);
  if (!data.full.tokens().empty() && ckpt.node_tokens != data.full.tokens()) {
    throw CompatibilityError("checkpoint node tokens differ from the graph's");
  }

  // Shapes must still line up even when the hash check is waived.
  ParameterStore expected;
  Rng scratch(0);
  model.init(expected, scratch);
  for (const auto& [name, p] : expected) {
    if (!ckpt.store.contains(name)) throw CompatibilityError("checkpoint lacks parameter '" + name + "'");
    const auto& got = ckpt.store.at(name).value;
    if (got.rows() != p.value.rows() || got.cols() != p.value.cols()) {
      throw CompatibilityError("parameter '" + name + "' is " + got.shape_string() + ", model needs " +
                               p.value.shape_string());
    }
  }

  EvaluationOutcome out;
  out.stored = read_info(ckpt);
  const std::uint64_t seed = out.stored.seed;
  const auto valid_candidates =
      make_eval_candidates(data.full, data.split.valid, cfg.eval, candidate_seed(seed, "valid"));
  const auto test_candidates =
      make_eval_candidates(data.full, data.split.test, cfg.eval, candidate_seed(seed, "test"));
  out.valid = evaluate_model(model, ckpt.store, valid_candidates, cfg.eval);
  out.test = evaluate_model(model, ckpt.store, test_candidates, cfg.eval);
  stamp(out.valid, cfg, seed, out.stored.best_epoch);
  stamp(out.test, cfg, seed, out.stored.best_epoch);
  return out;
}

MetricReport evaluate_heuristic(const ExperimentConfig& cfg, const Dataset& data,
                                HeuristicKind kind, std::uint64_t seed) {
  const auto candidates =
      make_eval_candidates(data.full, data.split.test, cfg.eval, candidate_seed(seed, "test"));
  const Graph& g = data.split.train_graph;
  auto scorer = [&](std::span<const NodePair> pairs) {
    std::vector<double> out;
    out.reserve(pairs.size());
    for (const auto& p : pairs) out.push_back(heuristic_score(g, p.src, p.dst, kind));
    return out;
  };
  MetricReport report = metrics_from_ranking(rank_candidates(scorer, candidates), cfg.eval);
  stamp(report, cfg, seed, 0);
  return report;
}

}  // namespace pairlink
