// Acceptance suite: one PASS/FAIL line per criterion. Pass criterion numbers
// as arguments to run a subset. Exit status is nonzero if any line fails.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "pairlink/checkpoint.hpp"
#include "pairlink/error.hpp"
#include "pairlink/evaluation.hpp"
#include "pairlink/generators.hpp"
#include "pairlink/grad_check.hpp"
#include "pairlink/heuristics.hpp"
#include "pairlink/metrics.hpp"
#include "pairlink/model.hpp"
#include "pairlink/objectives.hpp"
#include "pairlink/runner.hpp"
#include "pairlink/sampling.hpp"
#include "support.hpp"

using namespace pairlink;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// ---- shared SBM benchmark ----

constexpr std::size_t kSeeds = 5;
const SbmParams kSbm{400, 2, 0.10, 0.01};

const Graph& sbm_graph() {
  static const Graph g = [] {
    Rng rng = make_rng(0, "sbm-benchmark");
    return stochastic_block_model(kSbm, rng);
  }();
  return g;
}

ExperimentConfig sbm_config() {
  ExperimentConfig c;
  c.encoder = {EncoderKind::embedding_only, 0, 4, 0.0, NodeInput::embedding, 4};
  c.predictor = {PredictorKind::dot, 1, 4, 0.0};
  c.loss = LossKind::auc;
  c.sampler.num_neg = 1;
  c.optimizer.lr = 0.003;
  c.optimizer.lambda = 0.001;
  c.epochs = 200;
  c.batch_size = 65536;
  c.eval.mode = EvalMode::shared;
  c.eval.num_neg = 500;
  c.eval.hits_k = {20};
  c.eval_metric = "auc";
  c.train_fraction = 0.8;
  c.valid_fraction = 0.1;
  c.test_fraction = 0.1;
  c.validate(false);
  return c;
}

Dataset sbm_dataset(const ExperimentConfig& cfg, std::uint64_t seed) {
  return make_dataset(sbm_graph(), std::nullopt, cfg, seed);
}

// AUC of the best possible scorer, which knows the planted blocks: pairs
// inside a block are more likely edges, and edges are independent given the
// blocks, so nothing else in the graph separates held-out edges from
// non-edges. Ties count one half.
double block_oracle_auc(const EvalCandidates& c) {
  const auto block = sbm_blocks(kSbm);
  auto same = [&](NodePair p) { return block[p.src] == block[p.dst]; };
  double pos_in = 0, neg_in = 0;
  for (auto p : c.positives) pos_in += same(p);
  for (auto p : c.shared) neg_in += same(p);
  const double a = pos_in / static_cast<double>(c.positives.size());
  const double b = neg_in / static_cast<double>(c.shared.size());
  return a * (1.0 - b) + 0.5 * (a * b + (1.0 - a) * (1.0 - b));
}

// ---- criteria ----

Outcome gradients() {
  const auto t0 = Clock::now();
  Rng rng(10);
  const Graph g = testing::random_graph(10, 0.35, rng);
  const auto pos = g.edges();
  const auto neg = sample_global(g, pos.size(), rng);
  std::vector<double> gammas(pos.size());
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  for (auto& x : gammas) x = unit(rng);

  double worst = 0.0;
  std::string worst_case;
  std::size_t cases = 0, failed = 0;
  for (auto enc_kind : {EncoderKind::gcn, EncoderKind::sage, EncoderKind::embedding_only}) {
    for (auto pred_kind : {PredictorKind::dot, PredictorKind::bilinear, PredictorKind::mlp_hadamard,
                           PredictorKind::mlp_concat}) {
      for (auto loss_kind : {LossKind::auc, LossKind::hinge_auc, LossKind::weighted_hinge_auc,
                             LossKind::cross_entropy}) {
        EncoderConfig enc{enc_kind, enc_kind == EncoderKind::embedding_only ? 0u : 2u, 4, 0.0,
                          NodeInput::embedding, 4};
        PredictorConfig pred{pred_kind, 2, 4, 0.0};
        LinkModel model(g, nullptr, enc, pred);
        ParameterStore store;
        Rng init(cases);
        model.init(store, init);
        // Nonzero biases so every bias gradient is exercised.
        for (auto& [name, p] : store) {
          if (name.find("bias") != std::string::npos) p.value = normal_init(p.value.rows(), p.value.cols(), 0.1, init);
        }
        Rng unused(0);
        auto f = [&](Tape& tape) {
          Tensor h = model.encode(tape, store, Mode::eval, unused);
          Tensor sp = model.score_pairs(tape, h, pos, store, Mode::eval, unused);
          Tensor sn = model.score_pairs(tape, h, neg, store, Mode::eval, unused);
          const bool weighted = loss_kind == LossKind::weighted_hinge_auc;
          return loss(tape, sp, sn, weighted ? std::span<const double>(gammas) : std::span<const double>{},
                      loss_kind);
        };
        GradCheckOptions opts;
        opts.eps = 1e-5;
        opts.tol = 1e-4;
        const auto r = grad_check(f, store, opts);
        ++cases;
        if (!r.passed) ++failed;
        if (r.max_rel_error >= worst) {
          worst = r.max_rel_error;
          worst_case = to_string(enc_kind) + "/" + to_string(pred_kind) + "/" + to_string(loss_kind);
        }
      }
    }
  }
  const double secs = seconds_since(t0);
  return {failed == 0 && worst <= 1e-4 && secs < 60.0,
          fmt("%zu cases, %zu failed, max rel error %.3g (%s), %.1f s", cases, failed, worst,
              worst_case.c_str(), secs)};
}

Outcome loss_values() {
  auto sig12 = [](double x) { return fmt("%.11e", x); };
  struct Case {
    const char* name;
    double pos, neg, gamma;
    LossKind kind;
    double expected;
  };
  const Case cases[] = {
      {"square at margin", 1.0, 0.0, 1.0, LossKind::auc, 0.0},
      {"square inverted", 0.3, 0.5, 1.0, LossKind::auc, 1.44},
      {"hinge satisfied", 2.0, 0.5, 1.0, LossKind::hinge_auc, 0.0},
      {"hinge inside margin", 0.2, 0.0, 1.0, LossKind::hinge_auc, 0.64},
      {"weighted tie", 0.4, 0.4, 1.0, LossKind::weighted_hinge_auc, 1.0},
  };
  std::string bad;
  for (const auto& c : cases) {
    std::vector<double> p{c.pos}, n{c.neg}, g{c.gamma};
    const double got = loss_value(p, n,
                                  c.kind == LossKind::weighted_hinge_auc ? std::span<const double>(g)
                                                                         : std::span<const double>{},
                                  c.kind);
    if (sig12(got) != sig12(c.expected)) bad += std::string(bad.empty() ? "" : ", ") + c.name + "=" + sig12(got);
  }
  return {bad.empty(), bad.empty() ? "5 examples agree to 12 significant digits" : "mismatch: " + bad};
}

Outcome heuristics() {
  constexpr HeuristicKind kinds[] = {HeuristicKind::cn, HeuristicKind::jaccard, HeuristicKind::pa,
                                     HeuristicKind::aa, HeuristicKind::ra};
  Rng rng(3);
  std::uniform_int_distribution<std::size_t> size(2, 30);
  std::uniform_real_distribution<double> density(0.05, 0.6);
  std::size_t checked = 0, mismatched = 0;
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = size(rng);
    const Graph g = testing::random_graph(n, density(rng), rng);
    for (NodeId u = 0; u < n; ++u)
      for (NodeId v = 0; v < n; ++v)
        if (u != v)
          for (auto k : kinds) {
            ++checked;
            mismatched += heuristic_score(g, u, v, k) != oracle::heuristic(g, u, v, k);
          }
  }
  std::istringstream in("1 2\n1 3\n2 3\n2 4\n3 4\n");
  const Graph w = read_edge_list(in, false);
  // Tokens are interned in first-seen order, so "1" is 0 and "4" is 3.
  const NodeId a = 0, b = 3;
  const double want[] = {2.0, 1.0, 4.0, 2.0 / std::log(3.0), 2.0 / 3.0};
  bool worked = std::abs(want[3] - 1.8205) < 1e-4;
  for (std::size_t i = 0; i < 5; ++i) worked = worked && std::abs(heuristic_score(w, a, b, kinds[i]) - want[i]) <= 1e-12;
  return {mismatched == 0 && worked,
          fmt("%zu oracle comparisons, %zu mismatches; worked example %s", checked, mismatched,
              worked ? "reproduced" : "wrong")};
}

Outcome metric_oracles() {
  Rng rng(4);
  std::uniform_int_distribution<std::size_t> size(1, 500);
  std::uniform_int_distribution<int> levels(1, 40);
  std::size_t bad_auc = 0, bad_hits = 0, bad_mrr = 0;
  for (int t = 0; t < 1000; ++t) {
    std::uniform_int_distribution<int> level(0, levels(rng));
    const std::size_t np = size(rng);
    const std::size_t nn = size(rng);
    std::vector<double> pos(np), neg(nn);
    for (auto& x : pos) x = level(rng);
    for (auto& x : neg) x = level(rng);
    bad_auc += empirical_auc(pos, neg) != oracle::auc(pos, neg);
    RankingResult shared;
    shared.pos_scores = pos;
    shared.shared_neg_scores = neg;
    const std::size_t k = std::uniform_int_distribution<std::size_t>(1, nn)(rng);
    bad_hits += hits_at_k(shared, k) != oracle::hits(pos, neg, k);
    std::vector<std::vector<double>> lists(np);
    const std::size_t per = std::max<std::size_t>(1, 500 / np);
    for (auto& l : lists) {
      l.resize(std::uniform_int_distribution<std::size_t>(1, per)(rng));
      for (auto& x : l) x = level(rng);
    }
    RankingResult ranked;
    ranked.pos_scores = pos;
    ranked.per_pos_neg_scores = lists;
    bad_mrr += mrr(ranked) != oracle::mrr(pos, lists);
  }
  return {bad_auc + bad_hits + bad_mrr == 0,
          fmt("1000 instances; mismatches auc %zu, hits %zu, mrr %zu", bad_auc, bad_hits, bad_mrr)};
}

Outcome samplers() {
  Rng rng(5);
  // Uniformity over an enumerable complement.
  const Graph small = testing::random_graph(12, 0.3, rng);
  std::map<NodePair, std::size_t> index;
  for (NodeId u = 0; u < 12; ++u)
    for (NodeId v = 0; v < 12; ++v)
      if (u != v && !small.has_edge(u, v)) index.emplace(NodePair{u, v}, index.size());
  std::vector<double> observed(index.size(), 0.0);
  bool in_support = true;
  for (auto p : sample_global(small, 100000, rng)) {
    auto it = index.find(p);
    if (it == index.end()) {
      in_support = false;
      continue;
    }
    observed[it->second] += 1.0;
  }
  const std::vector<double> expected(index.size(), 100000.0 / static_cast<double>(index.size()));
  const double p_value = oracle::chi_square_p(observed, expected);

  // Sharing: m * num_neg pairs, every negative used num_neg times.
  const std::size_t m = 1000, num_neg = 4;
  std::vector<NodePair> pos(m), neg(m);
  for (std::size_t i = 0; i < m; ++i) {
    pos[i] = {static_cast<NodeId>(i), static_cast<NodeId>(i + 1)};
    neg[i] = {static_cast<NodeId>(i), static_cast<NodeId>(i + 2)};
  }
  const auto shared = share_negatives(pos, neg, num_neg, rng);
  std::vector<std::size_t> uses(m, 0), pos_uses(m, 0);
  for (const auto& tp : shared) {
    ++uses[tp.neg_index];
    ++pos_uses[tp.pos_index];
  }
  bool sharing = shared.size() == m * num_neg;
  for (std::size_t i = 0; i < m; ++i) sharing = sharing && uses[i] == num_neg && pos_uses[i] == num_neg;

  // No edge or self-pair from either sampler over 1e6 draws each.
  const auto train = make_dataset(sbm_graph(), std::nullopt, sbm_config(), 1).split.train_graph;
  std::size_t violations = 0;
  for (auto p : sample_global(train, 1000000, rng)) violations += p.src == p.dst || train.has_edge(p.src, p.dst);
  LocalSampler local(train, 0.75);
  const auto edges = train.edges();
  for (std::size_t i = 0; i < 1000000; ++i) {
    const auto p = local.sample(edges[i % edges.size()], AnchorRule::coin, rng);
    violations += p.src == p.dst || train.has_edge(p.src, p.dst);
  }
  return {in_support && p_value > 0.01 && sharing && violations == 0,
          fmt("chi-square p %.3f over %zu cells%s; sharing %s; %zu violations in 2e6 draws", p_value,
              index.size(), in_support ? "" : " (draw outside support)", sharing ? "exact" : "wrong",
              violations)};
}

Outcome learning() {
  const auto cfg = sbm_config();
  double auc_sum = 0.0, bound_sum = 0.0, slowest = 0.0;
  std::string per_run;
  for (std::size_t r = 0; r < kSeeds; ++r) {
    const auto t0 = Clock::now();
    const auto data = sbm_dataset(cfg, r);
    const auto run = train(cfg, data, r);
    slowest = std::max(slowest, seconds_since(t0));
    const double auc = run.test.at("auc");
    auc_sum += auc;
    const auto candidates =
        make_eval_candidates(data.full, data.split.test, cfg.eval, derive_seed(r, "candidates:test"));
    bound_sum += block_oracle_auc(candidates);
    per_run += fmt("%s%.3f", per_run.empty() ? "" : " ", auc);
  }
  const double mean = auc_sum / kSeeds;
  return {mean >= 0.80 && slowest < 120.0,
          fmt("mean test AUC %.4f (runs %s; need >= 0.80); block-oracle AUC on the same candidates %.4f; "
              "slowest run %.1f s",
              mean, per_run.c_str(), bound_sum / kSeeds, slowest)};
}

Outcome ablation() {
  auto cfg = sbm_config();
  cfg.runs = kSeeds;
  cfg.loss = LossKind::auc;
  cfg.ablation_loss = LossKind::cross_entropy;
  const auto rep = run_ablation(cfg, [&](std::uint64_t s) { return sbm_dataset(cfg, s); });
  const double auc_pw = rep.pairwise.mean.at("auc"), auc_ce = rep.classification.mean.at("auc");
  const double hits_pw = rep.pairwise.mean.at("hits@20"), hits_ce = rep.classification.mean.at("hits@20");
  return {auc_pw >= auc_ce && hits_pw >= hits_ce - 0.02,
          fmt("mean AUC pairwise %.4f vs cross-entropy %.4f; mean hits@20 %.4f vs %.4f; win rate %.2f",
              auc_pw, auc_ce, hits_pw, hits_ce, rep.win_rate)};
}

Outcome augmentation() {
  auto cfg = sbm_config();
  const auto data = sbm_dataset(cfg, 0);
  const Graph& g = data.split.train_graph;
  Rng rng = make_rng(0, "walks");
  const auto aug = walk_augment(g, 10, rng);
  std::set<NodePair> seen;
  bool weights_ok = true;
  for (const auto& wp : aug.pairs) {
    seen.insert(wp.pair);
    weights_ok = weights_ok && wp.weight > 0.0 && wp.weight <= 1.0;
  }
  bool superset = true;
  for (auto e : g.edges()) superset = superset && seen.count(e);

  cfg.loss = LossKind::weighted_hinge_auc;
  cfg.walk_aug = true;
  cfg.walk_length = 10;
  cfg.epochs = 50;
  std::string status = "completed";
  bool finite = true;
  try {
    const auto run = train(cfg, data, 0);
    for (const auto& e : run.log) finite = finite && std::isfinite(e.loss);
    status += fmt(", test AUC %.3f", run.test.at("auc"));
  } catch (const DivergenceError& e) {
    finite = false;
    status = std::string("diverged: ") + e.what();
  }
  return {weights_ok && superset && finite,
          fmt("%zu augmented pairs over %zu edges; weights in (0,1] %s; superset %s; training %s",
              aug.pairs.size(), g.num_edges(), weights_ok ? "yes" : "no", superset ? "yes" : "no",
              status.c_str())};
}

Outcome persistence() {
  auto cfg = sbm_config();
  const auto data = sbm_dataset(cfg, 7);
  const auto a = train(cfg, data, 7);
  const auto b = train(cfg, data, 7);
  const bool same_log = log_to_json(a.log) == log_to_json(b.log) && a.test.to_json() == b.test.to_json();

  Checkpoint ck;
  ck.config_hash = "x";
  ck.node_tokens = data.full.tokens();
  ck.store = a.store;
  std::ostringstream first;
  write_checkpoint(first, ck);
  std::istringstream in(first.str());
  const auto back = read_checkpoint(in);
  std::ostringstream second;
  write_checkpoint(second, back);
  bool exact = first.str() == second.str();
  for (const auto& [name, p] : a.store) {
    const auto& q = back.store.at(name).value;
    exact = exact && std::memcmp(p.value.data().data(), q.data().data(), p.value.data().size() * 8) == 0;
  }

  const auto path = (std::filesystem::temp_directory_path() / "pairlink_acceptance.ckpt").string();
  save_run_checkpoint(path, a, data.full, cfg);
  const auto out = evaluate_checkpoint(cfg, data, path);
  std::filesystem::remove(path);
  const std::string metric = cfg.selection_metric();
  const bool reproduced = out.valid.at(metric) == a.valid.at(metric);
  return {same_log && exact && reproduced,
          fmt("logs %s; checkpoint round trip %s; evaluate valid %s %.17g vs stored %.17g",
              same_log ? "identical" : "differ", exact ? "bit-exact" : "differs", metric.c_str(),
              out.valid.at(metric), a.valid.at(metric))};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"gradient correctness", gradients},  {"loss values", loss_values},
      {"heuristic oracle", heuristics},     {"metric oracles", metric_oracles},
      {"sampler invariants", samplers},     {"learning sanity", learning},
      {"ablation direction", ablation},     {"augmentation shape", augmentation},
      {"determinism and persistence", persistence},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int number = static_cast<int>(i + 1);
    if (!only.empty() && !only.count(number)) continue;
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.pass;
    std::printf("%s criterion %d (%s): %s\n", o.pass ? "PASS" : "FAIL", number, criteria[i].first,
                o.detail.c_str());
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
