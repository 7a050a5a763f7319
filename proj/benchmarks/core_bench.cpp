#include <benchmark/benchmark.h>

#include "pairlink/encoders.hpp"
#include "pairlink/generators.hpp"
#include "pairlink/heuristics.hpp"
#include "pairlink/metrics.hpp"
#include "pairlink/runner.hpp"
#include "pairlink/sampling.hpp"

using namespace pairlink;

namespace {

Graph sbm(std::size_t n) {
  Rng rng(1);
  return stochastic_block_model({n, 4, 20.0 / static_cast<double>(n), 2.0 / static_cast<double>(n)}, rng);
}

void BM_Spmm(benchmark::State& state) {
  const auto g = sbm(static_cast<std::size_t>(state.range(0)));
  const auto adj = NormalizedAdjacency::build(g, EncoderKind::gcn);
  Rng rng(2);
  const Matrix x = normal_init(g.num_nodes(), 64, 1.0, rng);
  for (auto _ : state) {
    Tape tape;
    benchmark::DoNotOptimize(spmm(adj.op, tape.constant(x)).value());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(adj.op.indices.size()));
}
BENCHMARK(BM_Spmm)->Arg(1000)->Arg(10000);

void BM_EncodeBackward(benchmark::State& state) {
  const auto g = sbm(2000);
  EncoderConfig enc{state.range(0) ? EncoderKind::sage : EncoderKind::gcn, 2, 64, 0.0, NodeInput::embedding, 64};
  PredictorConfig pred{PredictorKind::dot, 1, 64, 0.0};
  LinkModel model(g, nullptr, enc, pred);
  ParameterStore store;
  Rng rng(3);
  model.init(store, rng);
  const auto pairs = g.edges();
  for (auto _ : state) {
    Tape tape;
    Tensor h = model.encode(tape, store, Mode::train, rng);
    Tensor s = model.score_pairs(tape, h, pairs, store, Mode::train, rng);
    tape.backward(mean(s));
    store.zero_grad();
  }
}
BENCHMARK(BM_EncodeBackward)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_SampleGlobal(benchmark::State& state) {
  const auto g = sbm(10000);
  Rng rng(4);
  for (auto _ : state) benchmark::DoNotOptimize(sample_global(g, 10000, rng));
  state.SetItemsProcessed(state.iterations() * 10000);
}
BENCHMARK(BM_SampleGlobal);

void BM_SampleLocal(benchmark::State& state) {
  const auto g = sbm(10000);
  LocalSampler sampler(g, 0.75);
  const auto edges = g.edges();
  Rng rng(5);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(sampler.sample(edges[i++ % edges.size()], AnchorRule::coin, rng));
}
BENCHMARK(BM_SampleLocal);

void BM_WalkAugment(benchmark::State& state) {
  const auto g = sbm(2000);
  Rng rng(6);
  for (auto _ : state) benchmark::DoNotOptimize(walk_augment(g, 10, rng));
}
BENCHMARK(BM_WalkAugment)->Unit(benchmark::kMillisecond);

void BM_AdamicAdar(benchmark::State& state) {
  const auto g = sbm(10000);
  const auto edges = g.edges();
  std::size_t i = 0;
  for (auto _ : state) {
    const auto e = edges[i++ % edges.size()];
    benchmark::DoNotOptimize(heuristic_score(g, e.src, e.dst, HeuristicKind::aa));
  }
}
BENCHMARK(BM_AdamicAdar);

void BM_HitsAtK(benchmark::State& state) {
  Rng rng(7);
  std::normal_distribution<double> z;
  RankingResult r;
  r.pos_scores.resize(10000);
  r.shared_neg_scores.emplace(100000);
  for (auto& x : r.pos_scores) x = z(rng);
  for (auto& x : *r.shared_neg_scores) x = z(rng);
  for (auto _ : state) benchmark::DoNotOptimize(hits_at_k(r, 20));
}
BENCHMARK(BM_HitsAtK)->Unit(benchmark::kMillisecond);

void BM_TrainEpoch(benchmark::State& state) {
  ExperimentConfig cfg;
  cfg.encoder = {EncoderKind::sage, 2, 32, 0.0, NodeInput::embedding, 32};
  cfg.predictor = {PredictorKind::dot, 1, 32, 0.0};
  cfg.sampler.num_neg = 3;
  cfg.epochs = 1;
  cfg.batch_size = 4096;
  cfg.eval.num_neg = 500;
  const auto data = make_dataset(sbm(2000), std::nullopt, cfg, 1);
  for (auto _ : state) benchmark::DoNotOptimize(train(cfg, data, 1).log);
}
BENCHMARK(BM_TrainEpoch)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
