#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pairlink/config.hpp"
#include "pairlink/error.hpp"
#include "pairlink/generators.hpp"
#include "pairlink/heuristics.hpp"
#include "pairlink/runner.hpp"

namespace fs = std::filesystem;
using namespace pairlink;

namespace {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> runs;
  std::string out = "pairlink-out";
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config, "Experiment config (flat JSON object)")->required();
  cmd->add_option("--seed", c.seed, "Base seed; run r uses seed + r");
  cmd->add_option("--runs", c.runs, "Number of runs");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--set", c.overrides, "Config override key=value (repeatable)");
}

ExperimentConfig load(const Common& c) {
  auto overrides = c.overrides;
  if (c.seed) overrides.push_back("seed=" + std::to_string(*c.seed));
  if (c.runs) overrides.push_back("runs=" + std::to_string(*c.runs));
  return parse_config(c.config, overrides);
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << text << '\n';
}

class Csv {
 public:
  explicit Csv(const fs::path& path) : out_(path) {
    if (!out_) throw Error("cannot write '" + path.string() + "'");
    out_ << "run,seed,metric,value\n";
    out_.precision(17);
  }
  void add(std::size_t run, std::uint64_t seed, const std::string& prefix, const MetricReport& r) {
    for (const auto& [name, value] : r.metrics) {
      out_ << run << ',' << seed << ',' << prefix << name << ',' << value << '\n';
    }
  }

 private:
  std::ofstream out_;
};

void print_report(const std::string& label, const MetricReport& r) {
  std::cout << label;
  for (const auto& [name, value] : r.metrics) std::cout << "  " << name << '=' << value;
  std::cout << '\n';
}

int run_train(const Common& c) {
  const auto cfg = load(c);
  fs::create_directories(c.out);
  Csv csv(fs::path(c.out) / "metrics.csv");
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    const auto seed = run_seed(cfg, r);
    const Dataset data = load_dataset(cfg, seed);
    const RunResult run = train(cfg, data, seed, [&](const EpochLog& e) {
      std::cerr << "run " << r << " epoch " << e.epoch << " loss " << e.loss << '\n';
    });
    const std::string stem = "run_" + std::to_string(r);
    write_file(fs::path(c.out) / (stem + "_valid.json"), run.valid.to_json());
    write_file(fs::path(c.out) / (stem + "_test.json"), run.test.to_json());
    write_file(fs::path(c.out) / (stem + "_log.json"), log_to_json(run.log));
    save_run_checkpoint((fs::path(c.out) / (stem + ".ckpt")).string(), run, data.full, cfg);
    csv.add(r, seed, "valid.", run.valid);
    csv.add(r, seed, "test.", run.test);
    print_report("run " + std::to_string(r) + " seed " + std::to_string(seed) + " best epoch " +
                     std::to_string(run.best_epoch) + " test:",
                 run.test);
  }
  return 0;
}

int run_evaluate(const Common& c, const std::string& checkpoint, bool allow_mismatch) {
  const auto cfg = load(c);
  const EvaluationOutcome out = evaluate_checkpoint(cfg, checkpoint, allow_mismatch);
  fs::create_directories(c.out);
  write_file(fs::path(c.out) / "evaluate_valid.json", out.valid.to_json());
  write_file(fs::path(c.out) / "evaluate_test.json", out.test.to_json());
  Csv csv(fs::path(c.out) / "metrics.csv");
  csv.add(0, out.stored.seed, "valid.", out.valid);
  csv.add(0, out.stored.seed, "test.", out.test);
  print_report("valid:", out.valid);
  print_report("test:", out.test);
  return 0;
}

int run_ablate(const Common& c) {
  const auto cfg = load(c);
  const AblationReport report =
      run_ablation(cfg, [&](std::uint64_t seed) { return load_dataset(cfg, seed); });
  fs::create_directories(c.out);
  write_file(fs::path(c.out) / "ablation.json", report.to_json());
  Csv csv(fs::path(c.out) / "metrics.csv");
  for (std::size_t r = 0; r < report.seeds.size(); ++r) {
    const std::string stem = "run_" + std::to_string(r);
    write_file(fs::path(c.out) / (stem + "_" + to_string(report.pairwise.loss) + ".json"),
               report.pairwise.test[r].to_json());
    write_file(fs::path(c.out) / (stem + "_" + to_string(report.classification.loss) + ".json"),
               report.classification.test[r].to_json());
    csv.add(r, report.seeds[r], to_string(report.pairwise.loss) + ".", report.pairwise.test[r]);
    csv.add(r, report.seeds[r], to_string(report.classification.loss) + ".",
            report.classification.test[r]);
  }
  for (const auto* arm : {&report.pairwise, &report.classification}) {
    std::cout << to_string(arm->loss) << ':';
    for (const auto& [name, mean] : arm->mean) {
      std::cout << "  " << name << '=' << mean << " +- " << arm->stddev.at(name);
    }
    std::cout << '\n';
  }
  std::cout << "win rate (" << report.metric << "): " << report.win_rate << '\n';
  return 0;
}

int run_heuristic(const Common& c) {
  const auto cfg = load(c);
  std::vector<HeuristicKind> kinds;
  if (cfg.heuristic == "all") {
    kinds = {HeuristicKind::cn, HeuristicKind::jaccard, HeuristicKind::pa, HeuristicKind::aa,
             HeuristicKind::ra};
  } else {
    kinds = {parse_heuristic_kind(cfg.heuristic)};
  }
  fs::create_directories(c.out);
  Csv csv(fs::path(c.out) / "metrics.csv");
  for (std::size_t r = 0; r < cfg.runs; ++r) {
    const auto seed = run_seed(cfg, r);
    const Dataset data = load_dataset(cfg, seed);
    for (auto kind : kinds) {
      const MetricReport report = evaluate_heuristic(cfg, data, kind, seed);
      write_file(fs::path(c.out) / ("run_" + std::to_string(r) + "_" + to_string(kind) + ".json"),
                 report.to_json());
      csv.add(r, seed, to_string(kind) + ".", report);
      print_report("run " + std::to_string(r) + " " + to_string(kind) + ":", report);
    }
  }
  return 0;
}

struct GenerateArgs {
  std::string model;
  std::size_t nodes = 400;
  std::size_t blocks = 2;
  double p_in = 0.10;
  double p_out = 0.01;
  std::size_t edges_per_node = 3;
  std::uint64_t seed = 0;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  Rng rng = make_rng(a.seed, "generate");
  Graph g;
  if (a.model == "sbm") {
    g = stochastic_block_model({a.nodes, a.blocks, a.p_in, a.p_out}, rng);
  } else {
    g = barabasi_albert(a.nodes, a.edges_per_node, rng);
  }
  if (a.out.empty() || a.out == "-") {
    write_edge_list(std::cout, g);
  } else {
    const auto parent = fs::path(a.out).parent_path();
    if (!parent.empty()) fs::create_directories(parent);
    std::ofstream out(a.out);
    if (!out) throw Error("cannot write '" + a.out + "'");
    write_edge_list(out, g);
  }
  std::cerr << a.model << ": " << g.num_nodes() << " nodes, " << g.num_edges() << " edges\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pairwise learning-to-rank link prediction"};
  app.require_subcommand(1);

  Common common;
  auto* train_cmd = app.add_subcommand("train", "Train and evaluate; writes reports and checkpoints");
  add_common(train_cmd, common);

  auto* eval_cmd = app.add_subcommand("evaluate", "Re-score a saved checkpoint");
  add_common(eval_cmd, common);
  std::string checkpoint;
  bool allow_mismatch = false;
  eval_cmd->add_option("checkpoint", checkpoint, "Checkpoint file")->required();
  eval_cmd->add_flag("--allow-mismatch", allow_mismatch, "Load despite an architecture mismatch");

  auto* ablate_cmd = app.add_subcommand("ablate", "Compare loss against ablation_loss over runs");
  add_common(ablate_cmd, common);

  auto* heur_cmd = app.add_subcommand("heuristic", "Score the test split with neighborhood heuristics");
  add_common(heur_cmd, common);

  GenerateArgs gen;
  auto* gen_cmd = app.add_subcommand("generate", "Write a synthetic edge list");
  gen_cmd->add_option("model", gen.model, "sbm or ba")->required()->check(CLI::IsMember({"sbm", "ba"}));
  gen_cmd->add_option("--nodes", gen.nodes, "Node count");
  gen_cmd->add_option("--blocks", gen.blocks, "SBM block count");
  gen_cmd->add_option("--p-in", gen.p_in, "SBM within-block edge probability");
  gen_cmd->add_option("--p-out", gen.p_out, "SBM across-block edge probability");
  gen_cmd->add_option("--edges-per-node", gen.edges_per_node, "Barabasi-Albert attachment count");
  gen_cmd->add_option("--seed", gen.seed, "Generator seed");
  gen_cmd->add_option("--out", gen.out, "Output edge list (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*train_cmd) return run_train(common);
    if (*eval_cmd) return run_evaluate(common, checkpoint, allow_mismatch);
    if (*ablate_cmd) return run_ablate(common);
    if (*heur_cmd) return run_heuristic(common);
    if (*gen_cmd) return run_generate(gen);
  } catch (const pairlink::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
