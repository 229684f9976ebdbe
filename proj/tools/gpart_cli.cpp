// Command-line front end: graph generation, single-graph partitioning,
// partition evaluation and the benchmark sweep.
//
// Exit codes: 0 success, 1 usage error, 2 input error, 3 runtime failure.

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "gpart/gpart.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitInput = 2;
constexpr int kExitRuntime = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Flags mirrored by config-file keys; values stay as text until applied.
const std::vector<std::pair<std::string, std::string>> kSharedFlags = {
    {"method", "gnn|kl|spectral (bench: comma list)"},
    {"mode", "loss formulation: literal|corrected"},
    {"alpha", "cut/balance sharpness"},
    {"xi", "centrality width"},
    {"z", "Markov confidence in [0,1)"},
    {"epochs", "training epochs"},
    {"lr", "Adam learning rate"},
    {"hidden", "hidden width"},
    {"embed-dim", "node embedding width"},
    {"seed", "random seed"},
    {"er-p", "Erdos-Renyi edge probability"},
    {"sizes", "comma-separated node counts"},
    {"graphs-per-size", "graphs generated per size"},
    {"seeds-per-graph", "training/KL seeds per graph"},
    {"split-rule", "spectral split: sign|median"},
    {"decoder", "GNN decoder: argmax|balanced"},
    {"family", "graph family: er|planted|twin-cliques"},
    {"p-in", "planted within-community probability"},
    {"p-out", "planted cross-community probability"},
    {"lambda-cut", "cut term weight"},
    {"lambda-balance", "balance term weight"},
    {"lambda-centrality", "centrality term weight"},
    {"patience", "early-stop patience in epochs"},
    {"kl-passes", "Kernighan-Lin pass cap"},
    {"timing", "record runtimes in the CSV (true|false)"},
};

struct CommonOptions {
  std::map<std::string, std::string> values;
  std::map<std::string, CLI::Option*> options;
  std::string config_path;
  std::string format = "edge-list";
  std::string out;

  void attach(CLI::App* app) {
    for (const auto& [name, help] : kSharedFlags) {
      options[name] = app->add_option("--" + name, values[name], help);
    }
    app->add_option("--config", config_path, "flat key = value file; flags override it");
    app->add_option("--format", format, "graph file format: edge-list|metis");
    app->add_option("--out", out, "output path");
  }

  /// Config file settings first, then explicit flags.
  std::vector<gpart::Setting> settings() const {
    std::vector<gpart::Setting> all;
    if (!config_path.empty()) {
      try {
        all = gpart::load_settings(config_path);
      } catch (const gpart::Error& e) {
        throw InputError(e.what());
      }
    }
    for (const auto& [name, opt] : options) {
      if (opt->count() > 0) all.emplace_back(name, values.at(name));
    }
    if (!out.empty()) all.emplace_back("out", out);
    return all;
  }

  gpart::BenchConfig bench_config() const {
    gpart::BenchConfig cfg;
    for (const auto& [key, value] : settings()) {
      try {
        if (key == "format") continue;
        if (!gpart::apply_setting(cfg, key, value)) throw UsageError("unknown setting '" + key + "'");
      } catch (const gpart::Error& e) {
        throw UsageError(e.what());
      }
    }
    return cfg;
  }

  gpart::GraphFormat graph_format() const {
    std::string f = format;
    for (const auto& [key, value] : settings()) {
      if (key == "format") f = value;
    }
    try {
      return gpart::parse_graph_format(f);
    } catch (const gpart::Error& e) {
      throw UsageError(e.what());
    }
  }
};

gpart::Graph load_input_graph(const std::string& path, gpart::GraphFormat format) {
  try {
    return gpart::load_graph(path, format);
  } catch (const gpart::Error& e) {
    throw InputError(e.what());
  }
}

void print_metrics(const gpart::Graph& g, const gpart::Partition& part) {
  const gpart::Metrics m = gpart::cut_metrics(g, part);
  std::printf("nodes=%zu\nedges=%zu\ncut_percent=%.2f\nimbalance_percent=%.2f\ncut_weight=%.10g\n", g.n(),
              g.edge_count(), m.cut_percent, m.imbalance_percent, m.cut_weight);
  std::printf("size0=%zu\nsize1=%zu\n", part.count(0), part.count(1));
}

int cmd_generate(const CommonOptions& opts) {
  const gpart::BenchConfig cfg = opts.bench_config();
  if (opts.out.empty()) throw UsageError("generate needs --out DIR");
  std::filesystem::create_directories(cfg.out_dir);
  std::size_t written = 0;
  for (std::size_t n : cfg.sizes) {
    for (std::size_t k = 0; k < cfg.graphs_per_size; ++k) {
      const std::uint64_t seed = cfg.seed + k;
      const std::string stem = std::string(gpart::to_string(cfg.family)) + "_n" + std::to_string(n) + "_seed" +
                               std::to_string(seed);
      gpart::Graph g;
      std::optional<gpart::Partition> planted;
      try {
        switch (cfg.family) {
          case gpart::GraphFamily::er:
            g = gpart::generate_er(n, cfg.er_p, seed);
            break;
          case gpart::GraphFamily::planted: {
            auto [graph, part] = gpart::generate_planted(n, cfg.p_in, cfg.p_out, seed);
            g = std::move(graph);
            planted = std::move(part);
            break;
          }
          case gpart::GraphFamily::twin_cliques: {
            auto [graph, part] = gpart::generate_twin_cliques(n);
            g = std::move(graph);
            planted = std::move(part);
            break;
          }
        }
      } catch (const gpart::InvalidArgument& e) {
        throw UsageError(e.what());
      }
      gpart::save_edge_list(cfg.out_dir / (stem + ".txt"), g);
      if (planted) gpart::save_partition(cfg.out_dir / (stem + ".part"), *planted);
      std::printf("%s nodes=%zu edges=%zu connected=%d\n", (cfg.out_dir / (stem + ".txt")).string().c_str(), g.n(),
                  g.edge_count(), gpart::is_connected(g) ? 1 : 0);
      ++written;
    }
  }
  return written > 0 ? 0 : kExitUsage;
}

int cmd_partition(const CommonOptions& opts, const std::string& graph_path) {
  const gpart::BenchConfig cfg = opts.bench_config();
  gpart::Method method = gpart::Method::gnn;
  for (const auto& [key, value] : opts.settings()) {
    if (key != "method" && key != "methods") continue;
    if (cfg.methods.size() != 1) throw UsageError("partition takes exactly one --method");
    method = cfg.methods.front();
  }
  const gpart::Graph g = load_input_graph(graph_path, opts.graph_format());
  if (g.edge_count() == 0) throw InputError("graph has no edges");

  const auto start = std::chrono::steady_clock::now();
  gpart::Partition part;
  std::optional<gpart::TrainResult> trained;
  const gpart::MethodSettings& s = cfg.settings;
  if (method == gpart::Method::gnn) {
    gpart::ModelConfig mcfg = s.model;
    mcfg.seed = cfg.seed;
    trained = gpart::train(g, mcfg, s.loss, s.train);
    part = gpart::decode(trained->assignment, s.decoder);
  } else {
    try {
      part = gpart::run_method(g, method, s, cfg.seed);
    } catch (const gpart::DisconnectedGraphError& e) {
      throw InputError(e.what());
    }
  }
  const double ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();

  std::printf("method=%s\n", std::string(gpart::to_string(method)).c_str());
  print_metrics(g, part);
  if (trained) {
    const double expected = gpart::expected_cut_cost(g, trained->assignment);
    std::printf("best_epoch=%zu\nbest_loss=%.10g\nepochs_run=%zu\nexpected_cut=%.10g\nmarkov_bound=%.10g\n",
                trained->report.best_epoch, trained->report.best_loss, trained->report.loss_curve.size(), expected,
                gpart::markov_bound(expected, s.loss.z));
  }
  std::printf("runtime_ms=%.3f\n", ms);
  if (!opts.out.empty()) gpart::save_partition(opts.out, part);
  return 0;
}

int cmd_eval(const CommonOptions& opts, const std::string& graph_path, const std::string& partition_path) {
  const gpart::Graph g = load_input_graph(graph_path, opts.graph_format());
  gpart::Partition part;
  try {
    part = gpart::load_partition(partition_path);
  } catch (const gpart::Error& e) {
    throw InputError(e.what());
  }
  if (part.size() != g.n()) {
    throw InputError("partition has " + std::to_string(part.size()) + " labels, graph has " + std::to_string(g.n()) +
                     " nodes");
  }
  if (g.edge_count() == 0) throw InputError("graph has no edges");
  print_metrics(g, part);
  return 0;
}

int cmd_bench(const CommonOptions& opts) {
  gpart::BenchConfig cfg = opts.bench_config();
  try {
    cfg.validate();
  } catch (const gpart::Error& e) {
    throw UsageError(e.what());
  }
  const gpart::BenchResult result = gpart::run_benchmark(cfg);
  gpart::write_bench_outputs(cfg, result);
  std::printf("%-7s %-9s %12s %14s %6s\n", "nodes", "method", "cut %", "imbalance %", "runs");
  for (const gpart::SummaryCell& c : result.summary) {
    std::printf("%-7zu %-9s %12.2f %14.2f %6zu\n", c.nodes, std::string(gpart::to_string(c.method)).c_str(),
                c.mean_cut_percent, c.mean_imbalance_percent, c.runs);
  }
  std::printf("wrote %s\n", (cfg.out_dir / "results.csv").string().c_str());
  std::size_t failures = 0;
  for (const gpart::SummaryCell& c : result.summary) failures += c.failures;
  if (failures > 0) std::fprintf(stderr, "warning: %zu runs failed (see status column)\n", failures);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graph bisection with an unsupervised GNN, Kernighan-Lin and spectral baselines"};
  app.require_subcommand(1);

  CommonOptions gen_opts, part_opts, eval_opts, bench_opts;
  std::string part_graph, eval_graph, eval_partition;

  auto* gen = app.add_subcommand("generate", "write random graphs of a family to files");
  gen_opts.attach(gen);

  auto* part = app.add_subcommand("partition", "partition one graph; prints key=value metrics");
  part_opts.attach(part);
  part->add_option("graph", part_graph, "graph file")->required();

  auto* eval = app.add_subcommand("eval", "metrics of a partition file on a graph");
  eval_opts.attach(eval);
  eval->add_option("graph", eval_graph, "graph file")->required();
  eval->add_option("partition", eval_partition, "partition file (one 0/1 label per line)")->required();

  auto* bench = app.add_subcommand("bench", "run the benchmark sweep; writes CSV and SVG");
  bench_opts.attach(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*gen) return cmd_generate(gen_opts);
    if (*part) return cmd_partition(part_opts, part_graph);
    if (*eval) return cmd_eval(eval_opts, eval_graph, eval_partition);
    if (*bench) return cmd_bench(bench_opts);
  } catch (const UsageError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return kExitUsage;
  } catch (const InputError& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return kExitInput;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitUsage;
}
