#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "gpart/bench.hpp"
#include "gpart/settings.hpp"
#include "test_util.hpp"

namespace gpart {
namespace {

BenchRow row(std::size_t nodes, Method m, double cut, double imb) {
  BenchRow r;
  r.nodes = nodes;
  r.method = m;
  r.graph_seed = 17;
  r.run_seed = 2;
  r.cut_percent = cut;
  r.imbalance_percent = imb;
  r.cut_weight = 3.0;
  return r;
}

BenchConfig small_config() {
  BenchConfig cfg;
  cfg.sizes = {20, 30};
  cfg.graphs_per_size = 2;
  cfg.seeds_per_graph = 2;
  cfg.settings.train.epochs = 60;
  return cfg;
}

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t count = 0;
  for (std::size_t pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++count;
  return count;
}

/// Minimal XML checker: balanced tags, quoted attributes, known entities.
bool well_formed_xml(const std::string& s, std::string& why) {
  std::vector<std::string> stack;
  std::size_t i = 0;
  bool root_seen = false;
  while (i < s.size()) {
    if (s[i] == '&') {
      const std::size_t semi = s.find(';', i);
      const std::string ent = semi == std::string::npos ? "" : s.substr(i, semi - i + 1);
      if (ent != "&amp;" && ent != "&lt;" && ent != "&gt;" && ent != "&quot;" && ent != "&apos;") {
        why = "bad entity at " + std::to_string(i);
        return false;
      }
      i = semi + 1;
      continue;
    }
    if (s[i] != '<') {
      if (stack.empty() && !std::isspace(static_cast<unsigned char>(s[i]))) {
        why = "text outside root";
        return false;
      }
      ++i;
      continue;
    }
    const std::size_t close = s.find('>', i);
    if (close == std::string::npos) {
      why = "unterminated tag";
      return false;
    }
    std::string tag = s.substr(i + 1, close - i - 1);
    i = close + 1;
    if (tag.starts_with("?")) {
      if (!tag.ends_with("?")) {
        why = "bad declaration";
        return false;
      }
      continue;
    }
    if (tag.starts_with("/")) {
      if (stack.empty() || stack.back() != tag.substr(1)) {
        why = "mismatched </" + tag.substr(1) + ">";
        return false;
      }
      stack.pop_back();
      continue;
    }
    const bool self_closing = tag.ends_with("/");
    if (self_closing) tag.pop_back();
    const std::string name = tag.substr(0, tag.find_first_of(" \t\n"));
    if (name.empty()) {
      why = "empty tag name";
      return false;
    }
    static const std::regex attrs(R"(^[A-Za-z_:][-\w:.]*(\s+[A-Za-z_:][-\w:.]*="[^"<]*")*\s*$)");
    if (!std::regex_match(tag, attrs)) {
      why = "bad attributes in <" + tag + ">";
      return false;
    }
    if (stack.empty()) {
      if (root_seen) {
        why = "second root element";
        return false;
      }
      root_seen = true;
    }
    if (!self_closing) stack.push_back(name);
  }
  if (!stack.empty()) {
    why = "unclosed <" + stack.back() + ">";
    return false;
  }
  return root_seen;
}

TEST(Csv, OneRowIsTwoLines) {
  const std::string csv = format_csv({row(50, Method::kl, 33.5, 0.0)});
  EXPECT_EQ(csv,
            "nodes,method,graph_seed,run_seed,cut_percent,imbalance_percent,cut_weight,runtime_ms,status\n"
            "50,kl,17,2,33.50,0.00,3,0.000,ok\n");
  EXPECT_EQ(count_of(csv, "\n"), 2u);
}

TEST(Csv, EmptyRowsRejected) { EXPECT_THROW(format_csv({}), InvalidArgument); }

TEST(Csv, CommentsPrecedeHeader) {
  const std::string csv = format_csv({row(50, Method::gnn, 10.0, 2.0)}, {"family=er er_p=0.1"});
  EXPECT_TRUE(csv.starts_with("# family=er er_p=0.1\nnodes,method"));
}

TEST(Csv, RoundTrip) {
  std::vector<BenchRow> rows = {row(50, Method::gnn, 12.25, 4.0), row(50, Method::kl, 33.5, 0.0),
                                row(100, Method::spectral, 100.0 / 3.0, 38.0)};
  rows[1].status = "error: bad, input";
  rows[2].cut_weight = 0.1 + 0.2;
  std::istringstream in(format_csv(rows, {"comment"}));
  const std::vector<BenchRow> back = parse_csv(in);
  ASSERT_EQ(back.size(), rows.size());
  EXPECT_EQ(back[0], rows[0]);
  EXPECT_EQ(back[2].cut_weight, rows[2].cut_weight);
  // percentages are rendered with two decimals; round-trip is exact at that precision
  EXPECT_EQ(back[2].cut_percent, 33.33);
  EXPECT_EQ(back[1].status, "error: bad; input");
  EXPECT_EQ(format_csv(back, {"comment"}), format_csv(rows, {"comment"}));
}

TEST(Csv, ParseErrors) {
  std::istringstream bad_header("nodes,method\n");
  EXPECT_THROW(parse_csv(bad_header), ParseError);
  std::istringstream short_row(std::string(kCsvHeader) + "\n50,kl,1\n");
  EXPECT_THROW(parse_csv(short_row), ParseError);
}

TEST(Summary, MeansAreExactArithmeticMeans) {
  std::vector<BenchRow> rows;
  const double cuts[] = {12.34, 56.78, 9.01};
  const double imbs[] = {2.0, 4.0, 6.5};
  for (int k = 0; k < 3; ++k) rows.push_back(row(50, Method::gnn, cuts[k], imbs[k]));
  rows.push_back(row(50, Method::kl, 30.0, 0.0));
  BenchRow failed = row(50, Method::kl, std::nan(""), std::nan(""));
  failed.status = "error: x";
  rows.push_back(failed);
  const auto cells = summarize(rows);
  ASSERT_EQ(cells.size(), 2u);
  EXPECT_EQ(cells[0].mean_cut_percent, (12.34 + 56.78 + 9.01) / 3.0);
  EXPECT_EQ(cells[0].mean_imbalance_percent, (2.0 + 4.0 + 6.5) / 3.0);
  EXPECT_EQ(cells[0].runs, 3u);
  EXPECT_EQ(cells[1].runs, 1u);
  EXPECT_EQ(cells[1].failures, 1u);
  EXPECT_EQ(cells[1].mean_cut_percent, 30.0);
}

TEST(Svg, StructureAndLegend) {
  std::vector<SummaryCell> cells;
  for (Method m : {Method::gnn, Method::kl, Method::spectral}) {
    for (std::size_t n = 50; n <= 500; n += 50) {
      cells.push_back({n, m, 10.0 + static_cast<double>(n) / 50.0, m == Method::kl ? 0.0 : 5.0, 1.0, 3, 0});
    }
  }
  const std::string svg = format_svg(cells);
  EXPECT_EQ(count_of(svg, "<polyline"), 6u);
  const std::regex poly(R"RE(<polyline class="series" data-method="(\w+)"[^>]*points="([^"]*)")RE");
  std::size_t checked = 0;
  for (auto it = std::sregex_iterator(svg.begin(), svg.end(), poly); it != std::sregex_iterator(); ++it) {
    EXPECT_EQ(count_of((*it)[2].str(), ",") , 10u);
    ++checked;
  }
  EXPECT_EQ(checked, 6u);
  EXPECT_EQ(count_of(svg, "class=\"legend-entry\""), 6u);  // 3 per chart
  EXPECT_NE(svg.find("Nodes"), std::string::npos);
  EXPECT_NE(svg.find("Cut %"), std::string::npos);
  EXPECT_NE(svg.find("Imbalance %"), std::string::npos);
  std::string why;
  EXPECT_TRUE(well_formed_xml(svg, why)) << why;
}

TEST(Svg, SingleMethodLegend) {
  const std::string svg = format_svg({{50, Method::kl, 30.0, 0.0, 15.0, 1, 0}});
  EXPECT_EQ(count_of(svg, "class=\"legend-entry\""), 2u);
  EXPECT_EQ(count_of(svg, "data-method=\"kl\""), 2u);
  std::string why;
  EXPECT_TRUE(well_formed_xml(svg, why)) << why;
  EXPECT_THROW(format_svg({}), InvalidArgument);
}

TEST(Svg, CheckerRejectsBrokenXml) {
  std::string why;
  EXPECT_FALSE(well_formed_xml("<svg><g></svg>", why));
  EXPECT_FALSE(well_formed_xml("<svg a=1/>", why));
  EXPECT_FALSE(well_formed_xml("<svg>&nbsp;</svg>", why));
  EXPECT_TRUE(well_formed_xml("<?xml version=\"1.0\"?>\n<svg><g x=\"1\"/></svg>\n", why));
}

TEST(RunBenchmark, KlImbalanceIsZeroOnEvenSizes) {
  BenchConfig cfg;
  cfg.methods = {Method::kl};
  cfg.sizes = {50, 100, 150, 200};
  cfg.graphs_per_size = 2;
  cfg.seeds_per_graph = 2;
  const BenchResult r = run_benchmark(cfg);
  ASSERT_EQ(r.rows.size(), 16u);
  for (const SummaryCell& c : r.summary) EXPECT_EQ(detail::fixed(c.mean_imbalance_percent, 2), "0.00");
}

TEST(RunBenchmark, TwinCliquesBaselinesCutTheBridge) {
  BenchConfig cfg;
  cfg.family = GraphFamily::twin_cliques;
  cfg.sizes = {8};
  cfg.methods = {Method::kl, Method::spectral};
  const BenchResult r = run_benchmark(cfg);
  ASSERT_EQ(r.summary.size(), 2u);
  for (const SummaryCell& c : r.summary) EXPECT_EQ(c.mean_cut_weight, 1.0) << to_string(c.method);
}

TEST(RunBenchmark, RowOrderAndCounts) {
  const BenchConfig cfg = small_config();
  const BenchResult r = run_benchmark(cfg);
  // per size: gnn 2x2, kl 2x2, spectral 2x1
  ASSERT_EQ(r.rows.size(), 2u * (4 + 4 + 2));
  EXPECT_EQ(r.rows.front().nodes, 20u);
  EXPECT_EQ(r.rows.front().method, Method::gnn);
  EXPECT_EQ(r.rows[4].method, Method::kl);
  EXPECT_EQ(r.rows[8].method, Method::spectral);
  EXPECT_EQ(r.rows[8].run_seed, 0u);
  EXPECT_EQ(r.rows[10].nodes, 30u);
  for (const BenchRow& row : r.rows) {
    EXPECT_EQ(row.status, "ok");
    EXPECT_EQ(row.runtime_ms, 0.0);
  }
  EXPECT_EQ(r.summary.size(), 6u);
}

TEST(RunBenchmark, CsvIsByteIdenticalAcrossRuns) {
  const BenchConfig cfg = small_config();
  const std::string a = format_csv(run_benchmark(cfg).rows, describe(cfg));
  const std::string b = format_csv(run_benchmark(cfg).rows, describe(cfg));
  EXPECT_EQ(a, b);
}

TEST(RunBenchmark, FailuresAreRecordedNotThrown) {
  BenchConfig cfg = small_config();
  cfg.methods = {Method::spectral};
  cfg.settings.spectral.max_iter = 1;
  const BenchResult r = run_benchmark(cfg);
  for (const BenchRow& row : r.rows) EXPECT_TRUE(row.status.starts_with("error: "));
  EXPECT_EQ(r.summary.front().failures, 2u);
  EXPECT_TRUE(std::isnan(r.summary.front().mean_cut_percent));
}

TEST(RunBenchmark, GraphsAreConnected) {
  BenchConfig cfg;
  cfg.er_p = 0.05;
  cfg.graphs_per_size = 5;
  for (const BenchGraph& bg : bench_graphs(cfg, 40)) EXPECT_TRUE(is_connected(bg.graph));
}

TEST(RunBenchmark, WritesOutputs) {
  BenchConfig cfg = small_config();
  cfg.methods = {Method::kl, Method::spectral};
  cfg.out_dir = test::temp_path("bench_outputs");
  write_bench_outputs(cfg, run_benchmark(cfg));
  for (const char* name : {"results.csv", "summary.csv", "figures.svg"}) {
    EXPECT_TRUE(std::filesystem::exists(cfg.out_dir / name)) << name;
  }
  std::ifstream in(cfg.out_dir / "results.csv");
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "# family=er er_p=0.1 graphs_per_size=2 seeds_per_graph=2 seed=1");
}

TEST(Settings, ParseAndApply) {
  std::istringstream in("# sweep\nsizes = 10, 20\ngraphs_per_size=4\nmethod = kl,spectral  # trailing\nxi=0.3\n");
  const auto settings = parse_settings(in);
  ASSERT_EQ(settings.size(), 4u);
  EXPECT_EQ(settings[1].first, "graphs-per-size");
  BenchConfig cfg;
  for (const auto& [k, v] : settings) EXPECT_TRUE(apply_setting(cfg, k, v));
  EXPECT_EQ(cfg.sizes, (std::vector<std::size_t>{10, 20}));
  EXPECT_EQ(cfg.graphs_per_size, 4u);
  EXPECT_EQ(cfg.methods, (std::vector<Method>{Method::kl, Method::spectral}));
  EXPECT_EQ(cfg.settings.loss.xi, 0.3);
  EXPECT_FALSE(apply_setting(cfg, "format", "metis"));
  EXPECT_THROW(apply_setting(cfg, "epochs", "many"), InvalidArgument);
  EXPECT_THROW(apply_setting(cfg, "method", "greedy"), InvalidArgument);
  std::istringstream bad("sizes 10\n");
  EXPECT_THROW(parse_settings(bad), ParseError);
}

TEST(Settings, LaterSettingsOverride) {
  BenchConfig cfg;
  apply_setting(cfg, "epochs", "10");
  apply_setting(cfg, "epochs", "20");
  EXPECT_EQ(cfg.settings.train.epochs, 20u);
}

TEST(BenchConfig, Validation) {
  BenchConfig cfg;
  cfg.sizes.clear();
  EXPECT_THROW(run_benchmark(cfg), InvalidArgument);
  cfg = BenchConfig{};
  cfg.graphs_per_size = 0;
  EXPECT_THROW(run_benchmark(cfg), InvalidArgument);
  cfg = BenchConfig{};
  cfg.family = GraphFamily::planted;
  cfg.sizes = {51};
  EXPECT_THROW(run_benchmark(cfg), InvalidArgument);
}

}  // namespace
}  // namespace gpart
