#pragma once

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <istream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gpart/errors.hpp"
#include "gpart/generators.hpp"
#include "gpart/graph.hpp"
#include "gpart/graph_io.hpp"
#include "gpart/kernighan_lin.hpp"
#include "gpart/loss.hpp"
#include "gpart/spectral.hpp"
#include "gpart/train.hpp"

namespace gpart {

enum class Method { gnn, kl, spectral };

inline Method parse_method(std::string_view s) {
  if (s == "gnn") return Method::gnn;
  if (s == "kl") return Method::kl;
  if (s == "spectral") return Method::spectral;
  throw InvalidArgument("unknown method '" + std::string(s) + "' (expected gnn, kl or spectral)");
}

inline std::string_view to_string(Method m) {
  switch (m) {
    case Method::gnn:
      return "gnn";
    case Method::kl:
      return "kl";
    case Method::spectral:
      return "spectral";
  }
  return "?";
}

enum class GraphFamily { er, planted, twin_cliques };

inline GraphFamily parse_family(std::string_view s) {
  if (s == "er") return GraphFamily::er;
  if (s == "planted") return GraphFamily::planted;
  if (s == "twin-cliques") return GraphFamily::twin_cliques;
  throw InvalidArgument("unknown graph family '" + std::string(s) + "' (expected er, planted or twin-cliques)");
}

inline std::string_view to_string(GraphFamily f) {
  switch (f) {
    case GraphFamily::er:
      return "er";
    case GraphFamily::planted:
      return "planted";
    case GraphFamily::twin_cliques:
      return "twin-cliques";
  }
  return "?";
}

/// Settings shared by every partitioning method.
struct MethodSettings {
  LossConfig loss;
  ModelConfig model;
  TrainConfig train;
  Decoder decoder = Decoder::argmax;
  SpectralConfig spectral;
  KLConfig kl;
};

struct BenchConfig {
  std::vector<std::size_t> sizes{50, 100, 150, 200, 250, 300, 350, 400, 450, 500};
  std::size_t graphs_per_size = 5;
  std::size_t seeds_per_graph = 3;
  GraphFamily family = GraphFamily::er;
  double er_p = 0.1;
  double p_in = 0.5;
  double p_out = 0.05;
  std::vector<Method> methods{Method::gnn, Method::kl, Method::spectral};
  MethodSettings settings;
  std::uint64_t seed = 1;
  /// Measured runtimes make the CSV nondeterministic; off by default.
  bool record_runtime = false;
  std::filesystem::path out_dir = "bench_out";

  void validate() const {
    if (sizes.empty()) throw InvalidArgument("sizes must not be empty");
    if (graphs_per_size < 1) throw InvalidArgument("graphs_per_size must be at least 1");
    if (seeds_per_graph < 1) throw InvalidArgument("seeds_per_graph must be at least 1");
    if (methods.empty()) throw InvalidArgument("at least one method is required");
    for (std::size_t s : sizes) {
      if (s < 2) throw InvalidArgument("graph sizes must be at least 2");
      if (family != GraphFamily::er && s % 2 != 0) throw InvalidArgument("planted families need even sizes");
      if (family == GraphFamily::twin_cliques && s < 4) throw InvalidArgument("twin cliques need n >= 4");
    }
    settings.loss.validate();
    settings.model.validate();
    settings.train.validate();
    settings.kl.validate();
  }
};

struct BenchRow {
  std::size_t nodes = 0;
  Method method = Method::gnn;
  std::uint64_t graph_seed = 0;
  std::uint64_t run_seed = 0;
  double cut_percent = 0.0;
  double imbalance_percent = 0.0;
  double cut_weight = 0.0;
  double runtime_ms = 0.0;
  std::string status = "ok";

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct SummaryCell {
  std::size_t nodes = 0;
  Method method = Method::gnn;
  double mean_cut_percent = 0.0;
  double mean_imbalance_percent = 0.0;
  double mean_cut_weight = 0.0;
  std::size_t runs = 0;
  std::size_t failures = 0;
};

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<SummaryCell> summary;
};

/// Runs one method on one graph. GNN and KL use `run_seed`; spectral ignores it.
inline Partition run_method(const Graph& g, Method method, const MethodSettings& s, std::uint64_t run_seed) {
  switch (method) {
    case Method::gnn: {
      ModelConfig mcfg = s.model;
      mcfg.seed = run_seed;
      return decode(train(g, mcfg, s.loss, s.train).assignment, s.decoder);
    }
    case Method::kl: {
      KLConfig kcfg = s.kl;
      kcfg.seed = run_seed;
      return kernighan_lin(g, kcfg);
    }
    case Method::spectral:
      return spectral_bisect(g, s.spectral);
  }
  throw InvalidArgument("unknown method");
}

struct BenchGraph {
  Graph graph;
  std::uint64_t seed = 0;
};

/// Generates the graphs of one size. ER and planted graphs that come out
/// disconnected are regenerated with the next seed.
inline std::vector<BenchGraph> bench_graphs(const BenchConfig& cfg, std::size_t n) {
  std::vector<BenchGraph> out;
  std::uint64_t next = cfg.seed * 1'000'003ULL + n * 1'000ULL;
  while (out.size() < cfg.graphs_per_size) {
    const std::uint64_t seed = next++;
    Graph g;
    switch (cfg.family) {
      case GraphFamily::er:
        g = generate_er(n, cfg.er_p, seed);
        break;
      case GraphFamily::planted:
        g = generate_planted(n, cfg.p_in, cfg.p_out, seed).first;
        break;
      case GraphFamily::twin_cliques:
        out.push_back({generate_twin_cliques(n).first, 0});
        continue;
    }
    if (g.edge_count() == 0 || !is_connected(g)) {
      if (next - seed > 10'000) throw Error("could not generate a connected graph of size " + std::to_string(n));
      continue;
    }
    out.push_back({std::move(g), seed});
  }
  return out;
}

inline std::vector<SummaryCell> summarize(const std::vector<BenchRow>& rows) {
  std::vector<SummaryCell> cells;
  for (const BenchRow& r : rows) {
    auto it = std::find_if(cells.begin(), cells.end(),
                           [&](const SummaryCell& c) { return c.nodes == r.nodes && c.method == r.method; });
    if (it == cells.end()) {
      cells.push_back({r.nodes, r.method});
      it = cells.end() - 1;
    }
    if (r.status != "ok") {
      ++it->failures;
      continue;
    }
    it->mean_cut_percent += r.cut_percent;
    it->mean_imbalance_percent += r.imbalance_percent;
    it->mean_cut_weight += r.cut_weight;
    ++it->runs;
  }
  for (SummaryCell& c : cells) {
    if (c.runs == 0) {
      c.mean_cut_percent = c.mean_imbalance_percent = c.mean_cut_weight = std::nan("");
      continue;
    }
    const auto k = static_cast<double>(c.runs);
    c.mean_cut_percent /= k;
    c.mean_imbalance_percent /= k;
    c.mean_cut_weight /= k;
  }
  return cells;
}

/// Rows are ordered by size, then method (config order), then graph, then run
/// seed. Failures are recorded in the row's status and do not stop the sweep.
inline BenchResult run_benchmark(const BenchConfig& cfg) {
  cfg.validate();
  BenchResult result;
  for (std::size_t n : cfg.sizes) {
    const std::vector<BenchGraph> graphs = bench_graphs(cfg, n);
    for (Method method : cfg.methods) {
      const std::size_t runs = method == Method::spectral ? 1 : cfg.seeds_per_graph;
      for (const BenchGraph& bg : graphs) {
        for (std::size_t r = 0; r < runs; ++r) {
          BenchRow row;
          row.nodes = n;
          row.method = method;
          row.graph_seed = bg.seed;
          row.run_seed = method == Method::spectral ? 0 : r + 1;
          const auto start = std::chrono::steady_clock::now();
          try {
            const Partition part = run_method(bg.graph, method, cfg.settings, row.run_seed);
            const Metrics m = cut_metrics(bg.graph, part);
            row.cut_percent = m.cut_percent;
            row.imbalance_percent = m.imbalance_percent;
            row.cut_weight = m.cut_weight;
          } catch (const std::exception& e) {
            row.status = std::string("error: ") + e.what();
            row.cut_percent = row.imbalance_percent = row.cut_weight = std::nan("");
          }
          if (cfg.record_runtime) {
            row.runtime_ms =
                std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
          }
          result.rows.push_back(std::move(row));
        }
      }
    }
  }
  result.summary = summarize(result.rows);
  return result;
}

// ---------------------------------------------------------------------------
// CSV

inline constexpr std::string_view kCsvHeader =
    "nodes,method,graph_seed,run_seed,cut_percent,imbalance_percent,cut_weight,runtime_ms,status";

namespace detail {

inline std::string fixed(double x, int decimals) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", decimals, x);
  return buf;
}

/// Shortest representation that parses back to the same double.
inline std::string shortest(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

inline std::string csv_safe(std::string s) {
  std::replace(s.begin(), s.end(), ',', ';');
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

inline std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const std::size_t pos = s.find(sep, start);
    out.emplace_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace detail

/// Serializes rows; each entry of `comments` becomes a leading "# " line.
inline std::string format_csv(const std::vector<BenchRow>& rows, const std::vector<std::string>& comments = {}) {
  if (rows.empty()) throw InvalidArgument("no rows to write");
  std::string out;
  for (const std::string& c : comments) out += "# " + c + "\n";
  out += kCsvHeader;
  out += '\n';
  for (const BenchRow& r : rows) {
    out += std::to_string(r.nodes) + ',' + std::string(to_string(r.method)) + ',' + std::to_string(r.graph_seed) +
           ',' + std::to_string(r.run_seed) + ',' + detail::fixed(r.cut_percent, 2) + ',' +
           detail::fixed(r.imbalance_percent, 2) + ',' + detail::shortest(r.cut_weight) + ',' +
           detail::fixed(r.runtime_ms, 3) + ',' + detail::csv_safe(r.status) + '\n';
  }
  return out;
}

inline std::vector<BenchRow> parse_csv(std::istream& in) {
  std::vector<BenchRow> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != kCsvHeader) throw ParseError(lineno, "unexpected CSV header");
      header_seen = true;
      continue;
    }
    const auto f = detail::split(line, ',');
    if (f.size() != 9) throw ParseError(lineno, "expected 9 fields, got " + std::to_string(f.size()));
    BenchRow r;
    r.nodes = static_cast<std::size_t>(detail::parse_int(f[0], lineno));
    r.method = parse_method(f[1]);
    r.graph_seed = std::stoull(f[2]);
    r.run_seed = std::stoull(f[3]);
    auto num = [&](const std::string& s) { return s == "nan" ? std::nan("") : detail::parse_double(s, lineno); };
    r.cut_percent = num(f[4]);
    r.imbalance_percent = num(f[5]);
    r.cut_weight = num(f[6]);
    r.runtime_ms = num(f[7]);
    r.status = f[8];
    rows.push_back(std::move(r));
  }
  if (!header_seen) throw ParseError(lineno, "missing CSV header");
  return rows;
}

inline std::string format_summary_csv(const std::vector<SummaryCell>& cells) {
  std::string out = "nodes,method,mean_cut_percent,mean_imbalance_percent,mean_cut_weight,runs,failures\n";
  for (const SummaryCell& c : cells) {
    out += std::to_string(c.nodes) + ',' + std::string(to_string(c.method)) + ',' +
           detail::fixed(c.mean_cut_percent, 2) + ',' + detail::fixed(c.mean_imbalance_percent, 2) + ',' +
           detail::fixed(c.mean_cut_weight, 2) + ',' + std::to_string(c.runs) + ',' + std::to_string(c.failures) +
           '\n';
  }
  return out;
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path.string());
  out << text;
  if (!out) throw Error("write failed: " + path.string());
}

inline void emit_csv(const std::filesystem::path& path, const std::vector<BenchRow>& rows,
                     const std::vector<std::string>& comments = {}) {
  write_text(path, format_csv(rows, comments));
}

// ---------------------------------------------------------------------------
// SVG

namespace detail {

inline std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&':
        out += "&amp;";
        break;
      case '<':
        out += "&lt;";
        break;
      case '>':
        out += "&gt;";
        break;
      case '"':
        out += "&quot;";
        break;
      default:
        out += c;
    }
  }
  return out;
}

inline double nice_ceiling(double x) {
  if (!(x > 0.0)) return 1.0;
  const double mag = std::pow(10.0, std::floor(std::log10(x)));
  for (double step : {1.0, 2.0, 2.5, 5.0, 10.0}) {
    if (step * mag >= x) return step * mag;
  }
  return 10.0 * mag;
}

inline std::string_view method_color(Method m) {
  switch (m) {
    case Method::gnn:
      return "#1f77b4";
    case Method::kl:
      return "#ff7f0e";
    case Method::spectral:
      return "#2ca02c";
  }
  return "#000000";
}

inline void svg_chart(std::string& out, const std::vector<SummaryCell>& cells, bool imbalance, double x0, double y0,
                      std::string_view title) {
  const double width = 460, height = 340;
  const double left = 60, right = 20, top = 40, bottom = 50;
  const double pw = width - left - right, ph = height - top - bottom;

  std::vector<Method> methods;
  std::size_t min_n = SIZE_MAX, max_n = 0;
  double max_y = 0.0;
  for (const SummaryCell& c : cells) {
    if (std::find(methods.begin(), methods.end(), c.method) == methods.end()) methods.push_back(c.method);
    min_n = std::min(min_n, c.nodes);
    max_n = std::max(max_n, c.nodes);
    const double y = imbalance ? c.mean_imbalance_percent : c.mean_cut_percent;
    if (std::isfinite(y)) max_y = std::max(max_y, y);
  }
  const double y_top = nice_ceiling(max_y);
  const double x_span = max_n > min_n ? static_cast<double>(max_n - min_n) : 1.0;
  auto px = [&](std::size_t n) {
    return x0 + left + (max_n > min_n ? pw * static_cast<double>(n - min_n) / x_span : pw / 2);
  };
  auto py = [&](double y) { return y0 + top + ph * (1.0 - y / y_top); };
  auto num = [](double v) { return fixed(v, 1); };

  out += "<g>\n";
  out += "<text x=\"" + num(x0 + width / 2) + "\" y=\"" + num(y0 + 22) +
         "\" text-anchor=\"middle\" font-size=\"15\">" + xml_escape(title) + "</text>\n";
  out += "<line x1=\"" + num(x0 + left) + "\" y1=\"" + num(y0 + top + ph) + "\" x2=\"" + num(x0 + left + pw) +
         "\" y2=\"" + num(y0 + top + ph) + "\" stroke=\"black\"/>\n";
  out += "<line x1=\"" + num(x0 + left) + "\" y1=\"" + num(y0 + top) + "\" x2=\"" + num(x0 + left) + "\" y2=\"" +
         num(y0 + top + ph) + "\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 5; ++t) {
    const double v = y_top * t / 5.0;
    out += "<text x=\"" + num(x0 + left - 6) + "\" y=\"" + num(py(v) + 4) +
           "\" text-anchor=\"end\" font-size=\"11\">" + fixed(v, 1) + "</text>\n";
  }
  std::vector<std::size_t> xs;
  for (const SummaryCell& c : cells) {
    if (std::find(xs.begin(), xs.end(), c.nodes) == xs.end()) xs.push_back(c.nodes);
  }
  for (std::size_t n : xs) {
    out += "<text x=\"" + num(px(n)) + "\" y=\"" + num(y0 + top + ph + 16) +
           "\" text-anchor=\"middle\" font-size=\"11\">" + std::to_string(n) + "</text>\n";
  }
  out += "<text x=\"" + num(x0 + left + pw / 2) + "\" y=\"" + num(y0 + height - 8) +
         "\" text-anchor=\"middle\" font-size=\"12\">Nodes</text>\n";
  out += "<text x=\"" + num(x0 + 16) + "\" y=\"" + num(y0 + top + ph / 2) +
         "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90 " + num(x0 + 16) + " " +
         num(y0 + top + ph / 2) + ")\">" + (imbalance ? "Imbalance %" : "Cut %") + "</text>\n";

  for (Method m : methods) {
    std::string points;
    for (const SummaryCell& c : cells) {
      if (c.method != m) continue;
      const double y = imbalance ? c.mean_imbalance_percent : c.mean_cut_percent;
      if (!std::isfinite(y)) continue;
      if (!points.empty()) points += ' ';
      points += num(px(c.nodes)) + "," + num(py(y));
    }
    out += "<polyline class=\"series\" data-method=\"" + std::string(to_string(m)) + "\" fill=\"none\" stroke=\"" +
           std::string(method_color(m)) + "\" stroke-width=\"2\" points=\"" + points + "\"/>\n";
  }

  double ly = y0 + top + 6;
  for (Method m : methods) {
    const double lx = x0 + left + pw - 110;
    out += "<g class=\"legend-entry\">";
    out += "<line x1=\"" + num(lx) + "\" y1=\"" + num(ly) + "\" x2=\"" + num(lx + 24) + "\" y2=\"" + num(ly) +
           "\" stroke=\"" + std::string(method_color(m)) + "\" stroke-width=\"2\"/>";
    out += "<text x=\"" + num(lx + 30) + "\" y=\"" + num(ly + 4) + "\" font-size=\"11\">" +
           std::string(to_string(m)) + "</text>";
    out += "</g>\n";
    ly += 16;
  }
  out += "</g>\n";
}

}  // namespace detail

/// Two line charts side by side: mean cut % and mean imbalance % against
/// node count, one polyline per method.
inline std::string format_svg(const std::vector<SummaryCell>& cells) {
  if (cells.empty()) throw InvalidArgument("summary is empty");
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"940\" height=\"360\" viewBox=\"0 0 940 360\">\n";
  out += "<rect width=\"940\" height=\"360\" fill=\"white\"/>\n";
  detail::svg_chart(out, cells, false, 10, 10, "Cut percent for different methods");
  detail::svg_chart(out, cells, true, 470, 10, "Imbalance percent for different methods");
  out += "</svg>\n";
  return out;
}

inline void emit_plot(const std::filesystem::path& path, const std::vector<SummaryCell>& cells) {
  write_text(path, format_svg(cells));
}

/// Self-describing comment lines written above the CSV header.
inline std::vector<std::string> describe(const BenchConfig& cfg) {
  std::vector<std::string> lines;
  std::string fam = "family=" + std::string(to_string(cfg.family));
  if (cfg.family == GraphFamily::er) fam += " er_p=" + detail::shortest(cfg.er_p);
  if (cfg.family == GraphFamily::planted) {
    fam += " p_in=" + detail::shortest(cfg.p_in) + " p_out=" + detail::shortest(cfg.p_out);
  }
  fam += " graphs_per_size=" + std::to_string(cfg.graphs_per_size) +
         " seeds_per_graph=" + std::to_string(cfg.seeds_per_graph) + " seed=" + std::to_string(cfg.seed);
  lines.push_back(fam);
  const MethodSettings& s = cfg.settings;
  lines.push_back("loss mode=" + std::string(to_string(s.loss.mode)) + " alpha=" + detail::shortest(s.loss.alpha) +
                  " xi=" + detail::shortest(s.loss.xi) + " z=" + detail::shortest(s.loss.z) +
                  " lambda=" + detail::shortest(s.loss.lambda_cut) + "/" + detail::shortest(s.loss.lambda_balance) +
                  "/" + detail::shortest(s.loss.lambda_centrality));
  lines.push_back("gnn embed_dim=" + std::to_string(s.model.embed_dim) +
                  " hidden=" + std::to_string(s.model.hidden_dim) + " epochs=" + std::to_string(s.train.epochs) +
                  " lr=" + detail::shortest(s.train.adam.learning_rate) +
                  " patience=" + std::to_string(s.train.patience) + " decoder=" + std::string(to_string(s.decoder)));
  lines.push_back("spectral split_rule=" + std::string(to_string(s.spectral.split_rule)) +
                  " kl max_passes=" + std::to_string(s.kl.max_passes));
  return lines;
}

/// Writes results.csv, summary.csv and figures.svg into cfg.out_dir.
inline void write_bench_outputs(const BenchConfig& cfg, const BenchResult& result) {
  std::filesystem::create_directories(cfg.out_dir);
  emit_csv(cfg.out_dir / "results.csv", result.rows, describe(cfg));
  write_text(cfg.out_dir / "summary.csv", format_summary_csv(result.summary));
  emit_plot(cfg.out_dir / "figures.svg", result.summary);
}

}  // namespace gpart
