#pragma once

#include <charconv>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "gpart/errors.hpp"
#include "gpart/graph.hpp"

namespace gpart {

enum class GraphFormat { edge_list, metis };

inline GraphFormat parse_graph_format(std::string_view s) {
  if (s == "edge-list") return GraphFormat::edge_list;
  if (s == "metis") return GraphFormat::metis;
  throw InvalidArgument("unknown graph format '" + std::string(s) + "' (expected edge-list or metis)");
}

namespace detail {

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    const std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) out.push_back(line.substr(start, i - start));
  }
  return out;
}

inline long long parse_int(std::string_view tok, std::size_t line) {
  long long value = 0;
  const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
    throw ParseError(line, "expected an integer, got '" + std::string(tok) + "'");
  }
  return value;
}

inline double parse_double(std::string_view tok, std::size_t line) {
  // from_chars for double is missing on older libstdc++
  std::string s(tok);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) throw ParseError(line, "expected a number, got '" + s + "'");
  return value;
}

inline NodeId to_node(long long v, std::size_t line) {
  if (v < 0 || v > static_cast<long long>(UINT32_MAX)) {
    throw IndexRangeError(line, "node index " + std::to_string(v) + " out of range");
  }
  return static_cast<NodeId>(v);
}

}  // namespace detail

/// Edge list: "u v" or "u v w" per line, 0-indexed, '#' comment lines. The
/// node count is one past the largest index, or the value of a "# nodes N"
/// comment when that is larger.
inline Graph parse_edge_list(std::istream& in) {
  std::vector<Edge> edges;
  std::vector<std::size_t> lines;
  std::size_t n = 0;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks[0].front() == '#') {
      if (toks.size() == 3 && toks[0] == "#" && toks[1] == "nodes") {
        n = std::max<std::size_t>(n, static_cast<std::size_t>(detail::parse_int(toks[2], lineno)));
      }
      continue;
    }
    if (toks.size() != 2 && toks.size() != 3) {
      throw ParseError(lineno, "expected 'u v' or 'u v w'");
    }
    const NodeId u = detail::to_node(detail::parse_int(toks[0], lineno), lineno);
    const NodeId v = detail::to_node(detail::parse_int(toks[1], lineno), lineno);
    const double w = toks.size() == 3 ? detail::parse_double(toks[2], lineno) : 1.0;
    if (u == v) throw SelfLoopError(lineno, "self-loop on node " + std::to_string(u));
    edges.push_back({u, v, w});
    lines.push_back(lineno);
    n = std::max<std::size_t>(n, std::max(u, v) + std::size_t{1});
  }
  return Graph(n, std::move(edges), lines);
}

/// METIS graph format. Vertex weights and sizes are accepted and ignored; edge
/// weights are read when the fmt field declares them.
inline Graph parse_metis(std::istream& in) {
  std::string line;
  std::size_t lineno = 0;
  std::optional<std::vector<std::string_view>> header;
  std::string header_line;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.front() == '%') continue;
    header_line = line;
    header = detail::split_ws(header_line);
    if (header->empty()) {
      header.reset();
      continue;
    }
    break;
  }
  if (!header) throw ParseError(lineno, "missing METIS header");
  const auto& h = *header;
  if (h.size() < 2 || h.size() > 4) throw ParseError(lineno, "METIS header must be 'n m [fmt [ncon]]'");
  const long long n_raw = detail::parse_int(h[0], lineno);
  const long long m_raw = detail::parse_int(h[1], lineno);
  if (n_raw < 0 || m_raw < 0) throw ParseError(lineno, "negative node or edge count");
  std::string fmt = h.size() >= 3 ? std::string(h[2]) : "0";
  if (fmt.size() > 3 || fmt.find_first_not_of("01") != std::string::npos) {
    throw ParseError(lineno, "unsupported METIS fmt '" + fmt + "'");
  }
  fmt.insert(0, 3 - fmt.size(), '0');
  const bool has_sizes = fmt[0] == '1';
  const bool has_vertex_weights = fmt[1] == '1';
  const bool has_edge_weights = fmt[2] == '1';
  const long long ncon = h.size() == 4 ? detail::parse_int(h[3], lineno) : 1;
  if (ncon < 1) throw ParseError(lineno, "ncon must be positive");
  const std::size_t header_lineno = lineno;

  const auto n = static_cast<std::size_t>(n_raw);
  std::vector<Edge> edges;
  std::vector<std::size_t> lines;
  std::vector<Edge> reverse;
  std::vector<std::size_t> reverse_lines;
  std::size_t node = 0;
  while (node < n && std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.front() == '%') continue;
    const auto toks = detail::split_ws(line);
    std::size_t i = 0;
    if (has_sizes) ++i;
    if (has_vertex_weights) i += static_cast<std::size_t>(ncon);
    if (i > toks.size()) throw ParseError(lineno, "missing vertex size or weight");
    const std::size_t stride = has_edge_weights ? 2 : 1;
    if ((toks.size() - i) % stride != 0) throw ParseError(lineno, "neighbor without edge weight");
    const auto u = static_cast<NodeId>(node);
    for (; i < toks.size(); i += stride) {
      const long long nb = detail::parse_int(toks[i], lineno);
      if (nb < 1 || nb > n_raw) {
        throw IndexRangeError(lineno, "neighbor " + std::to_string(nb) + " out of range 1.." + std::to_string(n));
      }
      const auto v = static_cast<NodeId>(nb - 1);
      const double w = has_edge_weights ? detail::parse_double(toks[i + 1], lineno) : 1.0;
      if (v == u) throw SelfLoopError(lineno, "self-loop on node " + std::to_string(nb));
      if (u < v) {
        edges.push_back({u, v, w});
        lines.push_back(lineno);
      } else {
        reverse.push_back({v, u, w});
        reverse_lines.push_back(lineno);
      }
    }
    ++node;
  }
  if (node < n) throw ParseError(lineno, "expected " + std::to_string(n) + " adjacency lines, got " + std::to_string(node));

  Graph g(n, edges, lines);
  Graph mirror(n, reverse, reverse_lines);
  if (g.edges() != mirror.edges()) {
    throw ParseError(0, "METIS adjacency is not symmetric");
  }
  if (g.edge_count() != static_cast<std::size_t>(m_raw)) {
    throw ParseError(header_lineno, "header declares " + std::to_string(m_raw) + " edges, adjacency has " +
                                        std::to_string(g.edge_count()));
  }
  return g;
}

inline Graph parse_graph(std::string_view text, GraphFormat format) {
  std::istringstream in{std::string(text)};
  return format == GraphFormat::metis ? parse_metis(in) : parse_edge_list(in);
}

inline Graph load_graph(const std::filesystem::path& path, GraphFormat format) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return format == GraphFormat::metis ? parse_metis(in) : parse_edge_list(in);
  } catch (const ParseError& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

inline void write_edge_list(std::ostream& out, const Graph& g) {
  out << "# nodes " << g.n() << '\n';
  bool weighted = false;
  for (const Edge& e : g.edges()) weighted |= e.w != 1.0;
  out.precision(17);
  for (const Edge& e : g.edges()) {
    out << e.u << ' ' << e.v;
    if (weighted) out << ' ' << e.w;
    out << '\n';
  }
}

inline void save_edge_list(const std::filesystem::path& path, const Graph& g) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  write_edge_list(out, g);
  if (!out) throw Error("write failed: " + path.string());
}

/// One label (0 or 1) per line in node order.
inline Partition parse_partition(std::istream& in) {
  std::vector<std::uint8_t> labels;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto toks = detail::split_ws(line);
    if (toks.empty()) continue;
    if (toks.size() != 1 || (toks[0] != "0" && toks[0] != "1")) {
      throw ParseError(lineno, "expected a single label 0 or 1");
    }
    labels.push_back(toks[0] == "1" ? 1 : 0);
  }
  return Partition(std::move(labels));
}

inline Partition load_partition(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return parse_partition(in);
  } catch (const ParseError& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

inline void save_partition(const std::filesystem::path& path, const Partition& part) {
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  for (std::uint8_t l : part.labels()) out << static_cast<int>(l) << '\n';
  if (!out) throw Error("write failed: " + path.string());
}

}  // namespace gpart
