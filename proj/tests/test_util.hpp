#pragma once

#include <filesystem>
#include <string>

#include "gpart/graph.hpp"

namespace gpart::test {

inline Graph triangle() { return Graph(3, {{0, 1, 1.0}, {1, 2, 1.0}, {0, 2, 1.0}}); }

inline Graph path(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
  return Graph(n, std::move(edges));
}

inline Graph cycle(std::size_t n) {
  std::vector<Edge> edges;
  for (NodeId v = 0; v + 1 < n; ++v) edges.push_back({v, v + 1, 1.0});
  edges.push_back({0, static_cast<NodeId>(n - 1), 1.0});
  return Graph(n, std::move(edges));
}

/// Scratch file under a per-suite temp directory.
inline std::filesystem::path temp_path(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / "gpart_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace gpart::test
