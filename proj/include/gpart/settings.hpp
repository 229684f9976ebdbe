#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "gpart/bench.hpp"
#include "gpart/errors.hpp"
#include "gpart/graph_io.hpp"

namespace gpart {

using Setting = std::pair<std::string, std::string>;

/// Flat "key = value" lines; '#' starts a comment. Keys are normalized to the
/// dashed flag spelling ("graphs_per_size" -> "graphs-per-size").
inline std::vector<Setting> parse_settings(std::istream& in) {
  std::vector<Setting> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string_view view = detail::trim(line);
    if (view.empty()) continue;
    const auto eq = view.find('=');
    if (eq == std::string_view::npos) throw ParseError(lineno, "expected 'key = value'");
    std::string key(detail::trim(view.substr(0, eq)));
    std::string value(detail::trim(view.substr(eq + 1)));
    if (key.empty()) throw ParseError(lineno, "empty key");
    std::replace(key.begin(), key.end(), '_', '-');
    out.emplace_back(std::move(key), std::move(value));
  }
  return out;
}

inline std::vector<Setting> load_settings(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open " + path.string());
  try {
    return parse_settings(in);
  } catch (const ParseError& e) {
    throw ParseError(0, path.string() + ": " + e.what());
  }
}

namespace detail {

inline double setting_double(const std::string& key, const std::string& v) {
  try {
    return parse_double(v, 0);
  } catch (const ParseError&) {
    throw InvalidArgument(key + ": expected a number, got '" + v + "'");
  }
}

inline std::size_t setting_count(const std::string& key, const std::string& v) {
  long long x = 0;
  try {
    x = parse_int(v, 0);
  } catch (const ParseError&) {
    throw InvalidArgument(key + ": expected an integer, got '" + v + "'");
  }
  if (x < 0) throw InvalidArgument(key + ": must be nonnegative");
  return static_cast<std::size_t>(x);
}

inline bool setting_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw InvalidArgument(key + ": expected a boolean, got '" + v + "'");
}

}  // namespace detail

/// Applies one setting to a benchmark configuration. Returns false for keys
/// that do not configure a benchmark (e.g. "format"), so callers can route
/// them elsewhere.
inline bool apply_setting(BenchConfig& cfg, const std::string& key, const std::string& value) {
  MethodSettings& s = cfg.settings;
  if (key == "method" || key == "methods") {
    cfg.methods.clear();
    for (const std::string& m : detail::split(value, ',')) cfg.methods.push_back(parse_method(detail::trim(m)));
  } else if (key == "sizes") {
    cfg.sizes.clear();
    for (const std::string& x : detail::split(value, ',')) {
      cfg.sizes.push_back(detail::setting_count(key, std::string(detail::trim(x))));
    }
  } else if (key == "graphs-per-size") {
    cfg.graphs_per_size = detail::setting_count(key, value);
  } else if (key == "seeds-per-graph") {
    cfg.seeds_per_graph = detail::setting_count(key, value);
  } else if (key == "family") {
    cfg.family = parse_family(value);
  } else if (key == "er-p") {
    cfg.er_p = detail::setting_double(key, value);
  } else if (key == "p-in") {
    cfg.p_in = detail::setting_double(key, value);
  } else if (key == "p-out") {
    cfg.p_out = detail::setting_double(key, value);
  } else if (key == "seed") {
    cfg.seed = detail::setting_count(key, value);
  } else if (key == "timing") {
    cfg.record_runtime = detail::setting_bool(key, value);
  } else if (key == "out") {
    cfg.out_dir = value;
  } else if (key == "mode") {
    s.loss.mode = parse_loss_mode(value);
  } else if (key == "alpha") {
    s.loss.alpha = detail::setting_double(key, value);
  } else if (key == "xi") {
    s.loss.xi = detail::setting_double(key, value);
  } else if (key == "z") {
    s.loss.z = detail::setting_double(key, value);
  } else if (key == "lambda-cut") {
    s.loss.lambda_cut = detail::setting_double(key, value);
  } else if (key == "lambda-balance") {
    s.loss.lambda_balance = detail::setting_double(key, value);
  } else if (key == "lambda-centrality") {
    s.loss.lambda_centrality = detail::setting_double(key, value);
  } else if (key == "epochs") {
    s.train.epochs = detail::setting_count(key, value);
  } else if (key == "lr") {
    s.train.adam.learning_rate = detail::setting_double(key, value);
  } else if (key == "patience") {
    s.train.patience = detail::setting_count(key, value);
  } else if (key == "hidden") {
    s.model.hidden_dim = detail::setting_count(key, value);
  } else if (key == "embed-dim") {
    s.model.embed_dim = detail::setting_count(key, value);
  } else if (key == "decoder") {
    s.decoder = parse_decoder(value);
  } else if (key == "split-rule") {
    s.spectral.split_rule = parse_split_rule(value);
  } else if (key == "kl-passes") {
    s.kl.max_passes = detail::setting_count(key, value);
  } else {
    return false;
  }
  return true;
}

}  // namespace gpart
