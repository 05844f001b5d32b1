#pragma once

// Experiment configuration documents (JSON). Parsing is strict: every key
// is checked against the schema and unknown keys are errors.
//
//   {
//     "model": {"kind": "erdos_renyi", "n": 2000, "p": 0.5},
//     "trials": 20,
//     "seed": 12345,
//     "tau": 0.2,                    optional, default 1/(ln ln max(n,27) sqrt(ln n))
//     "epsilon": 0.3,                optional
//     "criteria": ["adjacency", ...], optional, defaults per model kind
//     "workers": 4,                  optional
//     "x_trials": 10000,             optional, for x_statistics / weighted_tail
//     "tail_eta": 10,                optional
//     "tail_weights": [...],         optional, all ones by default
//     "output": {"dir": "out", "trials_csv": "trials.csv", "summary_json": "summary.json"}
//   }
//
// Model kinds:
//   erdos_renyi        n, p
//   chung_lu           exactly one of: weights [..] | weights_file "path" |
//                      linear {n, from, to} | constant {n, weight}
//   percolation        p, host {kind: complete{n} | cycle{n} | hypercube{dim} |
//                      random_regular{n, degree, seed} | edge_list{path}}
//   explicit_matrix    matrix [[..], ..]
//   block              sizes [..], within, between
//   synthetic_variance n, K (default 1), profile_seed (default 0)

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "eirg/error.hpp"
#include "eirg/experiment.hpp"
#include "eirg/models.hpp"

namespace eirg {

namespace detail {

using json = nlohmann::json;

inline void check_keys(const json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  for (const auto& item : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || item.key() == a;
    if (!ok) throw ConfigError(where + ": unknown key '" + item.key() + "'");
  }
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw ConfigError(where + ": missing required key '" + key + "'");
  return *it;
}

inline double get_number(const json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + ": non-finite number");
  return x;
}

inline std::int64_t get_int(const json& v, const std::string& where) {
  if (!v.is_number_integer()) throw ConfigError(where + ": expected an integer");
  if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw ConfigError(where + ": integer out of range");
  }
  return v.get<std::int64_t>();
}

inline std::uint64_t get_u64(const json& v, const std::string& where) {
  if (v.is_number_unsigned()) return v.get<std::uint64_t>();
  if (v.is_number_integer() && v.get<std::int64_t>() >= 0) return static_cast<std::uint64_t>(v.get<std::int64_t>());
  throw ConfigError(where + ": expected a nonnegative integer");
}

inline Index get_positive(const json& v, const std::string& where) {
  const auto x = get_int(v, where);
  if (x < 1) throw ConfigError(where + ": must be positive");
  return static_cast<Index>(x);
}

inline std::string get_string(const json& v, const std::string& where) {
  if (!v.is_string()) throw ConfigError(where + ": expected a string");
  return v.get<std::string>();
}

inline std::vector<double> get_number_array(const json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_number(v[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

inline std::string resolve(const std::string& path, const std::filesystem::path& base) {
  const std::filesystem::path p(path);
  return p.is_absolute() || base.empty() ? path : (base / p).string();
}

inline HostSpec parse_host(const json& h, const std::filesystem::path& base) {
  const std::string where = "model.host";
  const std::string kind = get_string(require(h, "kind", where), where + ".kind");
  HostSpec spec;
  if (kind == "complete" || kind == "cycle") {
    check_keys(h, {"kind", "n"}, where);
    spec.kind = kind == "complete" ? HostKind::Complete : HostKind::Cycle;
    spec.n = get_positive(require(h, "n", where), where + ".n");
  } else if (kind == "hypercube") {
    check_keys(h, {"kind", "dim"}, where);
    spec.kind = HostKind::Hypercube;
    spec.dim = static_cast<int>(get_positive(require(h, "dim", where), where + ".dim"));
  } else if (kind == "random_regular") {
    check_keys(h, {"kind", "n", "degree", "seed"}, where);
    spec.kind = HostKind::RandomRegular;
    spec.n = get_positive(require(h, "n", where), where + ".n");
    spec.degree = get_positive(require(h, "degree", where), where + ".degree");
    spec.seed = h.contains("seed") ? get_u64(h["seed"], where + ".seed") : 0;
  } else if (kind == "edge_list") {
    check_keys(h, {"kind", "path"}, where);
    spec.kind = HostKind::EdgeList;
    spec.path = resolve(get_string(require(h, "path", where), where + ".path"), base);
  } else {
    throw ConfigError(where + ": unknown host kind '" + kind + "'");
  }
  return spec;
}

inline ModelSpec parse_model(const json& m, const std::filesystem::path& base) {
  const std::string where = "model";
  const std::string kind = get_string(require(m, "kind", where), "model.kind");
  ModelSpec spec;
  if (kind == "erdos_renyi") {
    check_keys(m, {"kind", "n", "p"}, where);
    spec.kind = ModelKind::ErdosRenyi;
    spec.n = get_positive(require(m, "n", where), "model.n");
    spec.p = get_number(require(m, "p", where), "model.p");
  } else if (kind == "chung_lu") {
    check_keys(m, {"kind", "weights", "weights_file", "linear", "constant"}, where);
    spec.kind = ModelKind::ChungLu;
    int sources = 0;
    if (m.contains("weights")) {
      ++sources;
      spec.weights = get_number_array(m["weights"], "model.weights");
    }
    if (m.contains("weights_file")) {
      ++sources;
      spec.weights = load_weights(resolve(get_string(m["weights_file"], "model.weights_file"), base));
    }
    if (m.contains("linear")) {
      ++sources;
      const json& l = m["linear"];
      check_keys(l, {"n", "from", "to"}, "model.linear");
      spec.weights = linear_weights(get_positive(require(l, "n", "model.linear"), "model.linear.n"),
                                    get_number(require(l, "from", "model.linear"), "model.linear.from"),
                                    get_number(require(l, "to", "model.linear"), "model.linear.to"));
    }
    if (m.contains("constant")) {
      ++sources;
      const json& c = m["constant"];
      check_keys(c, {"n", "weight"}, "model.constant");
      spec.weights.assign(static_cast<std::size_t>(get_positive(require(c, "n", "model.constant"), "model.constant.n")),
                          get_number(require(c, "weight", "model.constant"), "model.constant.weight"));
    }
    if (sources != 1) throw ConfigError("model: chung_lu needs exactly one of weights, weights_file, linear, constant");
    spec.n = static_cast<Index>(spec.weights.size());
  } else if (kind == "percolation") {
    check_keys(m, {"kind", "p", "host"}, where);
    spec.kind = ModelKind::Percolation;
    spec.p = get_number(require(m, "p", where), "model.p");
    spec.host = parse_host(require(m, "host", where), base);
  } else if (kind == "explicit_matrix") {
    check_keys(m, {"kind", "matrix"}, where);
    spec.kind = ModelKind::ExplicitMatrix;
    const json& rows = require(m, "matrix", where);
    if (!rows.is_array() || rows.empty()) throw ConfigError("model.matrix: expected a non-empty array of rows");
    const auto n = static_cast<Index>(rows.size());
    spec.matrix.resize(n, n);
    for (Index i = 0; i < n; ++i) {
      const auto row = get_number_array(rows[static_cast<std::size_t>(i)], "model.matrix[" + std::to_string(i) + "]");
      if (static_cast<Index>(row.size()) != n) throw ConfigError("model.matrix: matrix must be square");
      for (Index j = 0; j < n; ++j) spec.matrix(i, j) = row[static_cast<std::size_t>(j)];
    }
    spec.n = n;
  } else if (kind == "block") {
    check_keys(m, {"kind", "sizes", "within", "between"}, where);
    spec.kind = ModelKind::Block;
    const json& sizes = require(m, "sizes", where);
    if (!sizes.is_array() || sizes.empty()) throw ConfigError("model.sizes: expected a non-empty array");
    for (std::size_t i = 0; i < sizes.size(); ++i) {
      spec.block_sizes.push_back(get_positive(sizes[i], "model.sizes[" + std::to_string(i) + "]"));
      spec.n += spec.block_sizes.back();
    }
    spec.within = get_number(require(m, "within", where), "model.within");
    spec.between = get_number(require(m, "between", where), "model.between");
  } else if (kind == "synthetic_variance") {
    check_keys(m, {"kind", "n", "K", "profile_seed"}, where);
    spec.kind = ModelKind::SyntheticVariance;
    spec.n = get_positive(require(m, "n", where), "model.n");
    spec.K = m.contains("K") ? get_number(m["K"], "model.K") : 1.0;
    spec.profile_seed = m.contains("profile_seed") ? get_u64(m["profile_seed"], "model.profile_seed") : 0;
  } else {
    throw ConfigError("model: unknown kind '" + kind + "'");
  }
  return spec;
}

}  // namespace detail

/// Validates the whole document before anything is computed. Relative
/// file paths inside the model are resolved against `base_dir`.
inline ExperimentConfig parse_config(const nlohmann::json& doc, const std::filesystem::path& base_dir = {}) {
  using namespace detail;
  check_keys(doc, {"model", "trials", "seed", "tau", "epsilon", "criteria", "workers", "x_trials", "tail_eta",
                   "tail_weights", "output"},
             "config");
  ExperimentConfig cfg;
  cfg.echo = doc;
  cfg.model = parse_model(require(doc, "model", "config"), base_dir);
  const auto trials = get_int(require(doc, "trials", "config"), "trials");
  if (trials < 0) throw ConfigError("trials: must be nonnegative");
  cfg.trials = static_cast<Index>(trials);
  cfg.master_seed = get_u64(require(doc, "seed", "config"), "seed");
  if (doc.contains("tau")) {
    cfg.tau = get_number(doc["tau"], "tau");
    if (!(*cfg.tau > 0.0)) throw ConfigError("tau: must be positive");
  }
  if (doc.contains("epsilon")) {
    cfg.epsilon = get_number(doc["epsilon"], "epsilon");
    if (cfg.epsilon < 0.0) throw ConfigError("epsilon: must be nonnegative");
  }
  if (doc.contains("criteria")) {
    const json& cs = doc["criteria"];
    if (!cs.is_array()) throw ConfigError("criteria: expected an array of names");
    for (const auto& c : cs) {
      const std::string name = get_string(c, "criteria[]");
      const auto crit = criterion_from_string(name);
      if (!crit) throw ConfigError("criteria: unknown criterion '" + name + "'");
      cfg.criteria.push_back(*crit);
    }
  }
  if (doc.contains("workers")) cfg.workers = static_cast<unsigned>(get_positive(doc["workers"], "workers"));
  if (doc.contains("x_trials")) cfg.x_trials = get_positive(doc["x_trials"], "x_trials");
  if (doc.contains("tail_eta")) {
    cfg.tail_eta = get_number(doc["tail_eta"], "tail_eta");
    if (!(cfg.tail_eta > 0.0)) throw ConfigError("tail_eta: must be positive");
  }
  if (doc.contains("tail_weights")) {
    cfg.tail_weights = get_number_array(doc["tail_weights"], "tail_weights");
    if (static_cast<Index>(cfg.tail_weights.size()) != cfg.model.n) {
      throw ConfigError("tail_weights: length must equal the vertex count");
    }
  }
  if (doc.contains("output")) {
    const json& o = doc["output"];
    check_keys(o, {"dir", "trials_csv", "summary_json"}, "output");
    if (o.contains("dir")) cfg.out_dir = get_string(o["dir"], "output.dir");
    if (o.contains("trials_csv")) cfg.trials_csv = get_string(o["trials_csv"], "output.trials_csv");
    if (o.contains("summary_json")) cfg.summary_json = get_string(o["summary_json"], "output.summary_json");
  }
  return cfg;
}

inline ExperimentConfig parse_config_text(const std::string& text, const std::filesystem::path& base_dir = {}) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  return parse_config(doc, base_dir);
}

inline ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), std::filesystem::path(path).parent_path());
}

}  // namespace eirg
