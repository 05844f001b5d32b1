#pragma once

// Output writers for experiment results: the per-trial CSV table and the
// summary JSON document. Both are locale-independent and deterministic.

#include <json.hpp>

#include <array>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>

#include "eirg/error.hpp"
#include "eirg/experiment.hpp"

namespace eirg {

/// 17 significant digits, '.' decimal separator regardless of locale.
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x, std::chars_format::general, 17);
  return std::string(buf.data(), res.ptr);
}

inline const std::array<const char*, 22>& trial_csv_columns() {
  static const std::array<const char*, 22> cols = {
      "trial",          "seed",          "adjacency_ratio",     "adjacency_weyl_gap",
      "laplacian_gap",  "laplacian_norm_diff", "m1_norm",      "m2_norm",
      "m3_norm",        "m4_norm",       "identity_residual",   "degree_dev",
      "scaling_dev",    "spectral_norm_ratio", "percolation_adjacency_gap", "percolation_laplacian_gap",
      "resamples",      "aborted",       "weyl_ok",             "triangle_ok",
      "degree_ok",      "hypothesis_ok"};
  return cols;
}

/// One row per trial in trial order; quantities that were not measured are empty cells.
inline void write_trials_csv(std::ostream& out, const ExperimentSummary& s) {
  const auto& cols = trial_csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "," : "") << cols[i];
  out << '\n';
  const bool hyp = std::all_of(s.criteria.begin(), s.criteria.end(),
                               [](const CriterionResult& c) { return c.hypothesis_ok; });
  auto cell = [&](const std::optional<double>& v) {
    out << ',';
    if (v) out << format_double(*v);
  };
  for (const auto& r : s.reports) {
    out << r.trial << ',' << r.seed;
    cell(r.adjacency_ratio);
    cell(r.adjacency_weyl_gap);
    cell(r.laplacian_gap);
    cell(r.laplacian_norm_diff);
    for (std::size_t i = 0; i < 4; ++i) cell(r.m_norms ? std::optional<double>((*r.m_norms)[i]) : std::nullopt);
    cell(r.identity_residual);
    cell(r.degree_dev);
    cell(r.scaling_dev);
    cell(r.spectral_norm_ratio);
    cell(r.percolation_adjacency_gap);
    cell(r.percolation_laplacian_gap);
    out << ',' << r.resamples << ',' << int(r.aborted) << ',' << int(r.weyl_ok) << ',' << int(r.triangle_ok) << ','
        << int(r.degree_ok) << ',' << int(hyp) << '\n';
  }
}

namespace detail {

inline nlohmann::json number_or_null(double x) {
  return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr);
}

}  // namespace detail

inline nlohmann::json summary_to_json(const ExperimentSummary& s) {
  using nlohmann::json;
  json model = {{"kind", s.model.kind},
                {"n", s.model.n},
                {"max_expected_degree", s.model.max_degree},
                {"min_expected_degree", s.model.min_degree}};
  if (s.model.tau) model["tau"] = *s.model.tau;
  if (s.model.k) model["lambda_size"] = *s.model.k;
  if (s.model.lambda_square_sum) model["lambda_square_sum"] = *s.model.lambda_square_sum;

  json bounds = {{"adjacency_bound", s.model.adjacency_bound}};
  if (s.model.laplacian_bound) bounds["laplacian_bound"] = *s.model.laplacian_bound;

  json quantiles = json::object();
  for (const auto& [name, q] : s.quantiles) {
    quantiles[name] = {{"median", q.median}, {"q95", q.q95}, {"max", q.max}};
  }

  json criteria = json::array();
  for (const auto& c : s.criteria) {
    json details = json::object();
    for (const auto& [k, v] : c.details) details[k] = detail::number_or_null(v);
    criteria.push_back({{"criterion", to_string(c.criterion)},
                        {"statistic", c.statistic},
                        {"value", detail::number_or_null(c.value)},
                        {"threshold", detail::number_or_null(c.threshold)},
                        {"hypothesis_ok", c.hypothesis_ok},
                        {"pass", c.pass},
                        {"details", details}});
  }

  return {{"config", s.config},   {"model", model},       {"bounds", bounds},         {"epsilon", s.epsilon},
          {"master_seed", s.master_seed}, {"trials", s.trials},   {"aborted", s.aborted}, {"quantiles", quantiles},   {"criteria", criteria},
          {"pass", s.pass()}};
}

inline void write_summary_json(std::ostream& out, const ExperimentSummary& s) {
  out << summary_to_json(s).dump(2) << '\n';
}

/// Writes both files under `dir`, creating it if needed.
inline void write_outputs(const ExperimentSummary& s, const std::filesystem::path& dir, const std::string& csv_name,
                          const std::string& json_name) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  std::ofstream csv(dir / csv_name, std::ios::binary);
  std::ofstream js(dir / json_name, std::ios::binary);
  if (!csv || !js) throw Error("cannot write outputs under " + dir.string());
  write_trials_csv(csv, s);
  write_summary_json(js, s);
  if (!csv || !js) throw Error("write failed under " + dir.string());
}

}  // namespace eirg
