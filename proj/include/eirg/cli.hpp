#pragma once

// Subcommand implementations behind the `eirg` executable. Each writes to
// the given stream (or files) and returns a process exit status, so the
// same entry points can be driven from tests.

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <ostream>
#include <string>

#include "eirg/config.hpp"
#include "eirg/edge_list.hpp"
#include "eirg/error.hpp"
#include "eirg/experiment.hpp"
#include "eirg/graph_matrices.hpp"
#include "eirg/linalg.hpp"
#include "eirg/report.hpp"
#include "eirg/walks.hpp"

namespace eirg::cli {

enum ExitCode : int { kOk = 0, kCriteriaFailed = 1, kConfigError = 2, kRuntimeError = 3 };

enum class Format { Csv, Json };

inline Format parse_format(const std::string& s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("--format must be csv or json");
}

/// Command-line overrides applied on top of a parsed config.
struct Overrides {
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::string> out_dir;
};

inline ExperimentConfig load_with_overrides(const std::string& path, const Overrides& o) {
  ExperimentConfig cfg = load_config(path);
  if (o.seed) cfg.master_seed = *o.seed;
  if (o.workers) cfg.workers = *o.workers;
  if (o.out_dir) cfg.out_dir = *o.out_dir;
  return cfg;
}

inline const ProbabilityMatrix& graph_model(const BuiltModel& b) {
  if (!b.pm) throw ConfigError("this command needs a random-graph model, not synthetic_variance");
  return *b.pm;
}

/// Samples one graph with the master seed and writes its edge list.
inline int cmd_sample(const ExperimentConfig& cfg, std::ostream& out) {
  const BuiltModel b = build_model(cfg.model);
  write_edge_list(out, sample(graph_model(b), cfg.master_seed));
  return kOk;
}

/// Sorted spectra of A, Abar, L and Lbar for the sample drawn with the
/// master seed. L is left empty when the sample has an isolated vertex.
inline int cmd_spectrum(const ExperimentConfig& cfg, Format fmt, std::ostream& out) {
  const BuiltModel b = build_model(cfg.model);
  const ProbabilityMatrix& pm = graph_model(b);
  const GraphSample gs = sample(pm, cfg.master_seed);
  const auto a = eigenvalues(SymmetricMatrix(gs.adjacency()));
  const auto abar = eigenvalues(SymmetricMatrix(pm.matrix()));
  std::optional<std::vector<double>> l;
  std::optional<std::vector<double>> lbar;
  try {
    l = eigenvalues(SymmetricMatrix::identity(gs.n()) - normalized_adjacency(gs));
  } catch (const IsolatedVertex&) {
  }
  try {
    lbar = eigenvalues(expected_laplacian(pm));
  } catch (const IsolatedVertex&) {
  }

  if (fmt == Format::Json) {
    nlohmann::json doc = {{"n", pm.n()}, {"seed", cfg.master_seed}, {"A", a}, {"Abar", abar}};
    doc["L"] = l ? nlohmann::json(*l) : nlohmann::json(nullptr);
    doc["Lbar"] = lbar ? nlohmann::json(*lbar) : nlohmann::json(nullptr);
    out << doc.dump(2) << '\n';
    return kOk;
  }
  out << "index,A,Abar,L,Lbar\n";
  for (std::size_t i = 0; i < a.size(); ++i) {
    out << i << ',' << format_double(a[i]) << ',' << format_double(abar[i]) << ',';
    if (l) out << format_double((*l)[i]);
    out << ',';
    if (lbar) out << format_double((*lbar)[i]);
    out << '\n';
  }
  return kOk;
}

/// Census of canonical good walks for 2 <= k <= k_max. The fk_bound column
/// needs a vertex count and is left empty without one.
inline int cmd_walks(int k_max, std::optional<std::uint64_t> n, unsigned workers, std::ostream& out) {
  if (k_max < 2) throw ConfigError("--k-max must be at least 2");
  if (k_max > 10) throw BudgetExceeded("walk census is limited to k <= 10");
  out << "k,p,count,fk_bound,vu_bound\n";
  for (int k = 2; k <= k_max; ++k) {
    for (int p = 2; p <= k / 2 + 1; ++p) {
      const WalkCensus c = enumerate_canonical(k, p, workers);
      out << k << ',' << p << ',' << c.count << ',';
      if (n && *n >= static_cast<std::uint64_t>(p)) out << format_double(fk_bound(*n, k, p));
      out << ',' << format_double(vu_bound(k, p)) << '\n';
    }
  }
  return kOk;
}

/// Four decomposition norms for the sample drawn with the master seed,
/// raw and scaled by sqrt(delta), plus the identity residual.
inline int cmd_decompose(const ExperimentConfig& cfg, Format fmt, std::ostream& out) {
  const BuiltModel b = build_model(cfg.model);
  const ProbabilityMatrix& pm = graph_model(b);
  const double tau = cfg.tau.value_or(default_tau(pm.n()));
  const SpectralSplit split = spectral_split(pm, tau);
  int resamples = 0;
  const auto gs = sample_without_isolated(pm, cfg.master_seed, kMaxResamples, &resamples);
  if (!gs) throw IsolatedVertex(0, "realized");
  const Decomposition dec = decompose(*gs, pm, split);
  const double residual = decomposition_residual(dec, laplacians(*gs, pm));
  const double root_delta = std::sqrt(degrees(pm).min_expected);

  if (fmt == Format::Json) {
    nlohmann::json terms = nlohmann::json::array();
    for (std::size_t i = 0; i < 4; ++i) {
      terms.push_back({{"term", "M" + std::to_string(i + 1)},
                       {"norm", dec.norms[i]},
                       {"scaled_norm", dec.norms[i] * root_delta}});
    }
    nlohmann::json doc = {{"n", pm.n()},       {"seed", gs->seed()}, {"resamples", resamples},
                          {"tau", tau},        {"lambda_size", split.k}, {"identity_residual", residual},
                          {"terms", terms}};
    out << doc.dump(2) << '\n';
    return kOk;
  }
  out << "term,norm,scaled_norm\n";
  for (std::size_t i = 0; i < 4; ++i) {
    out << 'M' << i + 1 << ',' << format_double(dec.norms[i]) << ',' << format_double(dec.norms[i] * root_delta)
        << '\n';
  }
  out << "identity_residual," << format_double(residual) << ",\n";
  return kOk;
}

/// Runs the experiment, writes the trial CSV and summary JSON and prints
/// one verdict line per criterion.
inline int cmd_verify(const ExperimentConfig& cfg, std::ostream& log) {
  const ExperimentSummary s = run_experiment(cfg);
  write_outputs(s, cfg.out_dir, cfg.trials_csv, cfg.summary_json);
  for (const auto& c : s.criteria) {
    log << (c.pass ? "PASS " : "FAIL ") << to_string(c.criterion) << ": " << c.statistic << " = "
        << format_double(c.value) << " (threshold " << format_double(c.threshold) << ")"
        << (c.hypothesis_ok ? "" : " [hypothesis not met]") << '\n';
  }
  if (s.aborted > 0) log << s.aborted << " trial(s) aborted on isolated vertices\n";
  return s.pass() ? kOk : kCriteriaFailed;
}

/// Maps exceptions to exit codes; configuration and validation problems are 2.
template <typename Fn>
int guarded(Fn&& fn, std::ostream& err) {
  try {
    return fn();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const EmptyExperiment& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << '\n';
    return kConfigError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace eirg::cli
