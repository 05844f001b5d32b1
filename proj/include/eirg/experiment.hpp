#pragma once

// Experiment driver: builds the configured model, runs seeded trials on a
// pool of workers and folds the per-trial reports into quantiles and
// pass/fail verdicts. The summary is a pure function of the configuration;
// worker count only changes wall time.

#include <json.hpp>

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "eirg/concentration.hpp"
#include "eirg/edge_list.hpp"
#include "eirg/error.hpp"
#include "eirg/graph_matrices.hpp"
#include "eirg/models.hpp"
#include "eirg/rng.hpp"

namespace eirg {

enum class ModelKind { ErdosRenyi, ChungLu, Percolation, ExplicitMatrix, Block, SyntheticVariance };

inline const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::ErdosRenyi: return "erdos_renyi";
    case ModelKind::ChungLu: return "chung_lu";
    case ModelKind::Percolation: return "percolation";
    case ModelKind::ExplicitMatrix: return "explicit_matrix";
    case ModelKind::Block: return "block";
    case ModelKind::SyntheticVariance: return "synthetic_variance";
  }
  return "?";
}

enum class HostKind { Complete, Cycle, Hypercube, RandomRegular, EdgeList };

struct HostSpec {
  HostKind kind = HostKind::Complete;
  Index n = 0;
  int dim = 0;
  Index degree = 0;
  std::uint64_t seed = 0;
  std::string path;
};

struct ModelSpec {
  ModelKind kind = ModelKind::ErdosRenyi;
  Index n = 0;
  double p = 0.0;                  // erdos_renyi, percolation
  std::vector<double> weights;     // chung_lu, resolved
  HostSpec host;                   // percolation
  Matrix matrix;                   // explicit_matrix
  std::vector<Index> block_sizes;  // block
  double within = 0.0;
  double between = 0.0;
  double K = 1.0;                  // synthetic_variance
  std::uint64_t profile_seed = 0;
};

enum class Criterion {
  Adjacency,
  Laplacian,
  Degree,
  Eigvec,
  Scaling,
  XStatistics,
  WeightedTail,
  PercolationAdjacency,
  PercolationLaplacian,
  SpectralNorm,
};

inline const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::Adjacency: return "adjacency";
    case Criterion::Laplacian: return "laplacian";
    case Criterion::Degree: return "degree";
    case Criterion::Eigvec: return "eigvec";
    case Criterion::Scaling: return "scaling";
    case Criterion::XStatistics: return "x_statistics";
    case Criterion::WeightedTail: return "weighted_tail";
    case Criterion::PercolationAdjacency: return "percolation_adjacency";
    case Criterion::PercolationLaplacian: return "percolation_laplacian";
    case Criterion::SpectralNorm: return "spectral_norm";
  }
  return "?";
}

inline std::optional<Criterion> criterion_from_string(const std::string& s) {
  for (int i = 0; i <= static_cast<int>(Criterion::SpectralNorm); ++i) {
    const auto c = static_cast<Criterion>(i);
    if (s == to_string(c)) return c;
  }
  return std::nullopt;
}

struct ExperimentConfig {
  ModelSpec model;
  Index trials = 0;
  std::uint64_t master_seed = 0;
  std::optional<double> tau;  // default_tau(n) when absent
  double epsilon = 0.3;
  std::vector<Criterion> criteria;  // defaults chosen per model kind when empty
  unsigned workers = 1;
  Index x_trials = 10000;
  double tail_eta = 10.0;
  std::vector<double> tail_weights;  // all ones when empty
  std::string out_dir = ".";
  std::string trials_csv = "trials.csv";
  std::string summary_json = "summary.json";
  nlohmann::json echo;  // the configuration document as read
};

/// Everything measured in one trial. Quantities of unselected criteria stay empty.
struct TrialReport {
  Index trial = 0;
  std::uint64_t seed = 0;
  std::optional<double> adjacency_ratio;
  std::optional<double> adjacency_weyl_gap;
  std::optional<double> laplacian_gap;
  std::optional<double> laplacian_norm_diff;
  std::optional<std::array<double, 4>> m_norms;
  std::optional<double> identity_residual;
  std::optional<double> degree_dev;
  std::optional<double> scaling_dev;
  std::optional<double> spectral_norm_ratio;
  std::optional<double> percolation_adjacency_gap;
  std::optional<double> percolation_laplacian_gap;
  int resamples = 0;
  bool aborted = false;
  bool weyl_ok = true;
  bool triangle_ok = true;
  bool degree_ok = true;
};

struct CriterionResult {
  Criterion criterion = Criterion::Adjacency;
  std::string statistic;  // what `value` is, e.g. "q95(adjacency_ratio)"
  double value = 0.0;
  double threshold = 0.0;
  bool hypothesis_ok = true;
  bool pass = false;
  std::map<std::string, double> details;
};

struct ModelInfo {
  std::string kind;
  Index n = 0;
  double max_degree = 0.0;  // Delta (max row sum of sigma^2 for synthetic_variance)
  double min_degree = 0.0;  // delta
  std::optional<double> tau;
  std::optional<Index> k;
  std::optional<double> lambda_square_sum;
  double adjacency_bound = 2.0;
  std::optional<double> laplacian_bound;
};

struct ExperimentSummary {
  nlohmann::json config;
  std::uint64_t master_seed = 0;
  ModelInfo model;
  Index trials = 0;
  Index aborted = 0;
  double epsilon = 0.3;
  std::map<std::string, Quantiles> quantiles;
  std::vector<CriterionResult> criteria;
  std::vector<TrialReport> reports;  // ordered by trial index

  bool pass() const {
    return std::all_of(criteria.begin(), criteria.end(), [](const CriterionResult& c) { return c.pass; });
  }
};

// ---------------------------------------------------------------------------

/// Resolved model objects for a ModelSpec.
struct BuiltModel {
  std::optional<ProbabilityMatrix> pm;
  std::optional<Matrix> host;
  std::optional<VarianceProfile> profile;
};

inline Matrix build_host(const HostSpec& h) {
  switch (h.kind) {
    case HostKind::Complete: return complete_graph(h.n);
    case HostKind::Cycle: return cycle_graph(h.n);
    case HostKind::Hypercube: return hypercube(h.dim);
    case HostKind::RandomRegular: return random_regular(h.n, h.degree, h.seed);
    case HostKind::EdgeList: return load_edge_list(h.path);
  }
  throw InvalidArgument("unknown host kind");
}

inline BuiltModel build_model(const ModelSpec& spec) {
  BuiltModel b;
  switch (spec.kind) {
    case ModelKind::ErdosRenyi: b.pm = erdos_renyi(spec.n, spec.p); break;
    case ModelKind::ChungLu: b.pm = chung_lu(spec.weights); break;
    case ModelKind::Percolation:
      b.host = build_host(spec.host);
      b.pm = percolation(*b.host, spec.p);
      break;
    case ModelKind::ExplicitMatrix: b.pm = ProbabilityMatrix(spec.matrix); break;
    case ModelKind::Block: b.pm = block_model(spec.block_sizes, spec.within, spec.between); break;
    case ModelKind::SyntheticVariance: b.profile = synthetic_variance_profile(spec.n, spec.K, spec.profile_seed); break;
  }
  return b;
}

inline std::vector<Criterion> default_criteria(ModelKind kind) {
  switch (kind) {
    case ModelKind::SyntheticVariance: return {Criterion::SpectralNorm};
    case ModelKind::Percolation:
      return {Criterion::Adjacency, Criterion::Laplacian, Criterion::Degree, Criterion::Eigvec,
              Criterion::PercolationAdjacency, Criterion::PercolationLaplacian};
    default:
      return {Criterion::Adjacency, Criterion::Laplacian, Criterion::Degree, Criterion::Eigvec, Criterion::Scaling};
  }
}

namespace detail {

inline bool has(const std::vector<Criterion>& cs, Criterion c) {
  return std::find(cs.begin(), cs.end(), c) != cs.end();
}

/// Runs body(i) for i in [0, count) on `workers` threads; rethrows the first failure.
template <typename Body>
void parallel_for(Index count, unsigned workers, Body&& body) {
  workers = std::max(1u, workers);
  if (workers == 1 || count <= 1) {
    for (Index i = 0; i < count; ++i) body(i);
    return;
  }
  std::atomic<Index> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto run = [&] {
    for (;;) {
      const Index i = next.fetch_add(1);
      if (i >= count) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
        next.store(count);
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const unsigned n = static_cast<unsigned>(std::min<Index>(workers, count));
  for (unsigned w = 0; w < n; ++w) pool.emplace_back(run);
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

inline std::vector<double> collect(const std::vector<TrialReport>& reports,
                                   std::optional<double> TrialReport::*field) {
  std::vector<double> out;
  for (const auto& r : reports) {
    if (r.*field) out.push_back(*(r.*field));
  }
  return out;
}

}  // namespace detail

inline ExperimentSummary run_experiment(const ExperimentConfig& config) {
  if (config.trials < 1) throw EmptyExperiment();
  const std::vector<Criterion> criteria =
      config.criteria.empty() ? default_criteria(config.model.kind) : config.criteria;
  const BuiltModel built = build_model(config.model);
  using detail::has;

  const bool synthetic = config.model.kind == ModelKind::SyntheticVariance;
  const bool percolation_kind = config.model.kind == ModelKind::Percolation;
  for (Criterion c : criteria) {
    const bool needs_graph = c != Criterion::SpectralNorm;
    const bool needs_host = c == Criterion::PercolationAdjacency || c == Criterion::PercolationLaplacian;
    if ((synthetic && needs_graph) || (!synthetic && c == Criterion::SpectralNorm) || (needs_host && !percolation_kind)) {
      throw InvalidArgument(std::string("criterion '") + to_string(c) + "' does not apply to model kind '" +
                            to_string(config.model.kind) + "'");
    }
  }

  ExperimentSummary summary;
  summary.config = config.echo;
  summary.master_seed = config.master_seed;
  summary.trials = config.trials;
  summary.epsilon = config.epsilon;
  summary.model.kind = to_string(config.model.kind);

  std::optional<AdjacencyModel> adj;
  std::optional<LaplacianModel> lap;
  std::optional<PercolationModel> perc;
  DegreeProfile profile;

  if (built.pm) {
    const ProbabilityMatrix& pm = *built.pm;
    profile = degrees(pm);
    summary.model.n = pm.n();
    summary.model.max_degree = profile.max_expected;
    summary.model.min_degree = profile.min_expected;
    if (has(criteria, Criterion::Adjacency)) adj.emplace(pm);
    const bool needs_split = has(criteria, Criterion::Laplacian) || has(criteria, Criterion::Eigvec) ||
                             has(criteria, Criterion::PercolationLaplacian);
    if (needs_split) {
      const double tau = config.tau.value_or(default_tau(pm.n()));
      lap.emplace(pm, tau);
      summary.model.tau = tau;
      summary.model.k = lap->split.k;
      summary.model.lambda_square_sum = lap->split.lambda_square_sum();
      summary.model.laplacian_bound = lap->bound;
    }
    if (built.host && (has(criteria, Criterion::PercolationAdjacency) || has(criteria, Criterion::PercolationLaplacian))) {
      perc.emplace(*built.host, config.model.p);
    }
  } else {
    summary.model.n = built.profile->n();
    summary.model.max_degree = built.profile->max_row_sum;
    summary.model.min_degree = built.profile->variance.rowwise().sum().minCoeff();
  }

  std::vector<TrialReport> reports(static_cast<std::size_t>(config.trials));
  detail::parallel_for(config.trials, config.workers, [&](Index t) {
    TrialReport r;
    r.trial = t;
    r.seed = derive_seed(config.master_seed, static_cast<std::uint64_t>(t));
    if (built.profile) {
      r.spectral_norm_ratio = spectral_norm_trial(*built.profile, r.seed).ratio;
    }
    if (adj) {
      const AdjacencyTrial a = adjacency_trial(*adj, r.seed);
      r.adjacency_ratio = a.ratio;
      r.adjacency_weyl_gap = a.weyl_gap;
      r.weyl_ok = r.weyl_ok && a.weyl_gap <= a.ratio + 1e-8;
    }
    if (has(criteria, Criterion::Degree)) {
      const DegreeTrial d = degree_concentration_trial(*built.pm, r.seed);
      r.degree_dev = d.degree_dev;
      r.degree_ok = d.pass;
    }
    if (lap && (has(criteria, Criterion::Laplacian) || has(criteria, Criterion::Scaling))) {
      const LaplacianTrial l = laplacian_trial(*lap, r.seed);
      r.resamples = l.resamples;
      r.aborted = l.aborted;
      if (!l.aborted) {
        if (has(criteria, Criterion::Laplacian)) {
          r.laplacian_gap = l.gap;
          r.laplacian_norm_diff = l.norm_diff;
          r.m_norms = l.m_norms;
          r.identity_residual = l.identity_residual;
          r.weyl_ok = r.weyl_ok && l.weyl_ok;
          r.triangle_ok = l.triangle_ok;
        }
        if (has(criteria, Criterion::Scaling)) r.scaling_dev = l.scaling_dev;
      }
    } else if (has(criteria, Criterion::Scaling)) {
      const ProbabilityMatrix& pm = *built.pm;
      int used = 0;
      auto gs = sample_without_isolated(pm, r.seed, kMaxResamples, &used);
      r.resamples = used;
      if (gs) r.scaling_dev = scaling_deviation(degrees(pm, *gs));
      else r.aborted = true;
    }
    if (perc && has(criteria, Criterion::PercolationAdjacency)) {
      r.percolation_adjacency_gap = percolation_adjacency_trial(*perc, r.seed).gap;
    }
    if (perc && has(criteria, Criterion::PercolationLaplacian) && perc->host_min_degree > 0.0 && perc->p > 0.0) {
      const PercolationTrial pt = percolation_laplacian_trial(*perc, r.seed);
      if (pt.aborted) r.aborted = true;
      else r.percolation_laplacian_gap = pt.gap;
    }
    reports[static_cast<std::size_t>(t)] = std::move(r);
  });

  for (const auto& r : reports) summary.aborted += r.aborted ? 1 : 0;

  auto record = [&](const std::string& name, std::optional<double> TrialReport::*field) {
    const auto v = detail::collect(reports, field);
    if (!v.empty()) summary.quantiles[name] = summarize(v);
  };
  record("adjacency_ratio", &TrialReport::adjacency_ratio);
  record("adjacency_weyl_gap", &TrialReport::adjacency_weyl_gap);
  record("laplacian_gap", &TrialReport::laplacian_gap);
  record("laplacian_norm_diff", &TrialReport::laplacian_norm_diff);
  record("identity_residual", &TrialReport::identity_residual);
  record("degree_dev", &TrialReport::degree_dev);
  record("scaling_dev", &TrialReport::scaling_dev);
  record("spectral_norm_ratio", &TrialReport::spectral_norm_ratio);
  record("percolation_adjacency_gap", &TrialReport::percolation_adjacency_gap);
  record("percolation_laplacian_gap", &TrialReport::percolation_laplacian_gap);
  for (std::size_t i = 0; i < 4; ++i) {
    std::vector<double> v;
    for (const auto& r : reports) {
      if (r.m_norms) v.push_back((*r.m_norms)[i]);
    }
    if (!v.empty()) summary.quantiles["m" + std::to_string(i + 1) + "_norm"] = summarize(v);
  }

  const double eps = config.epsilon;
  const auto q95 = [&](const std::string& name) -> std::optional<double> {
    auto it = summary.quantiles.find(name);
    if (it == summary.quantiles.end()) return std::nullopt;
    return it->second.q95;
  };
  const Index n = summary.model.n;
  const double delta = summary.model.min_degree;

  for (Criterion c : criteria) {
    CriterionResult res;
    res.criterion = c;
    switch (c) {
      case Criterion::Adjacency: {
        res.statistic = "q95(adjacency_ratio)";
        res.threshold = summary.model.adjacency_bound + eps;
        res.value = q95("adjacency_ratio").value_or(0.0);
        res.hypothesis_ok = adj->hypothesis_ok;
        const bool weyl = std::all_of(reports.begin(), reports.end(), [](const TrialReport& r) {
          return !r.adjacency_ratio || *r.adjacency_weyl_gap <= *r.adjacency_ratio + 1e-8;
        });
        res.details["weyl_consistent"] = weyl ? 1.0 : 0.0;
        res.pass = weyl && res.value <= res.threshold;
        break;
      }
      case Criterion::Laplacian: {
        res.statistic = "q95(laplacian_gap)";
        res.threshold = lap->bound + eps;
        res.hypothesis_ok = lap->hypothesis_ok;
        const auto v = q95("laplacian_gap");
        res.value = v.value_or(0.0);
        double worst_residual = 0.0;
        bool audits = true;
        for (const auto& r : reports) {
          if (!r.laplacian_gap) continue;
          worst_residual = std::max(worst_residual, *r.identity_residual);
          audits = audits && r.weyl_ok && r.triangle_ok;
        }
        res.details["max_identity_residual"] = worst_residual;
        res.details["audits_ok"] = audits ? 1.0 : 0.0;
        res.details["aborted"] = static_cast<double>(summary.aborted);
        res.pass = v.has_value() && audits && worst_residual <= 1e-8 && res.value <= res.threshold;
        break;
      }
      case Criterion::Degree: {
        Index failures = 0;
        for (const auto& r : reports) failures += r.degree_ok ? 0 : 1;
        const double expected_failures = static_cast<double>(config.trials) / (static_cast<double>(n) * n);
        res.statistic = "failures(degree_dev > 3)";
        res.value = static_cast<double>(failures);
        res.threshold = std::max(1.0, std::ceil(expected_failures));
        res.hypothesis_ok = delta >= std::log(static_cast<double>(n));
        res.details["max_degree_dev"] = summary.quantiles.at("degree_dev").max;
        res.pass = res.value <= res.threshold;
        break;
      }
      case Criterion::Eigvec: {
        const EigvecCheck ec = check_eigvec_products(lap->split, lap->profile);
        res.statistic = "max(|1-mu|*||phi||_inf)";
        res.value = ec.max_product;
        res.threshold = ec.bound + 1e-10;
        res.pass = ec.pass;
        break;
      }
      case Criterion::Scaling: {
        res.statistic = "q95(scaling_dev)";
        res.threshold = 2.0 * std::sqrt(std::log(static_cast<double>(n)) / delta);
        const auto v = q95("scaling_dev");
        res.value = v.value_or(0.0);
        res.hypothesis_ok = delta >= std::log(static_cast<double>(n));
        res.pass = v.has_value() && res.value <= res.threshold;
        break;
      }
      case Criterion::XStatistics: {
        const XStatistics xs = x_statistics(*built.pm, config.x_trials, derive_seed(config.master_seed, ~0ULL));
        const XCheck xc = check_x_statistics(xs, eps, xs.covariance_exact);
        const XCheck xr = check_x_statistics(xs, eps, xs.covariance_reference);
        res.statistic = "max(var(X_i))";
        res.value = xc.max_variance;
        res.threshold = 2.0 + eps;
        res.hypothesis_ok = delta >= std::log(static_cast<double>(n));
        res.details["max_mean"] = xc.max_mean;
        res.details["mean_ok"] = xc.mean_ok ? 1.0 : 0.0;
        res.details["variance_ok"] = xc.variance_ok ? 1.0 : 0.0;
        res.details["covariance_violations"] = static_cast<double>(xc.cov_violations);
        res.details["covariance_max_z"] = xc.max_cov_z;
        res.details["reference_covariance_violations"] = static_cast<double>(xr.cov_violations);
        res.pass = xc.mean_ok && xc.variance_ok && xc.covariance_ok;
        break;
      }
      case Criterion::WeightedTail: {
        std::vector<double> a = config.tail_weights;
        if (a.empty()) a.assign(static_cast<std::size_t>(n), 1.0);
        const TailEstimate te = weighted_x_tail(*built.pm, a, config.tail_eta, config.x_trials,
                                                derive_seed(config.master_seed, ~0ULL - 1), eps);
        res.statistic = "Pr(X >= threshold)";
        res.value = te.frequency;
        res.threshold = te.bound;
        res.details["standard_error"] = te.standard_error;
        res.details["tail_threshold"] = te.threshold;
        res.pass = te.pass;
        break;
      }
      case Criterion::PercolationAdjacency: {
        res.statistic = "q95(percolation_adjacency_gap)";
        res.threshold = 2.0 + eps;
        const double scale = perc->p * perc->host_max_degree;
        res.hypothesis_ok = scale >= log4(n);
        res.value = q95("percolation_adjacency_gap").value_or(0.0);
        res.pass = res.value <= res.threshold;
        break;
      }
      case Criterion::PercolationLaplacian: {
        res.statistic = "q95(percolation_laplacian_gap)";
        res.threshold = lap->bound + eps;
        res.hypothesis_ok = perc->p * perc->host_min_degree >= std::max(static_cast<double>(lap->split.k), log4(n));
        const auto v = q95("percolation_laplacian_gap");
        res.value = v.value_or(0.0);
        res.details["expected_laplacian_identity_error"] = perc->identity_error;
        res.pass = v.has_value() && perc->identity_error <= 1e-12 && res.value <= res.threshold;
        break;
      }
      case Criterion::SpectralNorm: {
        res.statistic = "q95(spectral_norm_ratio)";
        res.threshold = 2.0 + eps;
        res.hypothesis_ok = built.profile->max_row_sum >= built.profile->K * built.profile->K * log4(n);
        res.value = q95("spectral_norm_ratio").value_or(0.0);
        res.pass = res.value <= res.threshold;
        break;
      }
    }
    summary.criteria.push_back(std::move(res));
  }
  summary.reports = std::move(reports);
  return summary;
}

}  // namespace eirg
