#pragma once

// Single-trial measurements and tail calculators that confront the
// concentration bounds with finite-n samples. Every trial is a pure function
// of its inputs and seed; models are prepared once and shared read-only.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <utility>
#include <vector>

#include "eirg/error.hpp"
#include "eirg/graph_matrices.hpp"
#include "eirg/linalg.hpp"
#include "eirg/models.hpp"
#include "eirg/rng.hpp"

namespace eirg {

// ---------------------------------------------------------------------------
// Small statistics helpers

/// Linear-interpolation quantile (Hyndman-Fan type 7) of unsorted data.
inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw InvalidArgument("quantile of empty sample");
  std::sort(v.begin(), v.end());
  const double h = (static_cast<double>(v.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const auto hi = std::min(lo + 1, v.size() - 1);
  return v[lo] + (h - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

struct Quantiles {
  double median = 0.0;
  double q95 = 0.0;
  double max = 0.0;
};

inline Quantiles summarize(const std::vector<double>& v) {
  Quantiles q;
  q.median = quantile(v, 0.5);
  q.q95 = quantile(v, 0.95);
  q.max = *std::max_element(v.begin(), v.end());
  return q;
}

/// ln^4 n, the polylog scale the degree hypotheses are compared against.
inline double log4(Index n) { return std::pow(std::log(static_cast<double>(n)), 4); }

// ---------------------------------------------------------------------------
// Chernoff tails

struct ChernoffTails {
  double lower = 1.0;  // bound on Pr(X <= E X - lambda)
  double upper = 1.0;  // bound on Pr(X >= E X + lambda)
};

inline ChernoffTails chernoff_tails(double expectation, double lambda) {
  if (!(expectation > 0.0)) throw InvalidArgument("chernoff_tails: expectation must be positive");
  if (!(lambda >= 0.0)) throw InvalidArgument("chernoff_tails: lambda must be nonnegative");
  ChernoffTails t;
  t.lower = std::exp(-lambda * lambda / (2.0 * expectation));
  t.upper = std::exp(-lambda * lambda / (2.0 * (expectation + lambda / 3.0)));
  return t;
}

// ---------------------------------------------------------------------------
// Degree concentration

struct DegreeTrial {
  double degree_dev = 0.0;  // max_i |d_i - t_i| / sqrt(t_i ln n)
  bool pass = true;         // degree_dev <= 3
  bool hypothesis_ok = true;  // t_i >= ln n for all i
};

/// max_i |d_i - t_i| / sqrt(t_i ln n); vertices with t_i = 0 have d_i = 0 and are skipped.
inline double degree_deviation(const Vector& realized, const Vector& expected) {
  const double logn = std::log(static_cast<double>(expected.size()));
  double dev = 0.0;
  for (Index i = 0; i < expected.size(); ++i) {
    const double diff = std::abs(realized[i] - expected[i]);
    if (diff == 0.0) continue;
    const double scale = std::sqrt(expected[i] * logn);
    dev = std::max(dev, scale > 0.0 ? diff / scale : std::numeric_limits<double>::infinity());
  }
  return dev;
}

inline DegreeTrial degree_concentration_trial(const ProbabilityMatrix& pm, std::uint64_t seed) {
  const DegreeProfile dp = degrees(pm);
  DegreeTrial out;
  out.hypothesis_ok = dp.min_expected >= std::log(static_cast<double>(pm.n()));
  out.degree_dev = degree_deviation(sample_degrees(pm, seed), dp.expected);
  out.pass = out.degree_dev <= 3.0;
  return out;
}

// ---------------------------------------------------------------------------
// Adjacency spectrum

/// Model-level data shared by adjacency trials.
struct AdjacencyModel {
  ProbabilityMatrix pm;
  double max_degree = 0.0;               // Delta
  std::vector<double> expected_spectrum;  // eigenvalues of Abar
  bool hypothesis_ok = false;            // Delta >= ln^4 n

  explicit AdjacencyModel(ProbabilityMatrix model) : pm(std::move(model)) {
    const DegreeProfile dp = degrees(pm);
    max_degree = dp.max_expected;
    expected_spectrum = eigenvalues(SymmetricMatrix(pm.matrix()));
    hypothesis_ok = max_degree >= log4(pm.n());
  }
};

struct AdjacencyTrial {
  double ratio = 0.0;     // ||A - Abar|| / sqrt(Delta)
  double weyl_gap = 0.0;  // max_i |lambda_i(A) - lambda_i(Abar)| / sqrt(Delta)
  bool hypothesis_ok = false;
};

inline AdjacencyTrial adjacency_trial(const AdjacencyModel& model, std::uint64_t seed) {
  AdjacencyTrial out;
  out.hypothesis_ok = model.hypothesis_ok;
  if (!(model.max_degree > 0.0)) return out;  // empty model: A == Abar == 0
  const GraphSample gs = sample(model.pm, seed);
  const double scale = 1.0 / std::sqrt(model.max_degree);
  out.ratio = spectral_norm(centered_adjacency(gs, model.pm)) * scale;
  out.weyl_gap = max_sorted_gap(eigenvalues(SymmetricMatrix(gs.adjacency())), model.expected_spectrum) * scale;
  return out;
}

inline AdjacencyTrial adjacency_trial(const ProbabilityMatrix& pm, std::uint64_t seed) {
  return adjacency_trial(AdjacencyModel(pm), seed);
}

// ---------------------------------------------------------------------------
// Laplacian spectrum

inline constexpr int kMaxResamples = 3;

/// Model-level data shared by Laplacian trials: the expected Laplacian, its
/// spectral split at tau, and the resulting bound constant.
struct LaplacianModel {
  ProbabilityMatrix pm;
  DegreeProfile profile;
  SpectralSplit split;
  std::vector<double> expected_spectrum;  // eigenvalues of Lbar, sorted
  double bound = 2.0;                     // 2 + sqrt(sum over Lambda of (1 - lambda)^2)
  bool hypothesis_ok = false;             // delta >= max(k, ln^4 n)

  LaplacianModel(ProbabilityMatrix model, double tau) : pm(std::move(model)) {
    profile = degrees(pm);
    for (Index i = 0; i < pm.n(); ++i) {
      if (!(profile.expected[i] > 0.0)) throw IsolatedVertex(static_cast<std::size_t>(i), "expected");
    }
    split = spectral_split(pm, tau);
    expected_spectrum = split.sorted_laplacian_spectrum();
    bound = 2.0 + std::sqrt(split.lambda_square_sum());
    hypothesis_ok = profile.min_expected >= std::max(static_cast<double>(split.k), log4(pm.n()));
  }

  double min_degree() const noexcept { return profile.min_expected; }
};

struct LaplacianTrial {
  std::uint64_t seed = 0;  // seed of the sample actually used
  int resamples = 0;
  bool aborted = false;
  double gap = 0.0;                // sqrt(delta) * max_i |lambda_i(L) - lambda_i(Lbar)|
  double norm_diff = 0.0;          // sqrt(delta) * ||L - Lbar||
  std::array<double, 4> m_norms{};  // sqrt(delta) * ||M_i||
  double identity_residual = 0.0;  // max-abs of (M1+..+M4) - (Lbar - L)
  double scaling_dev = 0.0;        // max_i |sqrt(t_i/d_i) - 1|
  double degree_dev = 0.0;
  bool weyl_ok = true;      // unscaled gap <= ||L - Lbar|| + 1e-8
  bool triangle_ok = true;  // ||L - Lbar|| <= sum ||M_i|| + 1e-8
  bool hypothesis_ok = false;
};

/// Draws sample(pm, seed); when some vertex is isolated, retries with
/// derive_seed(seed, r) for r = 1..max_resamples. nullopt if all fail.
inline std::optional<GraphSample> sample_without_isolated(const ProbabilityMatrix& pm, std::uint64_t seed,
                                                          int max_resamples, int* resamples_used) {
  for (int r = 0; r <= max_resamples; ++r) {
    const std::uint64_t s = r == 0 ? seed : derive_seed(seed, static_cast<std::uint64_t>(r));
    GraphSample gs = sample(pm, s);
    const Vector d = gs.adjacency().rowwise().sum();
    if (resamples_used) *resamples_used = r;
    if (d.minCoeff() > 0.0) return gs;
  }
  return std::nullopt;
}

inline LaplacianTrial laplacian_trial(const LaplacianModel& model, std::uint64_t seed,
                                      int max_resamples = kMaxResamples) {
  LaplacianTrial out;
  out.hypothesis_ok = model.hypothesis_ok;
  auto gs = sample_without_isolated(model.pm, seed, max_resamples, &out.resamples);
  if (!gs) {
    out.aborted = true;
    out.seed = seed;
    return out;
  }
  out.seed = gs->seed();
  const double root_delta = std::sqrt(model.min_degree());
  const LaplacianPair lp = laplacians(*gs, model.pm);
  const Decomposition dec = decompose(*gs, model.pm, model.split);
  const DegreeProfile dp = degrees(model.pm, *gs);

  const double gap = max_sorted_gap(eigenvalues(lp.L), model.expected_spectrum);
  const double norm_diff = spectral_norm(lp.L - lp.Lbar);
  const double norm_sum = dec.norms[0] + dec.norms[1] + dec.norms[2] + dec.norms[3];

  out.gap = root_delta * gap;
  out.norm_diff = root_delta * norm_diff;
  for (std::size_t i = 0; i < 4; ++i) out.m_norms[i] = root_delta * dec.norms[i];
  out.identity_residual = decomposition_residual(dec, lp);
  out.scaling_dev = scaling_deviation(dp);
  out.degree_dev = degree_deviation(*dp.realized, dp.expected);
  out.weyl_ok = gap <= norm_diff + 1e-8;
  out.triangle_ok = norm_diff <= norm_sum + 1e-8;
  return out;
}

inline LaplacianTrial laplacian_trial(const ProbabilityMatrix& pm, std::uint64_t seed, double tau) {
  return laplacian_trial(LaplacianModel(pm, tau), seed);
}

/// Products |1 - mu_i| * ||phi_i||_inf checked against 1/sqrt(delta) + 1e-10.
struct EigvecCheck {
  double max_product = 0.0;
  double bound = 0.0;
  bool pass = true;
};

inline EigvecCheck check_eigvec_products(const SpectralSplit& split, const DegreeProfile& dp) {
  EigvecCheck c;
  c.bound = 1.0 / std::sqrt(dp.min_expected);
  for (double v : eigvec_infnorm_products(split, dp)) c.max_product = std::max(c.max_product, v);
  c.pass = c.max_product <= c.bound + 1e-10;
  return c;
}

// ---------------------------------------------------------------------------
// Bond percolation of a fixed host graph

struct PercolationModel {
  Matrix host;
  double p;
  ProbabilityMatrix pm;
  double host_max_degree = 0.0;
  double host_min_degree = 0.0;
  std::vector<double> host_adjacency_spectrum;
  std::vector<double> host_laplacian_spectrum;  // empty when the host has an isolated vertex
  double identity_error = 0.0;                  // max-abs of Lbar(G_p) - L(G)

  PercolationModel(Matrix host_adj, double prob)
      : host(std::move(host_adj)), p(prob), pm(percolation(host, prob)) {
    const Vector deg = host.rowwise().sum();
    host_max_degree = deg.maxCoeff();
    host_min_degree = deg.minCoeff();
    host_adjacency_spectrum = eigenvalues(SymmetricMatrix(host));
    if (host_min_degree > 0.0 && p > 0.0) {
      const SymmetricMatrix host_l = graph_laplacian(host);
      host_laplacian_spectrum = eigenvalues(host_l);
      identity_error = (expected_laplacian(pm) - host_l).max_abs();
    }
  }
};

struct PercolationTrial {
  double gap = 0.0;
  bool hypothesis_ok = false;
  bool aborted = false;
  int resamples = 0;
};

/// max_i |lambda_i(A(G_p)) - p lambda_i(A(G))| / sqrt(p Delta_G).
inline PercolationTrial percolation_adjacency_trial(const PercolationModel& model, std::uint64_t seed) {
  PercolationTrial out;
  const double scale = model.p * model.host_max_degree;
  out.hypothesis_ok = model.host_max_degree >= log4(model.pm.n()) && scale >= log4(model.pm.n());
  if (!(scale > 0.0)) return out;
  const GraphSample gs = sample(model.pm, seed);
  std::vector<double> expected = model.host_adjacency_spectrum;
  for (double& x : expected) x *= model.p;
  out.gap = max_sorted_gap(eigenvalues(SymmetricMatrix(gs.adjacency())), expected) / std::sqrt(scale);
  return out;
}

inline PercolationTrial percolation_adjacency_trial(const Matrix& host_adj, double p, std::uint64_t seed) {
  return percolation_adjacency_trial(PercolationModel(host_adj, p), seed);
}

/// sqrt(p delta_G) * max_i |lambda_i(L(G_p)) - lambda_i(L(G))|.
inline PercolationTrial percolation_laplacian_trial(const PercolationModel& model, std::uint64_t seed,
                                                    int max_resamples = kMaxResamples) {
  if (!(model.host_min_degree > 0.0)) throw IsolatedVertex(0, "host");
  if (!(model.p > 0.0)) throw InvalidArgument("percolation_laplacian_trial: p must be positive");
  PercolationTrial out;
  const double scale = model.p * model.host_min_degree;
  out.hypothesis_ok = model.host_min_degree >= log4(model.pm.n()) && scale >= log4(model.pm.n());
  auto gs = sample_without_isolated(model.pm, seed, max_resamples, &out.resamples);
  if (!gs) {
    out.aborted = true;
    return out;
  }
  const SymmetricMatrix l = SymmetricMatrix::identity(gs->n()) - normalized_adjacency(*gs);
  out.gap = std::sqrt(scale) * max_sorted_gap(eigenvalues(l), model.host_laplacian_spectrum);
  return out;
}

inline PercolationTrial percolation_laplacian_trial(const Matrix& host_adj, double p, std::uint64_t seed) {
  return percolation_laplacian_trial(PercolationModel(host_adj, p), seed);
}

// ---------------------------------------------------------------------------
// Heterogeneous-variance symmetric matrices (general entry bound K)

/// Fixed per-entry scales s_ij in [0,1]; entries are b_ij = K s_ij U_ij with
/// U_ij uniform on [-1,1], so |b_ij| <= K and Var(b_ij) = K^2 s_ij^2 / 3.
struct VarianceProfile {
  Matrix scale;
  double K = 1.0;
  Matrix variance;
  double max_row_sum = 0.0;  // Delta = max_i sum_j sigma_ij^2

  Index n() const noexcept { return scale.rows(); }
};

inline VarianceProfile synthetic_variance_profile(Index n, double K, std::uint64_t profile_seed) {
  if (n < 2) throw InvalidArgument("synthetic_variance_profile: n must be >= 2");
  if (!(K > 0.0)) throw InvalidArgument("synthetic_variance_profile: K must be positive");
  VarianceProfile vp;
  vp.K = K;
  vp.scale = Matrix::Zero(n, n);
  SplitMix64 rng(profile_seed);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) vp.scale(i, j) = vp.scale(j, i) = rng.uniform();
  }
  vp.variance = (K * K / 3.0) * vp.scale.cwiseProduct(vp.scale);
  vp.max_row_sum = vp.variance.rowwise().sum().maxCoeff();
  return vp;
}

inline SymmetricMatrix sample_synthetic(const VarianceProfile& vp, std::uint64_t seed) {
  const Index n = vp.n();
  Matrix b = Matrix::Zero(n, n);
  SplitMix64 rng(seed);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      b(i, j) = b(j, i) = vp.K * vp.scale(i, j) * (2.0 * rng.uniform() - 1.0);
    }
  }
  return SymmetricMatrix(std::move(b));
}

struct SpectralNormTrial {
  double ratio = 0.0;  // ||B|| / sqrt(Delta)
  bool hypothesis_ok = false;  // Delta >= K^2 ln^4 n
};

inline SpectralNormTrial spectral_norm_trial(const VarianceProfile& vp, std::uint64_t seed) {
  SpectralNormTrial out;
  out.hypothesis_ok = vp.max_row_sum >= vp.K * vp.K * log4(vp.n());
  out.ratio = spectral_norm(sample_synthetic(vp, seed)) / std::sqrt(vp.max_row_sum);
  return out;
}

// ---------------------------------------------------------------------------
// Normalized squared degree deviations X_i = (d_i - t_i)^2 / t_i

struct XStatistics {
  Index trials = 0;
  Vector expected_mean;  // exact E X_i = sum_j p_ij (1 - p_ij) / t_i
  Vector mean;
  Vector mean_se;
  Vector variance;
  Vector variance_se;
  Matrix covariance;     // empirical Cov(X_i, X_j)
  Matrix covariance_se;
  /// p_ij (1 - p_ij)(1 - 2 p_ij)^2 / (t_i t_j), the exact covariance for i != j.
  Matrix covariance_exact;
  /// p_ij (1 - p_ij)(1 - 2 p_ij) / (t_i t_j), the commonly quoted closed form.
  /// It agrees with the exact value only when p_ij is 0, 1/2 or 1.
  Matrix covariance_reference;
};

/// Monte Carlo moments of X_i over `trials` samples; trial r uses
/// derive_seed(seed, r).
inline XStatistics x_statistics(const ProbabilityMatrix& pm, Index trials, std::uint64_t seed) {
  if (trials < 2) throw InvalidArgument("x_statistics: need at least 2 trials");
  const DegreeProfile dp = degrees(pm);
  const Index n = pm.n();
  for (Index i = 0; i < n; ++i) {
    if (!(dp.expected[i] > 0.0)) throw IsolatedVertex(static_cast<std::size_t>(i), "expected");
  }
  const Matrix& p = pm.matrix();
  const Vector& t = dp.expected;

  XStatistics xs;
  xs.trials = trials;
  xs.expected_mean = (p.array() * (1.0 - p.array())).matrix().rowwise().sum().cwiseQuotient(t);

  // Shifted by the exact mean for numerical stability.
  constexpr Index kBatch = 256;
  Vector s1 = Vector::Zero(n), s2 = Vector::Zero(n), s3 = Vector::Zero(n), s4 = Vector::Zero(n);
  Matrix cross = Matrix::Zero(n, n);     // sum y_i y_j
  Matrix cross_sq = Matrix::Zero(n, n);  // sum y_i^2 y_j^2
  Matrix batch(kBatch, n);
  for (Index start = 0; start < trials; start += kBatch) {
    const Index rows = std::min(kBatch, trials - start);
    for (Index r = 0; r < rows; ++r) {
      const Vector d = sample_degrees(pm, derive_seed(seed, static_cast<std::uint64_t>(start + r)));
      for (Index i = 0; i < n; ++i) {
        const double dev = d[i] - t[i];
        batch(r, i) = dev * dev / t[i] - xs.expected_mean[i];
      }
    }
    const auto y = batch.topRows(rows);
    const Matrix y2 = y.cwiseProduct(y);
    s1 += y.colwise().sum().transpose();
    s2 += y2.colwise().sum().transpose();
    s3 += y2.cwiseProduct(y).colwise().sum().transpose();
    s4 += y2.cwiseProduct(y2).colwise().sum().transpose();
    cross.noalias() += y.transpose() * y;
    cross_sq.noalias() += y2.transpose() * y2;
  }

  const double T = static_cast<double>(trials);
  const Vector m1 = s1 / T;  // mean of y
  xs.mean = xs.expected_mean + m1;
  xs.variance.resize(n);
  xs.variance_se.resize(n);
  xs.mean_se.resize(n);
  for (Index i = 0; i < n; ++i) {
    const double e2 = s2[i] / T, e3 = s3[i] / T, e4 = s4[i] / T;
    const double m = m1[i];
    const double var = std::max(0.0, e2 - m * m);
    const double mu4 = e4 - 4.0 * m * e3 + 6.0 * m * m * e2 - 3.0 * m * m * m * m;
    xs.variance[i] = var * T / (T - 1.0);
    xs.mean_se[i] = std::sqrt(xs.variance[i] / T);
    xs.variance_se[i] = std::sqrt(std::max(0.0, mu4 - var * var) / T);
  }
  xs.covariance.resize(n, n);
  xs.covariance_se.resize(n, n);
  xs.covariance_exact.resize(n, n);
  xs.covariance_reference.resize(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) {
      const double c = cross(i, j) / T - m1[i] * m1[j];
      xs.covariance(i, j) = c * T / (T - 1.0);
      const double second = cross_sq(i, j) / T;
      const double raw = cross(i, j) / T;
      xs.covariance_se(i, j) = std::sqrt(std::max(0.0, second - raw * raw) / T);
      const double q = p(i, j);
      const double tt = t[i] * t[j];
      xs.covariance_exact(i, j) = q * (1.0 - q) * (1.0 - 2.0 * q) * (1.0 - 2.0 * q) / tt;
      xs.covariance_reference(i, j) = q * (1.0 - q) * (1.0 - 2.0 * q) / tt;
    }
  }
  return xs;
}

struct XCheck {
  bool mean_ok = true;        // mean_i <= 1 + 3 SE
  bool variance_ok = true;    // variance_i <= 2 + epsilon + 3 SE
  bool covariance_ok = true;  // |cov_ij - target_ij| <= 5 SE for i != j
  double max_mean = 0.0;
  double max_variance = 0.0;
  double max_cov_z = 0.0;     // max |cov - target| / SE
  Index cov_violations = 0;
};

inline XCheck check_x_statistics(const XStatistics& xs, double epsilon, const Matrix& target_covariance) {
  XCheck c;
  const Index n = xs.mean.size();
  for (Index i = 0; i < n; ++i) {
    c.max_mean = std::max(c.max_mean, xs.mean[i]);
    c.max_variance = std::max(c.max_variance, xs.variance[i]);
    if (xs.mean[i] > 1.0 + 3.0 * xs.mean_se[i]) c.mean_ok = false;
    if (xs.variance[i] > 2.0 + epsilon + 3.0 * xs.variance_se[i]) c.variance_ok = false;
  }
  for (Index j = 0; j < n; ++j) {
    for (Index i = j + 1; i < n; ++i) {
      const double diff = std::abs(xs.covariance(i, j) - target_covariance(i, j));
      const double se = xs.covariance_se(i, j);
      if (diff > 5.0 * se + 1e-12) ++c.cov_violations;
      if (se > 0.0) c.max_cov_z = std::max(c.max_cov_z, diff / se);
    }
  }
  c.covariance_ok = c.cov_violations == 0;
  return c;
}

struct TailEstimate {
  double threshold = 0.0;  // sum a_i + eta sqrt(a_max sum a_i)
  double frequency = 0.0;  // empirical Pr(X >= threshold)
  double standard_error = 0.0;
  double bound = 0.0;      // (2 + epsilon) / eta^2
  bool pass = true;        // frequency <= bound + 3 SE
};

/// Empirical Pr(sum_i a_i X_i >= sum a + eta sqrt(a_max sum a)).
inline TailEstimate weighted_x_tail(const ProbabilityMatrix& pm, const std::vector<double>& a, double eta,
                                    Index trials, std::uint64_t seed, double epsilon = 0.3) {
  if (static_cast<Index>(a.size()) != pm.n()) throw DimensionMismatch("weighted_x_tail: weight vector size");
  if (!(eta > 0.0)) throw InvalidArgument("weighted_x_tail: eta must be positive");
  if (trials < 1) throw InvalidArgument("weighted_x_tail: trials must be positive");
  double total = 0.0, amax = 0.0;
  for (double x : a) {
    if (!(x >= 0.0)) throw InvalidArgument("weighted_x_tail: weights must be nonnegative");
    total += x;
    amax = std::max(amax, x);
  }
  if (!(total > 0.0)) throw InvalidArgument("weighted_x_tail: weights are all zero");
  const DegreeProfile dp = degrees(pm);

  TailEstimate te;
  te.threshold = total + eta * std::sqrt(amax * total);
  te.bound = (2.0 + epsilon) / (eta * eta);
  Index hits = 0;
  for (Index r = 0; r < trials; ++r) {
    const Vector d = sample_degrees(pm, derive_seed(seed, static_cast<std::uint64_t>(r)));
    double x = 0.0;
    for (Index i = 0; i < pm.n(); ++i) {
      if (a[i] == 0.0) continue;
      if (!(dp.expected[i] > 0.0)) throw IsolatedVertex(static_cast<std::size_t>(i), "expected");
      const double dev = d[i] - dp.expected[i];
      x += a[i] * dev * dev / dp.expected[i];
    }
    if (x >= te.threshold) ++hits;
  }
  const double T = static_cast<double>(trials);
  te.frequency = static_cast<double>(hits) / T;
  te.standard_error = std::sqrt(te.frequency * (1.0 - te.frequency) / T);
  te.pass = te.frequency <= te.bound + 3.0 * te.standard_error;
  return te;
}

}  // namespace eirg
