#pragma once

// Matrices attached to one (model, sample) pair: the centered adjacency,
// the realized and expected normalized Laplacians, the degree-rescaling
// transform f, the spectral split of the expected normalized adjacency and
// the four-term decomposition of the Laplacian deviation.

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "eirg/error.hpp"
#include "eirg/linalg.hpp"
#include "eirg/models.hpp"

namespace eirg {

struct LaplacianPair {
  SymmetricMatrix L;     // I - D^{-1/2} A D^{-1/2}
  SymmetricMatrix Lbar;  // I - T^{-1/2} Abar T^{-1/2}
};

/// Eigen-structure of T^{-1/2} Abar T^{-1/2} = I - Lbar, split at threshold tau.
struct SpectralSplit {
  Vector mu;     // eigenvalues of Lbar, ordered by |1 - mu| non-increasing
  Matrix phi;    // orthonormal eigenvectors, column i pairs with mu[i]
  Index k = 0;   // number of mu with |1 - mu| >= tau
  double tau = 0.0;
  SymmetricMatrix M;  // sum_{i<k} (1 - mu_i) phi_i phi_i^T
  SymmetricMatrix N;  // sum_{i>=k} (1 - mu_i) phi_i phi_i^T
  SymmetricMatrix normalized_expected;  // T^{-1/2} Abar T^{-1/2}

  std::vector<double> lambda() const { return {mu.data(), mu.data() + k}; }

  /// sum over Lambda of (1 - mu)^2.
  double lambda_square_sum() const {
    double s = 0.0;
    for (Index i = 0; i < k; ++i) s += (1.0 - mu[i]) * (1.0 - mu[i]);
    return s;
  }

  /// Spectrum of Lbar, sorted non-decreasing.
  std::vector<double> sorted_laplacian_spectrum() const {
    std::vector<double> s(mu.data(), mu.data() + mu.size());
    std::sort(s.begin(), s.end());
    return s;
  }
};

/// M1 = T^{-1/2}(A - Abar)T^{-1/2}, M2 = f(M1), M3 = f(N), M4 = f(M).
///
/// The four terms sum to D^{-1/2} A D^{-1/2} - T^{-1/2} Abar T^{-1/2},
/// which is Lbar - L. Only their norms enter the bounds, so the overall sign
/// is immaterial there, but identity checks must compare against Lbar - L.
struct Decomposition {
  std::array<SymmetricMatrix, 4> terms;
  std::array<double, 4> norms{};

  SymmetricMatrix sum() const { return terms[0] + terms[1] + terms[2] + terms[3]; }
};

namespace detail {

inline Vector inverse_sqrt(const Vector& deg, const char* which) {
  Vector s(deg.size());
  for (Index i = 0; i < deg.size(); ++i) {
    if (!(deg[i] > 0.0)) throw IsolatedVertex(static_cast<std::size_t>(i), which);
    s[i] = 1.0 / std::sqrt(deg[i]);
  }
  return s;
}

/// x_ij * (s_i * s_j); the scale factor commutes, so symmetry is exact.
inline Matrix scale_both_sides(const Matrix& x, const Vector& s) {
  const Index n = x.rows();
  Matrix out(n, n);
  for (Index j = 0; j < n; ++j) {
    for (Index i = 0; i < n; ++i) out(i, j) = x(i, j) * (s[i] * s[j]);
  }
  return out;
}

inline void require_same_size(const GraphSample& gs, const ProbabilityMatrix& pm) {
  if (gs.n() != pm.n()) throw DimensionMismatch("sample and model have different vertex counts");
}

}  // namespace detail

/// Default Lambda threshold 1/(ln ln max(n,27) * sqrt(ln n)).
inline double default_tau(Index n) {
  if (n < 2) throw InvalidArgument("default_tau: n must be >= 2");
  const double nn = static_cast<double>(n);
  return 1.0 / (std::log(std::log(std::max(nn, 27.0))) * std::sqrt(std::log(nn)));
}

/// B = A - Abar.
inline SymmetricMatrix centered_adjacency(const GraphSample& gs, const ProbabilityMatrix& pm) {
  detail::require_same_size(gs, pm);
  return SymmetricMatrix(gs.adjacency() - pm.matrix());
}

/// T^{-1/2} Abar T^{-1/2}.
inline SymmetricMatrix normalized_expected_adjacency(const ProbabilityMatrix& pm) {
  const DegreeProfile dp = degrees(pm);
  return SymmetricMatrix(detail::scale_both_sides(pm.matrix(), detail::inverse_sqrt(dp.expected, "expected")));
}

/// D^{-1/2} A D^{-1/2}.
inline SymmetricMatrix normalized_adjacency(const GraphSample& gs) {
  const Vector d = gs.adjacency().rowwise().sum();
  return SymmetricMatrix(detail::scale_both_sides(gs.adjacency(), detail::inverse_sqrt(d, "realized")));
}

inline SymmetricMatrix expected_laplacian(const ProbabilityMatrix& pm) {
  return SymmetricMatrix::identity(pm.n()) - normalized_expected_adjacency(pm);
}

/// Normalized Laplacian of a fixed graph.
inline SymmetricMatrix graph_laplacian(const Matrix& adj) {
  validate_adjacency(adj);
  return SymmetricMatrix::identity(adj.rows()) - normalized_adjacency(GraphSample(adj, 0));
}

inline LaplacianPair laplacians(const GraphSample& gs, const ProbabilityMatrix& pm) {
  detail::require_same_size(gs, pm);
  LaplacianPair out;
  out.Lbar = expected_laplacian(pm);
  out.L = SymmetricMatrix::identity(gs.n()) - normalized_adjacency(gs);
  return out;
}

/// f(B) = D^{-1/2} T^{1/2} B T^{1/2} D^{-1/2} - B.
inline SymmetricMatrix f_transform(const SymmetricMatrix& b, const DegreeProfile& d) {
  if (!d.realized) throw InvalidArgument("f_transform: degree profile has no realized degrees");
  if (b.n() != d.n()) throw DimensionMismatch("f_transform: dimension mismatch");
  const Vector& real = *d.realized;
  Vector s(d.n());
  for (Index i = 0; i < d.n(); ++i) {
    if (!(real[i] > 0.0)) throw IsolatedVertex(static_cast<std::size_t>(i), "realized");
    if (!(d.expected[i] > 0.0)) throw IsolatedVertex(static_cast<std::size_t>(i), "expected");
    s[i] = std::sqrt(d.expected[i] / real[i]);
  }
  const Matrix& x = b.matrix();
  Matrix out(b.n(), b.n());
  for (Index j = 0; j < b.n(); ++j) {
    for (Index i = 0; i < b.n(); ++i) out(i, j) = x(i, j) * (s[i] * s[j]) - x(i, j);
  }
  return SymmetricMatrix(std::move(out));
}

/// Eigen-split of T^{-1/2} Abar T^{-1/2}. `tau` > 0; any tau above 1
/// yields an empty Lambda since |1 - mu| <= 1 for every mu.
inline SpectralSplit spectral_split(const ProbabilityMatrix& pm, double tau) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw InvalidArgument("spectral_split: tau must be positive");
  SpectralSplit out;
  out.tau = tau;
  out.normalized_expected = normalized_expected_adjacency(pm);
  const EigenDecomposition ed = eigen_decompose(out.normalized_expected);
  const Index n = pm.n();

  // ed.values are 1 - mu in ascending order; reorder by |1 - mu| descending.
  std::vector<Index> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) {
    return std::abs(ed.values[a]) > std::abs(ed.values[b]);
  });
  out.mu.resize(n);
  out.phi.resize(n, n);
  Vector nu(n);
  for (Index i = 0; i < n; ++i) {
    nu[i] = ed.values[order[i]];
    out.mu[i] = 1.0 - nu[i];
    out.phi.col(i) = ed.vectors.col(order[i]);
  }
  out.k = 0;
  while (out.k < n && std::abs(nu[out.k]) >= tau) ++out.k;

  const Index k = out.k;
  const auto head = out.phi.leftCols(k);
  const auto tail = out.phi.rightCols(n - k);
  Matrix m = head * nu.head(k).asDiagonal() * head.transpose();
  Matrix r = tail * nu.tail(n - k).asDiagonal() * tail.transpose();
  out.M = SymmetricMatrix::symmetrized(m);
  out.N = SymmetricMatrix::symmetrized(r);
  return out;
}

/// The four-term decomposition, reusing an existing split of the same model.
inline Decomposition decompose(const GraphSample& gs, const ProbabilityMatrix& pm, const SpectralSplit& split) {
  detail::require_same_size(gs, pm);
  if (split.mu.size() != pm.n()) throw DimensionMismatch("decompose: split built for another model");
  const DegreeProfile dp = degrees(pm, gs);
  const Vector tinv = detail::inverse_sqrt(dp.expected, "expected");
  detail::inverse_sqrt(*dp.realized, "realized");

  Decomposition out;
  out.terms[0] = SymmetricMatrix(detail::scale_both_sides(gs.adjacency() - pm.matrix(), tinv));
  out.terms[1] = f_transform(out.terms[0], dp);
  out.terms[2] = f_transform(split.N, dp);
  out.terms[3] = f_transform(split.M, dp);
  for (std::size_t i = 0; i < 4; ++i) out.norms[i] = spectral_norm(out.terms[i]);
  return out;
}

inline Decomposition decompose(const GraphSample& gs, const ProbabilityMatrix& pm, double tau) {
  return decompose(gs, pm, spectral_split(pm, tau));
}

/// max-abs entry of (M1 + M2 + M3 + M4) - (Lbar - L).
inline double decomposition_residual(const Decomposition& dec, const LaplacianPair& lp) {
  return (dec.sum() - (lp.Lbar - lp.L)).max_abs();
}

/// |1 - mu_i| * ||phi_i||_inf for every i, in split order. Each is at most 1/sqrt(delta).
inline std::vector<double> eigvec_infnorm_products(const SpectralSplit& split, const DegreeProfile&) {
  std::vector<double> out(static_cast<std::size_t>(split.mu.size()));
  for (Index i = 0; i < split.mu.size(); ++i) {
    out[i] = std::abs(1.0 - split.mu[i]) * split.phi.col(i).cwiseAbs().maxCoeff();
  }
  return out;
}

/// ||D^{-1/2} T^{1/2} - I|| = max_i |sqrt(t_i/d_i) - 1|.
inline double scaling_deviation(const DegreeProfile& d) {
  if (!d.realized) throw InvalidArgument("scaling_deviation: no realized degrees");
  double dev = 0.0;
  for (Index i = 0; i < d.n(); ++i) {
    const double di = (*d.realized)[i];
    const double ti = d.expected[i];
    if (!(di > 0.0)) throw IsolatedVertex(static_cast<std::size_t>(i), "realized");
    if (!(ti > 0.0)) throw IsolatedVertex(static_cast<std::size_t>(i), "expected");
    dev = std::max(dev, std::abs(std::sqrt(ti / di) - 1.0));
  }
  return dev;
}

}  // namespace eirg
