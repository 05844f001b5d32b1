#include <gtest/gtest.h>

#include <cmath>

#include "eirg/graph_matrices.hpp"
#include "eirg/models.hpp"
#include "eirg/rng.hpp"

using namespace eirg;

namespace {

// Direct entrywise normalized Laplacian: delta_ij - a_ij / sqrt(d_i d_j).
Matrix laplacian_oracle(const Matrix& a) {
  const Index n = a.rows();
  const Vector d = a.rowwise().sum();
  Matrix l(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) l(i, j) = (i == j ? 1.0 : 0.0) - a(i, j) / std::sqrt(d[i] * d[j]);
  }
  return l;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(CenteredAdjacency, Examples) {
  const auto full = erdos_renyi(5, 1.0);
  EXPECT_EQ(centered_adjacency(sample(full, 1), full).max_abs(), 0.0);
  const auto empty = erdos_renyi(5, 0.0);
  EXPECT_EQ(centered_adjacency(sample(empty, 1), empty).max_abs(), 0.0);

  Matrix p = Matrix::Zero(2, 2);
  p(0, 1) = p(1, 0) = 0.3;
  const ProbabilityMatrix pm(p);
  Matrix edge = Matrix::Zero(2, 2);
  edge(0, 1) = edge(1, 0) = 1.0;
  EXPECT_NEAR(centered_adjacency(GraphSample(edge, 0), pm)(0, 1), 0.7, 1e-15);

  const auto g = erdos_renyi(100, 0.5);
  const auto b = centered_adjacency(sample(g, 3), g);
  for (Index i = 0; i < 100; ++i) {
    EXPECT_EQ(b(i, i), 0.0);
    for (Index j = 0; j < 100; ++j) {
      if (i != j) {
        EXPECT_EQ(std::abs(b(i, j)), 0.5);
      }
    }
  }
  EXPECT_THROW(centered_adjacency(sample(g, 3), erdos_renyi(4, 0.5)), DimensionMismatch);
}

TEST(Laplacians, CompleteGraphK4) {
  const auto pm = erdos_renyi(4, 1.0);
  const auto lp = laplacians(sample(pm, 0), pm);
  EXPECT_LE((lp.L - lp.Lbar).max_abs(), 1e-15);
  const auto ev = eigenvalues(lp.L);
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(ev[i], 4.0 / 3.0, 1e-12);
}

TEST(Laplacians, MatchEntrywiseDefinition) {
  const auto pm = chung_lu(linear_weights(40, 5.0, 12.0));
  std::uint64_t seed = 0;
  while (sample(pm, seed).adjacency().rowwise().sum().minCoeff() == 0) ++seed;
  const GraphSample gs = sample(pm, seed);
  const auto lp = laplacians(gs, pm);
  EXPECT_LE(max_abs(lp.L.matrix() - laplacian_oracle(gs.adjacency())), 1e-14);
  EXPECT_LE(max_abs(lp.Lbar.matrix() - laplacian_oracle(pm.matrix())), 1e-14);
}

TEST(Laplacians, ChungLuExpectedSpectrum) {
  // The zero diagonal perturbs the rank-one structure: eigenvalue 0 stays,
  // the rest move from 1 by at most max_i w_i^2 / (W t_i).
  const std::vector<double> w = linear_weights(60, 10.0, 30.0);
  const auto pm = chung_lu(w);
  const auto dp = degrees(pm);
  double total = 0.0;
  for (double x : w) total += x;
  double slack = 0.0;
  for (Index i = 0; i < 60; ++i) slack = std::max(slack, w[i] * w[i] / (total * dp.expected[i]));
  const auto ev = eigenvalues(expected_laplacian(pm));
  EXPECT_NEAR(ev[0], 0.0, 1e-12);
  for (std::size_t i = 1; i < ev.size(); ++i) EXPECT_NEAR(ev[i], 1.0, slack + 1e-12);
}

TEST(Laplacians, IsolatedVertexIsAnError) {
  const auto pm = chung_lu({0, 1, 1});
  EXPECT_THROW(expected_laplacian(pm), IsolatedVertex);
  Matrix a = Matrix::Zero(3, 3);
  a(0, 1) = a(1, 0) = 1.0;
  try {
    laplacians(GraphSample(a, 0), erdos_renyi(3, 0.5));
    FAIL() << "expected IsolatedVertex";
  } catch (const IsolatedVertex& e) {
    EXPECT_EQ(e.vertex(), 2u);
  }
}

TEST(Laplacians, PercolationInvariance) {
  for (const Matrix& host : {cycle_graph(9), hypercube(5), random_regular(40, 6, 2)}) {
    const SymmetricMatrix lg = graph_laplacian(host);
    for (double p : {0.05, 0.3, 0.7, 1.0}) {
      EXPECT_LE((expected_laplacian(percolation(host, p)) - lg).max_abs(), 1e-12);
    }
  }
}

TEST(FTransform, Examples) {
  const auto pm = erdos_renyi(6, 1.0);
  const auto dp = degrees(pm, sample(pm, 0));
  SplitMix64 rng(1);
  Matrix r(6, 6);
  for (Index i = 0; i < 6; ++i) {
    for (Index j = i; j < 6; ++j) r(i, j) = r(j, i) = rng.uniform();
  }
  EXPECT_EQ(f_transform(SymmetricMatrix(r), dp).max_abs(), 0.0);

  const auto g = erdos_renyi(30, 0.5);
  const auto dg = degrees(g, sample(g, 4));
  EXPECT_EQ(f_transform(SymmetricMatrix::zero(30), dg).max_abs(), 0.0);
  EXPECT_THROW(f_transform(SymmetricMatrix::zero(30), degrees(g)), InvalidArgument);
}

TEST(FTransform, EntrywiseAndLinear) {
  const auto pm = chung_lu(linear_weights(25, 4.0, 9.0));
  const auto dp = degrees(pm, sample(pm, 8));
  SplitMix64 rng(2);
  Matrix b1(25, 25), b2(25, 25);
  for (Index i = 0; i < 25; ++i) {
    for (Index j = i; j < 25; ++j) {
      b1(i, j) = b1(j, i) = rng.uniform() - 0.5;
      b2(i, j) = b2(j, i) = rng.uniform() - 0.5;
    }
  }
  const SymmetricMatrix s1(b1), s2(b2);
  const auto f1 = f_transform(s1, dp);
  for (Index i = 0; i < 25; ++i) {
    for (Index j = 0; j < 25; ++j) {
      const double scale = std::sqrt(dp.expected[i] * dp.expected[j] / ((*dp.realized)[i] * (*dp.realized)[j]));
      EXPECT_NEAR(f1(i, j), scale * b1(i, j) - b1(i, j), 1e-14);
    }
  }
  const double alpha = 1.7, beta = -0.4;
  const auto lhs = f_transform(alpha * s1 + beta * s2, dp);
  const auto rhs = alpha * f1 + beta * f_transform(s2, dp);
  EXPECT_LE((lhs - rhs).max_abs(), 1e-10);
}

TEST(DefaultTau, Formula) {
  EXPECT_NEAR(default_tau(27), 1.0 / (std::log(std::log(27.0)) * std::sqrt(std::log(27.0))), 1e-15);
  EXPECT_NEAR(default_tau(10), 1.0 / (std::log(std::log(27.0)) * std::sqrt(std::log(10.0))), 1e-15);
  EXPECT_NEAR(default_tau(2000), 1.0 / (std::log(std::log(2000.0)) * std::sqrt(std::log(2000.0))), 1e-15);
  EXPECT_THROW(default_tau(1), InvalidArgument);
}

TEST(SpectralSplit, CompleteGraphK4) {
  const auto split = spectral_split(erdos_renyi(4, 1.0), 0.5);
  EXPECT_EQ(split.k, 1);
  EXPECT_NEAR(std::abs(1.0 - split.mu[0]), 1.0, 1e-12);
  for (int i = 1; i < 4; ++i) EXPECT_NEAR(std::abs(1.0 - split.mu[i]), 1.0 / 3.0, 1e-12);
}

TEST(SpectralSplit, ChungLuHasOneLargeEigenvalue) {
  // Off-unit eigenvalues sit within max w^2/(W t) of 1, so any tau above
  // that slack isolates the trivial eigenvalue alone.
  const auto pm = chung_lu(linear_weights(800, 100.0, 300.0));
  for (double tau : {0.2, 0.5, 0.9}) {
    const auto split = spectral_split(pm, tau);
    EXPECT_EQ(split.k, 1);
    EXPECT_NEAR(split.mu[0], 0.0, 1e-10);
    EXPECT_EQ(split.lambda().size(), 1u);
    EXPECT_LE(eigen_symmetric(split.M).eigenvalues[798], 1e-10);  // rank one
  }
}

TEST(SpectralSplit, EmptyLambdaAboveOne) {
  const auto pm = chung_lu({2, 2, 3, 2, 2});
  const auto split = spectral_split(pm, 1.1);
  EXPECT_EQ(split.k, 0);
  EXPECT_EQ(split.M.max_abs(), 0.0);
  EXPECT_LE((split.N - normalized_expected_adjacency(pm)).max_abs(), 1e-12);
  EXPECT_THROW(spectral_split(pm, 0.0), InvalidArgument);
  EXPECT_THROW(spectral_split(chung_lu({0, 1, 1}), 0.5), IsolatedVertex);
}

TEST(SpectralSplit, Invariants) {
  for (const auto& pm : {erdos_renyi(30, 0.3), chung_lu(linear_weights(30, 2, 6)), block_model({10, 10, 10}, 0.6, 0.2),
                         percolation(hypercube(5), 0.5)}) {
    const double tau = default_tau(pm.n());
    const auto split = spectral_split(pm, tau);
    for (Index i = 1; i < pm.n(); ++i) {
      EXPECT_GE(std::abs(1.0 - split.mu[i - 1]), std::abs(1.0 - split.mu[i]) - 1e-12);
    }
    const SymmetricMatrix sum = split.M + split.N;
    EXPECT_LE((sum - (SymmetricMatrix::identity(pm.n()) - expected_laplacian(pm))).max_abs(), 1e-8);
    EXPECT_LT(spectral_norm(split.N), tau);
    const Matrix gram = split.phi.transpose() * split.phi;
    EXPECT_LE((gram - Matrix::Identity(pm.n(), pm.n())).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(Decompose, DeterministicGraphGivesZeros) {
  const auto pm = erdos_renyi(8, 1.0);
  const auto dec = decompose(sample(pm, 0), pm, 0.5);
  for (const auto& t : dec.terms) EXPECT_LE(t.max_abs(), 1e-15);
}

TEST(Decompose, SumIdentity) {
  // The four terms add up to D^{-1/2} A D^{-1/2} - T^{-1/2} Abar T^{-1/2} = Lbar - L.
  for (const auto& pm : {erdos_renyi(60, 0.4), chung_lu(linear_weights(60, 8, 20)), block_model({20, 20, 20}, 0.6, 0.2)}) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
      const GraphSample gs = sample(pm, seed);
      if (gs.adjacency().rowwise().sum().minCoeff() == 0) continue;
      const auto split = spectral_split(pm, default_tau(pm.n()));
      const auto dec = decompose(gs, pm, split);
      const auto lp = laplacians(gs, pm);
      EXPECT_LE(decomposition_residual(dec, lp), 1e-8);
      EXPECT_LE((dec.sum() - (lp.Lbar - lp.L)).max_abs(), 1e-8);
      for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(dec.norms[i], spectral_norm(dec.terms[i]), 1e-12);
      // Term-level definitions.
      const auto dp = degrees(pm, gs);
      EXPECT_LE((dec.terms[1] - f_transform(dec.terms[0], dp)).max_abs(), 0.0);
      EXPECT_LE((dec.terms[2] - f_transform(split.N, dp)).max_abs(), 0.0);
      EXPECT_LE((dec.terms[3] - f_transform(split.M, dp)).max_abs(), 0.0);
    }
  }
}

TEST(Decompose, M1NormAtModerateSize) {
  const auto pm = erdos_renyi(500, 0.5);
  const double delta = 249.5;
  const auto split = spectral_split(pm, 0.2);
  const auto dec = decompose(sample(pm, 11), pm, split);
  EXPECT_LE(dec.norms[0], 2.5 / std::sqrt(delta));
}

TEST(EigvecProducts, ChungLuEqualWeights) {
  const auto pm = chung_lu({2, 2, 2});
  const auto dp = degrees(pm);
  const auto split = spectral_split(pm, 0.5);
  const auto prod = eigvec_infnorm_products(split, dp);
  EXPECT_NEAR(prod[0], 1.0 / std::sqrt(3.0), 1e-12);
  for (double x : prod) EXPECT_LE(x, 1.0 / std::sqrt(dp.min_expected) + 1e-10);
  EXPECT_NEAR(1.0 / std::sqrt(dp.min_expected), std::sqrt(3.0) / 2.0, 1e-12);
}

TEST(EigvecProducts, CompleteGraphK4) {
  const auto pm = erdos_renyi(4, 1.0);
  const auto split = spectral_split(pm, 0.5);
  const auto prod = eigvec_infnorm_products(split, degrees(pm));
  EXPECT_NEAR(prod[0], 0.5, 1e-12);
  for (double x : prod) EXPECT_LE(x, 1.0 / std::sqrt(3.0) + 1e-10);
}

TEST(EigvecProducts, BoundHoldsAcrossModels) {
  for (const auto& pm : {erdos_renyi(50, 0.2), chung_lu(linear_weights(50, 3, 12)), block_model({15, 15, 20}, 0.6, 0.2),
                         percolation(cycle_graph(20), 0.5), percolation(hypercube(6), 0.3)}) {
    const auto dp = degrees(pm);
    const auto split = spectral_split(pm, default_tau(pm.n()));
    for (double x : eigvec_infnorm_products(split, dp)) EXPECT_LE(x, 1.0 / std::sqrt(dp.min_expected) + 1e-10);
  }
}

TEST(ScalingDeviation, Examples) {
  const auto pm = erdos_renyi(5, 1.0);
  EXPECT_EQ(scaling_deviation(degrees(pm, sample(pm, 2))), 0.0);

  DegreeProfile d;
  d.expected = Vector::Constant(1, 100.0);
  d.realized = Vector::Constant(1, 81.0);
  d.min_expected = d.max_expected = 100.0;
  EXPECT_NEAR(scaling_deviation(d), 1.0 / 9.0, 1e-15);

  d.realized = Vector::Constant(1, 0.0);
  EXPECT_THROW(scaling_deviation(d), IsolatedVertex);
}

TEST(ScalingDeviation, ErdosRenyiSurrogate) {
  const Index n = 2000;
  const auto pm = erdos_renyi(n, 0.5);
  const double delta = 0.5 * (n - 1);
  const double bound = 2.0 * std::sqrt(std::log(static_cast<double>(n)) / delta);
  int within = 0;
  for (std::uint64_t t = 0; t < 50; ++t) {
    within += scaling_deviation(degrees(pm, sample_degrees(pm, derive_seed(5, t)))) <= bound ? 1 : 0;
  }
  EXPECT_GE(within, 48);
}
