#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "eirg/models.hpp"
#include "eirg/rng.hpp"
#include "eirg/walks.hpp"

using namespace eirg;

namespace {

// Every sequence over {0..p-1} of length k, filtered down to canonical good
// closed walks without loops.
std::set<std::vector<int>> brute_force_canonical(int k, int p) {
  std::set<std::vector<int>> out;
  std::vector<int> seq(static_cast<std::size_t>(k), 0);
  long long total = 1;
  for (int i = 0; i < k; ++i) total *= p;
  for (long long code = 0; code < total; ++code) {
    long long c = code;
    for (int i = 0; i < k; ++i) {
      seq[i] = static_cast<int>(c % p);
      c /= p;
    }
    int next = 0;
    bool canonical = true;
    for (int v : seq) {
      if (v == next) ++next;
      else if (v > next) canonical = false;
    }
    if (!canonical || next != p) continue;
    bool loops = false;
    for (int i = 0; i < k; ++i) loops = loops || seq[i] == seq[(i + 1) % k];
    if (loops) continue;
    if (ClosedWalk{seq}.is_good()) out.insert(seq);
  }
  return out;
}

// E tr(B^k) by summing over all 2^{n(n-1)/2} graphs.
double trace_moment_by_graphs(const ProbabilityMatrix& pm, int k) {
  const Index n = pm.n();
  std::vector<std::pair<Index, Index>> pairs;
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
  }
  double total = 0.0;
  for (unsigned mask = 0; mask < (1u << pairs.size()); ++mask) {
    Matrix b = -pm.matrix();
    double prob = 1.0;
    for (std::size_t e = 0; e < pairs.size(); ++e) {
      const auto [i, j] = pairs[e];
      const double p = pm(i, j);
      if (mask & (1u << e)) {
        prob *= p;
        b(i, j) += 1.0;
        b(j, i) += 1.0;
      } else {
        prob *= 1.0 - p;
      }
    }
    if (prob > 0.0) total += prob * trace_of_power(b, k);
  }
  return total;
}

ProbabilityMatrix random_model(Index n, SplitMix64& rng) {
  Matrix p = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) p(i, j) = p(j, i) = rng.uniform();
  }
  return ProbabilityMatrix(p);
}

}  // namespace

TEST(ClosedWalk, Multiplicities) {
  const ClosedWalk w{{0, 1, 0, 2}};
  const auto q = w.edge_multiplicities();
  EXPECT_EQ(q.size(), 2u);
  EXPECT_EQ(q.at({0, 1}), 2);
  EXPECT_EQ(q.at({0, 2}), 2);
  EXPECT_TRUE(w.is_good());
  EXPECT_FALSE((ClosedWalk{{0, 1, 2}}).is_good());
}

TEST(EnumerateCanonical, SpotValues) {
  const auto c22 = enumerate_canonical(2, 2);
  EXPECT_EQ(c22.count, 1u);
  EXPECT_EQ(c22.canonical_walks[0].vertices, (std::vector<int>{0, 1}));

  const auto c43 = enumerate_canonical(4, 3);
  EXPECT_EQ(c43.count, 2u);
  std::set<std::vector<int>> got;
  for (const auto& w : c43.canonical_walks) got.insert(w.vertices);
  EXPECT_EQ(got, (std::set<std::vector<int>>{{0, 1, 0, 2}, {0, 1, 2, 1}}));

  EXPECT_THROW(enumerate_canonical(4, 4), InvalidArgument);
  EXPECT_THROW(enumerate_canonical(1, 2), InvalidArgument);
}

TEST(EnumerateCanonical, MatchesBruteForce) {
  for (int k = 2; k <= 8; ++k) {
    for (int p = 2; p <= k / 2 + 1; ++p) {
      const auto census = enumerate_canonical(k, p);
      std::set<std::vector<int>> got;
      for (const auto& w : census.canonical_walks) {
        EXPECT_TRUE(w.is_good());
        EXPECT_EQ(w.length(), k);
        got.insert(w.vertices);
      }
      EXPECT_EQ(got.size(), census.canonical_walks.size()) << "duplicates at k=" << k << " p=" << p;
      EXPECT_EQ(got, brute_force_canonical(k, p)) << "k=" << k << " p=" << p;
      EXPECT_EQ(census.count, census.canonical_walks.size());
    }
  }
}

TEST(EnumerateCanonical, IndependentOfWorkerCount) {
  for (auto [k, p] : {std::pair{8, 4}, std::pair{10, 5}, std::pair{9, 3}}) {
    const auto one = enumerate_canonical(k, p, 1);
    const auto many = enumerate_canonical(k, p, 4);
    EXPECT_EQ(one.count, many.count);
    EXPECT_EQ(one.canonical_walks, many.canonical_walks);
  }
}

TEST(CountFull, Examples) {
  EXPECT_EQ(count_full(5, 2, 2), 20u);
  EXPECT_EQ(count_full(10, 4, 3), 1440u);
  EXPECT_EQ(count_full(5, 4, 4), 0u);
  EXPECT_THROW(count_full(3, 4, 4), InvalidArgument);
  EXPECT_EQ(falling_factorial(10, 3), 720u);
  EXPECT_THROW(falling_factorial(std::uint64_t{1} << 40, 2), Overflow);
}

TEST(CountFull, AgreesWithDirectWalkCount) {
  // Good closed walks on K_n with exactly p vertices, counted directly.
  const int n = 5;
  for (int k = 2; k <= 6; ++k) {
    std::vector<std::uint64_t> by_p(static_cast<std::size_t>(n + 1), 0);
    std::vector<int> seq(static_cast<std::size_t>(k));
    long long total = 1;
    for (int i = 0; i < k; ++i) total *= n;
    for (long long code = 0; code < total; ++code) {
      long long c = code;
      for (int i = 0; i < k; ++i) {
        seq[i] = static_cast<int>(c % n);
        c /= n;
      }
      bool loops = false;
      for (int i = 0; i < k; ++i) loops = loops || seq[i] == seq[(i + 1) % k];
      if (loops || !ClosedWalk{seq}.is_good()) continue;
      ++by_p[std::set<int>(seq.begin(), seq.end()).size()];
    }
    for (int p = 2; p <= n; ++p) EXPECT_EQ(count_full(n, k, p), by_p[p]) << "k=" << k << " p=" << p;
  }
}

TEST(Bounds, SpotValues) {
  EXPECT_DOUBLE_EQ(fk_bound(10, 4, 3), 1440.0);
  EXPECT_DOUBLE_EQ(fk_bound(5, 2, 2), 20.0);
  EXPECT_DOUBLE_EQ(vu_bound(4, 3), 32.0);
  EXPECT_DOUBLE_EQ(vu_bound(2, 2), 8.0);
  EXPECT_THROW(fk_bound(2, 4, 3), InvalidArgument);
  EXPECT_THROW(vu_bound(4, 4), InvalidArgument);
}

TEST(Bounds, DominateExactCounts) {
  for (int k = 2; k <= 10; ++k) {
    for (int p = 2; p <= k / 2 + 1; ++p) {
      const auto census = enumerate_canonical(k, p);
      EXPECT_LE(static_cast<double>(census.count), vu_bound(k, p));
      for (std::uint64_t n : {12u, 20u}) {
        EXPECT_LE(static_cast<double>(falling_factorial(n, p) * census.count), fk_bound(n, k, p));
      }
    }
  }
}

TEST(STerm, TopTermClosedForm) {
  // At p = k/2 + 1 every factor except 2^{k+1} collapses to one.
  for (int k : {2, 4, 6, 8, 10}) {
    for (double delta : {1.0, 7.5, 4096.0}) {
      const double n = 13.0;
      const double top = s_term(n, k, k / 2 + 1, delta);
      EXPECT_NEAR(top, n * std::ldexp(1.0, k + 1) * std::pow(delta, k / 2), 1e-12 * top);
      EXPECT_NEAR(trace_bound(n, k, delta).value, 2.0 * top, 1e-12 * top);
    }
  }
}

TEST(STerm, RatioProperty) {
  for (int k : {4, 6, 8}) {
    const double delta = 32.0 * std::pow(k, 4);
    double sum = 0.0;
    for (int p = 2; p <= k / 2 + 1; ++p) {
      sum += s_term(100.0, k, p, delta);
      if (p >= 3) {
        EXPECT_TRUE(s_ratio_holds(100.0, k, p, delta)) << "k=" << k << " p=" << p;
      }
    }
    EXPECT_LT(sum, 2.0 * s_term(100.0, k, k / 2 + 1, delta));
  }
  EXPECT_THROW(s_term(10.0, 4, 2, 0.0), InvalidArgument);
}

TEST(TraceBound, Examples) {
  const auto a = trace_bound(6, 4, 2);
  EXPECT_DOUBLE_EQ(a.value, 1536.0);
  EXPECT_FALSE(a.condition_holds);
  const auto b = trace_bound(1, 2, 1);
  EXPECT_DOUBLE_EQ(b.value, 16.0);
  EXPECT_FALSE(b.condition_holds);
  const auto c = trace_bound(10, 2, 512);
  EXPECT_DOUBLE_EQ(c.value, 81920.0);
  EXPECT_TRUE(c.condition_holds);
  EXPECT_THROW(trace_bound(10, 3, 512), InvalidArgument);
}

TEST(CenteredBernoulliMoment, SmallCases) {
  for (double p : {0.0, 0.2, 0.5, 0.9, 1.0}) {
    EXPECT_NEAR(centered_bernoulli_moment(p, 1), 0.0, 1e-15);
    EXPECT_NEAR(centered_bernoulli_moment(p, 2), p * (1 - p), 1e-15);
    EXPECT_LE(std::abs(centered_bernoulli_moment(p, 5)), p * (1 - p) + 1e-15);
  }
}

TEST(ExactTraceMoment, SingleEdge) {
  for (double p : {0.1, 0.5, 0.8}) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 1) = m(1, 0) = p;
    const ProbabilityMatrix pm(m);
    EXPECT_NEAR(exact_trace_moment(pm, 2), 2 * p * (1 - p), 1e-15);
    EXPECT_NEAR(exact_trace_moment(pm, 4), 2 * (p * std::pow(1 - p, 4) + (1 - p) * std::pow(p, 4)), 1e-15);
    EXPECT_NEAR(walk_weight_bound(pm, 2), 2 * p * (1 - p), 1e-15);
  }
}

TEST(ExactTraceMoment, DeterministicModelsVanish) {
  for (int k = 2; k <= 6; ++k) {
    EXPECT_EQ(exact_trace_moment(erdos_renyi(4, 1.0), k), 0.0);
    EXPECT_EQ(exact_trace_moment(erdos_renyi(4, 0.0), k), 0.0);
    EXPECT_EQ(walk_weight_bound(erdos_renyi(4, 0.0), k), 0.0);
  }
}

TEST(ExactTraceMoment, MatchesSumOverGraphs) {
  SplitMix64 rng(3);
  for (Index n = 2; n <= 4; ++n) {
    for (int rep = 0; rep < 4; ++rep) {
      const auto pm = random_model(n, rng);
      for (int k = 1; k <= 7; ++k) {
        const double oracle = trace_moment_by_graphs(pm, k);
        EXPECT_NEAR(exact_trace_moment(pm, k, true), oracle, 1e-12) << "n=" << n << " k=" << k;
        EXPECT_NEAR(exact_trace_moment(pm, k, false), oracle, 1e-12) << "n=" << n << " k=" << k;
      }
    }
  }
}

TEST(ExactTraceMoment, BoundedByWalkWeights) {
  SplitMix64 rng(4);
  for (Index n = 2; n <= 6; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto pm = random_model(n, rng);
      for (int k : {2, 4, 6}) EXPECT_LE(std::abs(exact_trace_moment(pm, k)), walk_weight_bound(pm, k) + 1e-12);
    }
  }
}

TEST(ExactTraceMoment, MonteCarloAgreement) {
  SplitMix64 rng(9);
  const auto pm = random_model(5, rng);
  const int samples = 100000;
  for (int k : {2, 4}) {
    double s = 0.0, s2 = 0.0;
    for (int r = 0; r < samples; ++r) {
      const GraphSample gs = sample(pm, derive_seed(11, static_cast<std::uint64_t>(r)));
      const double t = trace_of_power(gs.adjacency() - pm.matrix(), k);
      s += t;
      s2 += t * t;
    }
    const double mean = s / samples;
    const double se = std::sqrt((s2 / samples - mean * mean) / samples);
    EXPECT_LE(std::abs(mean - exact_trace_moment(pm, k)), 5.0 * se) << "k=" << k;
  }
}

TEST(ExactTraceMoment, Budget) {
  EXPECT_THROW(exact_trace_moment(erdos_renyi(40, 0.5), 6), BudgetExceeded);
  EXPECT_THROW(walk_weight_bound(erdos_renyi(40, 0.5), 6), BudgetExceeded);
}

TEST(TraceOfPower, MatchesDirectProduct) {
  SplitMix64 rng(6);
  Matrix m(4, 4);
  for (Index i = 0; i < 4; ++i) {
    for (Index j = 0; j < 4; ++j) m(i, j) = rng.uniform();
  }
  Matrix p = Matrix::Identity(4, 4);
  for (int k = 0; k <= 7; ++k) {
    EXPECT_NEAR(trace_of_power(m, k), p.trace(), 1e-10 * std::max(1.0, std::abs(p.trace())));
    p = p * m;
  }
}
