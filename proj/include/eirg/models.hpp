#pragma once

// Edge-independent random graph models: probability matrices, reproducible
// sampling and degree profiles. Storage is dense throughout.

#include <Eigen/Dense>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <istream>
#include <numeric>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "eirg/error.hpp"
#include "eirg/rng.hpp"

namespace eirg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Throws unless `m` is a square, exactly symmetric 0/1 matrix with zero diagonal.
inline void validate_adjacency(const Matrix& m, const char* what = "adjacency") {
  if (m.rows() != m.cols()) {
    throw InvalidArgument(std::string(what) + " matrix must be square");
  }
  for (Index i = 0; i < m.rows(); ++i) {
    if (m(i, i) != 0.0) {
      throw InvalidArgument(std::string(what) + " matrix must have zero diagonal");
    }
    for (Index j = i + 1; j < m.cols(); ++j) {
      const double x = m(i, j);
      if (x != 0.0 && x != 1.0) {
        throw InvalidArgument(std::string(what) + " matrix must be 0/1");
      }
      if (m(j, i) != x) {
        throw InvalidArgument(std::string(what) + " matrix must be symmetric");
      }
    }
  }
}

/// Symmetric edge-probability matrix with zero diagonal (the expected
/// adjacency matrix of the model).
class ProbabilityMatrix {
 public:
  explicit ProbabilityMatrix(Matrix p) : p_(std::move(p)) {
    if (p_.rows() == 0 || p_.rows() != p_.cols()) {
      throw InvalidArgument("probability matrix must be square and non-empty");
    }
    for (Index i = 0; i < p_.rows(); ++i) {
      if (p_(i, i) != 0.0) {
        throw InvalidArgument("probability matrix must have zero diagonal (no self-loops)");
      }
      for (Index j = i + 1; j < p_.cols(); ++j) {
        const double x = p_(i, j);
        if (!(x >= 0.0 && x <= 1.0)) {
          throw InvalidArgument("edge probability outside [0,1] at (" + std::to_string(i) +
                                "," + std::to_string(j) + ")");
        }
        if (p_(j, i) != x) {
          throw InvalidArgument("probability matrix must be symmetric");
        }
      }
    }
  }

  Index n() const noexcept { return p_.rows(); }
  const Matrix& matrix() const noexcept { return p_; }
  double operator()(Index i, Index j) const { return p_(i, j); }

  friend bool operator==(const ProbabilityMatrix& a, const ProbabilityMatrix& b) {
    return a.p_.rows() == b.p_.rows() && a.p_ == b.p_;
  }

 private:
  Matrix p_;
};

/// One realized simple graph together with the seed that produced it.
class GraphSample {
 public:
  GraphSample(Matrix adj, std::uint64_t seed) : adj_(std::move(adj)), seed_(seed) {
    validate_adjacency(adj_);
  }

  Index n() const noexcept { return adj_.rows(); }
  const Matrix& adjacency() const noexcept { return adj_; }
  std::uint64_t seed() const noexcept { return seed_; }

  std::size_t edge_count() const {
    return static_cast<std::size_t>(adj_.sum() / 2.0);
  }

 private:
  Matrix adj_;
  std::uint64_t seed_;
};

/// Expected degrees t (row sums of the model), optionally the realized
/// degrees d of one sample, and the extremes Δ = max t, δ = min t.
struct DegreeProfile {
  Vector expected;
  std::optional<Vector> realized;
  double max_expected = 0.0;
  double min_expected = 0.0;

  Index n() const noexcept { return expected.size(); }
};

// ---------------------------------------------------------------------------
// Model constructors

inline ProbabilityMatrix erdos_renyi(Index n, double prob) {
  if (n < 1) throw InvalidArgument("erdos_renyi: n must be >= 1");
  if (!(prob >= 0.0 && prob <= 1.0)) throw InvalidArgument("erdos_renyi: prob outside [0,1]");
  Matrix p = Matrix::Constant(n, n, prob);
  p.diagonal().setZero();
  return ProbabilityMatrix(std::move(p));
}

/// Expected-degree model: p_ij = w_i w_j / sum(w). Weights with
/// max w_i^2 > sum(w) are rejected rather than clamped.
inline ProbabilityMatrix chung_lu(const std::vector<double>& w) {
  if (w.empty()) throw InvalidArgument("chung_lu: empty weight vector");
  double total = 0.0;
  double wmax = 0.0;
  for (double x : w) {
    if (!(x >= 0.0) || !std::isfinite(x)) throw InvalidArgument("chung_lu: weights must be finite and nonnegative");
    total += x;
    wmax = std::max(wmax, x);
  }
  if (!(total > 0.0)) throw InvalidArgument("chung_lu: weights sum to zero");
  if (wmax * wmax > total) {
    throw InvalidArgument("chung_lu: max w^2 exceeds sum of weights, some p_ij > 1");
  }
  const auto n = static_cast<Index>(w.size());
  Matrix p(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      p(i, j) = i == j ? 0.0 : w[i] * w[j] / total;
    }
  }
  return ProbabilityMatrix(std::move(p));
}

/// Bond percolation: every host edge kept independently with probability `prob`.
inline ProbabilityMatrix percolation(const Matrix& host_adj, double prob) {
  validate_adjacency(host_adj, "host");
  if (host_adj.rows() == 0) throw InvalidArgument("percolation: empty host graph");
  if (!(prob >= 0.0 && prob <= 1.0)) throw InvalidArgument("percolation: prob outside [0,1]");
  return ProbabilityMatrix(prob * host_adj);
}

/// Planted partition: blocks of the given sizes, probability `within` inside
/// a block and `between` across blocks.
inline ProbabilityMatrix block_model(const std::vector<Index>& sizes, double within, double between) {
  if (sizes.empty()) throw InvalidArgument("block_model: no blocks");
  if (!(within >= 0.0 && within <= 1.0) || !(between >= 0.0 && between <= 1.0)) {
    throw InvalidArgument("block_model: probabilities outside [0,1]");
  }
  std::vector<Index> label;
  for (std::size_t b = 0; b < sizes.size(); ++b) {
    if (sizes[b] < 1) throw InvalidArgument("block_model: block sizes must be positive");
    label.insert(label.end(), static_cast<std::size_t>(sizes[b]), static_cast<Index>(b));
  }
  const auto n = static_cast<Index>(label.size());
  Matrix p(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      p(i, j) = i == j ? 0.0 : (label[i] == label[j] ? within : between);
    }
  }
  return ProbabilityMatrix(std::move(p));
}

// ---------------------------------------------------------------------------
// Host graphs for percolation

inline Matrix complete_graph(Index n) {
  Matrix a = Matrix::Ones(n, n);
  a.diagonal().setZero();
  return a;
}

inline Matrix cycle_graph(Index n) {
  if (n < 3) throw InvalidArgument("cycle_graph: n must be >= 3");
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    a(i, (i + 1) % n) = 1.0;
    a((i + 1) % n, i) = 1.0;
  }
  return a;
}

/// Hypercube Q_dim on 2^dim vertices; i ~ j iff they differ in one bit.
inline Matrix hypercube(int dim) {
  if (dim < 1 || dim > 14) throw InvalidArgument("hypercube: dim must be in [1,14]");
  const Index n = Index{1} << dim;
  Matrix a = Matrix::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (int b = 0; b < dim; ++b) a(i, i ^ (Index{1} << b)) = 1.0;
  }
  return a;
}

/// Uniform-ish random d-regular simple graph by sequential pairing of
/// half-edges, never creating loops or multi-edges; restarts on a dead end.
inline Matrix random_regular(Index n, Index d, std::uint64_t seed) {
  if (n < 1 || d < 0 || d >= n || (n * d) % 2 != 0) {
    throw InvalidArgument("random_regular: need 0 <= d < n and n*d even");
  }
  for (std::uint64_t attempt = 0; attempt < 1000; ++attempt) {
    SplitMix64 rng(derive_seed(seed, attempt));
    auto pick = [&rng](std::size_t m) {
      return std::min(static_cast<std::size_t>(rng.uniform() * static_cast<double>(m)), m - 1);
    };
    Matrix a = Matrix::Zero(n, n);
    std::vector<Index> points;
    points.reserve(static_cast<std::size_t>(n * d));
    for (Index v = 0; v < n; ++v) points.insert(points.end(), static_cast<std::size_t>(d), v);

    bool stuck = false;
    while (!points.empty() && !stuck) {
      bool matched = false;
      for (int tries = 0; tries < 64 && !matched; ++tries) {
        std::size_t x = pick(points.size());
        std::size_t y = pick(points.size());
        const Index u = points[x];
        const Index v = points[y];
        if (x == y || u == v || a(u, v) != 0.0) continue;
        a(u, v) = a(v, u) = 1.0;
        if (x < y) std::swap(x, y);
        points[x] = points.back();
        points.pop_back();
        points[y] = points.back();
        points.pop_back();
        matched = true;
      }
      if (matched) continue;
      // Few points left: choose among the suitable pairs explicitly.
      std::vector<std::pair<std::size_t, std::size_t>> ok;
      for (std::size_t x = 0; x < points.size(); ++x) {
        for (std::size_t y = x + 1; y < points.size(); ++y) {
          if (points[x] != points[y] && a(points[x], points[y]) == 0.0) ok.emplace_back(x, y);
        }
      }
      if (ok.empty()) {
        stuck = true;
        break;
      }
      auto [x, y] = ok[pick(ok.size())];
      a(points[x], points[y]) = a(points[y], points[x]) = 1.0;
      points[y] = points.back();
      points.pop_back();
      points[x] = points.back();
      points.pop_back();
    }
    if (!stuck) return a;
  }
  throw Error("random_regular: failed to complete a pairing");
}

// ---------------------------------------------------------------------------
// Sampling

/// Realize one graph. Upper-triangle pairs (i<j) are visited in row-major
/// order and each consumes exactly one draw of SplitMix64(seed), so the
/// output is a pure function of (pm, seed).
inline GraphSample sample(const ProbabilityMatrix& pm, std::uint64_t seed) {
  const Index n = pm.n();
  const Matrix& p = pm.matrix();
  Matrix adj = Matrix::Zero(n, n);
  SplitMix64 rng(seed);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p(j, i))) {
        adj(i, j) = 1.0;
        adj(j, i) = 1.0;
      }
    }
  }
  return GraphSample(std::move(adj), seed);
}

/// Realized degrees of sample(pm, seed) without materializing the adjacency.
inline Vector sample_degrees(const ProbabilityMatrix& pm, std::uint64_t seed) {
  const Index n = pm.n();
  const Matrix& p = pm.matrix();
  Vector d = Vector::Zero(n);
  SplitMix64 rng(seed);
  for (Index i = 0; i < n; ++i) {
    for (Index j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p(j, i))) {
        d[i] += 1.0;
        d[j] += 1.0;
      }
    }
  }
  return d;
}

inline DegreeProfile degrees(const ProbabilityMatrix& pm) {
  DegreeProfile out;
  out.expected = pm.matrix().rowwise().sum();
  out.max_expected = out.expected.maxCoeff();
  out.min_expected = out.expected.minCoeff();
  return out;
}

inline DegreeProfile degrees(const ProbabilityMatrix& pm, const GraphSample& gs) {
  if (gs.n() != pm.n()) throw DimensionMismatch("degrees: sample and model sizes differ");
  DegreeProfile out = degrees(pm);
  out.realized = gs.adjacency().rowwise().sum();
  return out;
}

inline DegreeProfile degrees(const ProbabilityMatrix& pm, Vector realized) {
  if (realized.size() != pm.n()) throw DimensionMismatch("degrees: realized degree vector size differs");
  DegreeProfile out = degrees(pm);
  out.realized = std::move(realized);
  return out;
}

// ---------------------------------------------------------------------------
// Weight vectors

/// One value per line; blank lines and lines starting with '#' are skipped.
inline std::vector<double> parse_weights(std::istream& in) {
  std::vector<double> w;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    const char* b = line.data() + first;
    const char* e = line.data() + last + 1;
    double x = 0.0;
    auto [ptr, ec] = std::from_chars(b, e, x);
    if (ec != std::errc{} || ptr != e) {
      throw InvalidArgument("weights: cannot parse line " + std::to_string(lineno));
    }
    w.push_back(x);
  }
  return w;
}

inline std::vector<double> load_weights(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("weights: cannot open " + path);
  return parse_weights(in);
}

/// n weights spaced linearly from `lo` to `hi` inclusive.
inline std::vector<double> linear_weights(Index n, double lo, double hi) {
  if (n < 1) throw InvalidArgument("linear_weights: n must be >= 1");
  std::vector<double> w(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    w[i] = n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(n - 1);
  }
  return w;
}

}  // namespace eirg
