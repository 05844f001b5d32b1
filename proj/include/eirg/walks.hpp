#pragma once

// Closed-walk combinatorics behind trace moments of centered random
// symmetric matrices: canonical good walks, their counts, the two classical
// count bounds, and exact E tr(B^k) for small Bernoulli models.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <thread>
#include <utility>
#include <vector>

#include "eirg/error.hpp"
#include "eirg/models.hpp"

namespace eirg {

/// Closed walk i_1 i_2 ... i_k i_1 (the return step is implicit). Labels are
/// 0-based.
struct ClosedWalk {
  std::vector<int> vertices;

  int length() const noexcept { return static_cast<int>(vertices.size()); }

  /// Unordered edge {min, max} -> number of traversals q_e.
  std::map<std::pair<int, int>, int> edge_multiplicities() const {
    std::map<std::pair<int, int>, int> q;
    const auto k = vertices.size();
    for (std::size_t s = 0; s < k; ++s) {
      const int a = vertices[s];
      const int b = vertices[(s + 1) % k];
      ++q[{std::min(a, b), std::max(a, b)}];
    }
    return q;
  }

  /// Every edge traversed at least twice.
  bool is_good() const {
    for (const auto& [e, q] : edge_multiplicities()) {
      if (q < 2) return false;
    }
    return true;
  }

  friend bool operator==(const ClosedWalk&, const ClosedWalk&) = default;
};

struct WalkCensus {
  int k = 0;
  int p = 0;
  std::vector<ClosedWalk> canonical_walks;
  std::uint64_t count = 0;
};

namespace detail {

// Depth-first search over canonical good walks. Vertex 0 starts the walk, a
// new label must be the next unused one, and a branch is cut when the steps
// left cannot both pair up every edge seen once and introduce the vertices
// still missing (each new vertex costs two traversals).
class CanonicalWalkSearch {
 public:
  CanonicalWalkSearch(int k, int p) : k_(k), p_(p), mult_(static_cast<std::size_t>(p * p), 0) {
    seq_.assign(static_cast<std::size_t>(k), 0);
  }

  /// Replays `prefix` (starting with 0) and collects all completions.
  std::vector<ClosedWalk> run_from(const std::vector<int>& prefix) {
    out_.clear();
    std::fill(mult_.begin(), mult_.end(), 0);
    singles_ = 0;
    max_label_ = 0;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
      seq_[i] = prefix[i];
      if (i > 0) {
        max_label_ = std::max(max_label_, prefix[i]);
        add_edge(prefix[i - 1], prefix[i]);
      }
    }
    extend(static_cast<int>(prefix.size()));
    return std::move(out_);
  }

  /// All feasible prefixes of length `depth` (depth >= 1), in DFS order.
  std::vector<std::vector<int>> prefixes(int depth) {
    std::vector<std::vector<int>> result;
    std::fill(mult_.begin(), mult_.end(), 0);
    singles_ = 0;
    max_label_ = 0;
    seq_[0] = 0;
    collect_prefixes(1, depth, result);
    return result;
  }

 private:
  int& mult(int a, int b) { return mult_[static_cast<std::size_t>(std::min(a, b) * p_ + std::max(a, b))]; }

  void add_edge(int a, int b) {
    int& m = mult(a, b);
    ++m;
    if (m == 1) ++singles_;
    else if (m == 2) --singles_;
  }

  void remove_edge(int a, int b) {
    int& m = mult(a, b);
    if (m == 1) --singles_;
    else if (m == 2) ++singles_;
    --m;
  }

  // Positions [0, pos) are filled; edges between them are recorded.
  bool feasible(int pos) const {
    const int remaining = k_ - pos + 1;  // edges still to traverse, including the return step
    const int missing = p_ - 1 - max_label_;
    return remaining >= singles_ + 2 * missing;
  }

  template <typename Visit>
  void for_each_choice(int pos, Visit&& visit) {
    const int prev = seq_[pos - 1];
    const int limit = std::min(max_label_ + 1, p_ - 1);
    for (int v = 0; v <= limit; ++v) {
      if (v == prev) continue;
      const int saved_max = max_label_;
      seq_[pos] = v;
      max_label_ = std::max(max_label_, v);
      add_edge(prev, v);
      if (feasible(pos + 1)) visit();
      remove_edge(prev, v);
      max_label_ = saved_max;
    }
  }

  void extend(int pos) {
    if (pos == k_) {
      const int last = seq_[k_ - 1];
      if (last == 0 || max_label_ != p_ - 1) return;
      add_edge(last, 0);
      if (singles_ == 0) out_.push_back(ClosedWalk{seq_});
      remove_edge(last, 0);
      return;
    }
    for_each_choice(pos, [&] { extend(pos + 1); });
  }

  void collect_prefixes(int pos, int depth, std::vector<std::vector<int>>& result) {
    if (pos == depth) {
      result.emplace_back(seq_.begin(), seq_.begin() + depth);
      return;
    }
    for_each_choice(pos, [&] { collect_prefixes(pos + 1, depth, result); });
  }

  int k_;
  int p_;
  std::vector<int> seq_;
  std::vector<int> mult_;
  int singles_ = 0;
  int max_label_ = 0;
  std::vector<ClosedWalk> out_;
};

inline std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t r = 0;
  if (__builtin_mul_overflow(a, b, &r)) throw Overflow("walk count exceeds 64 bits");
  return r;
}

inline double binomial(int n, int r) {
  if (r < 0 || r > n) return 0.0;
  r = std::min(r, n - r);
  double c = 1.0;
  for (int i = 1; i <= r; ++i) c = c * static_cast<double>(n - r + i) / static_cast<double>(i);
  return std::round(c);
}

inline void require_walk_range(int k, int p) {
  if (k < 2) throw InvalidArgument("walk length k must be >= 2");
  if (p < 2) throw InvalidArgument("vertex count p must be >= 2");
  if (2 * p > k + 2) throw InvalidArgument("p exceeds k/2 + 1: no good closed walk exists");
}

}  // namespace detail

/// Exhaustive list of good closed walks of length k on {0..p-1} whose
/// vertices first appear in the order 0, 1, ..., p-1. The root branch may be
/// split across `workers` threads; output order does not depend on it.
inline WalkCensus enumerate_canonical(int k, int p, unsigned workers = 1) {
  detail::require_walk_range(k, p);
  WalkCensus census;
  census.k = k;
  census.p = p;

  const int depth = std::min(k, 5);
  const auto prefixes = detail::CanonicalWalkSearch(k, p).prefixes(depth);
  std::vector<std::vector<ClosedWalk>> parts(prefixes.size());
  workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, prefixes.size()))));

  auto work = [&](unsigned w) {
    detail::CanonicalWalkSearch search(k, p);
    for (std::size_t i = w; i < prefixes.size(); i += workers) parts[i] = search.run_from(prefixes[i]);
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (auto& part : parts) {
    census.canonical_walks.insert(census.canonical_walks.end(), std::make_move_iterator(part.begin()),
                                  std::make_move_iterator(part.end()));
  }
  census.count = census.canonical_walks.size();
  return census;
}

/// n(n-1)...(n-p+1), exact.
inline std::uint64_t falling_factorial(std::uint64_t n, int p) {
  if (p < 0 || static_cast<std::uint64_t>(p) > n) return 0;
  std::uint64_t r = 1;
  for (int i = 0; i < p; ++i) r = detail::checked_mul(r, n - static_cast<std::uint64_t>(i));
  return r;
}

/// Number of good closed walks of length k on K_n using exactly p vertices.
/// Zero when p > k/2 + 1.
inline std::uint64_t count_full(std::uint64_t n, int k, int p) {
  if (k < 2 || p < 2) throw InvalidArgument("count_full: need k >= 2 and p >= 2");
  if (static_cast<std::uint64_t>(p) > n) throw InvalidArgument("count_full: p exceeds n");
  if (2 * p > k + 2) return 0;
  return detail::checked_mul(falling_factorial(n, p), enumerate_canonical(k, p).count);
}

/// n(n-1)...(n-p+1) * (1/p) C(2p-2, p-1) * C(k, 2p-2) * p^{2(k-2p+2)}.
inline double fk_bound(std::uint64_t n, int k, int p) {
  if (p < 2 || static_cast<std::uint64_t>(p) > n || k < 2 * p - 2) {
    throw InvalidArgument("fk_bound: need n >= p >= 2 and k >= 2p - 2");
  }
  double ff = 1.0;
  for (int i = 0; i < p; ++i) ff *= static_cast<double>(n - static_cast<std::uint64_t>(i));
  const double catalan = detail::binomial(2 * p - 2, p - 1) / static_cast<double>(p);
  return ff * catalan * detail::binomial(k, 2 * p - 2) * std::pow(static_cast<double>(p), 2.0 * (k - 2 * p + 2));
}

/// C(k, 2p-2) * 2^{2k-2p+3} * p^{k-2p+2} * (k-2p+4)^{k-2p+2}.
inline double vu_bound(int k, int p) {
  detail::require_walk_range(k, p);
  const int e = k - 2 * p + 2;
  return detail::binomial(k, 2 * p - 2) * std::ldexp(1.0, 2 * k - 2 * p + 3) *
         std::pow(static_cast<double>(p), e) * std::pow(static_cast<double>(k - 2 * p + 4), e);
}

/// n * Delta^{p-1} * vu_bound(k, p): the p-vertex contribution to the trace bound.
inline double s_term(double n, int k, int p, double max_variance_sum) {
  if (!(max_variance_sum > 0.0)) throw InvalidArgument("s_term: Delta must be positive");
  if (!(n > 0.0)) throw InvalidArgument("s_term: n must be positive");
  return n * std::pow(max_variance_sum, p - 1) * vu_bound(k, p);
}

/// Whether S(n,k,p-1) <= (16 k^4 / Delta) S(n,k,p) at relative tolerance 1e-12.
inline bool s_ratio_holds(double n, int k, int p, double max_variance_sum) {
  if (p < 3) throw InvalidArgument("s_ratio_holds: p must be >= 3");
  const double lhs = s_term(n, k, p - 1, max_variance_sum);
  const double rhs = 16.0 * std::pow(k, 4) / max_variance_sum * s_term(n, k, p, max_variance_sum);
  return lhs <= rhs * (1.0 + 1e-12);
}

struct TraceBound {
  double value = 0.0;        // 2^{k+2} n Delta^{k/2}
  bool condition_holds = false;  // k^4 <= Delta / 32
};

inline TraceBound trace_bound(double n, int k, double max_variance_sum) {
  if (k < 2 || k % 2 != 0) throw InvalidArgument("trace_bound: k must be even and >= 2");
  TraceBound tb;
  tb.value = std::ldexp(1.0, k + 2) * n * std::pow(max_variance_sum, k / 2);
  tb.condition_holds = std::pow(static_cast<double>(k), 4) <= max_variance_sum / 32.0;
  return tb;
}

/// E(b^q) for b = X - p with X ~ Bernoulli(p).
inline double centered_bernoulli_moment(double p, int q) {
  return p * std::pow(1.0 - p, q) + (1.0 - p) * std::pow(-p, q);
}

namespace detail {

inline constexpr double kWalkBudget = 1e8;

inline void require_budget(Index n, int k) {
  if (k < 1) throw InvalidArgument("walk length must be positive");
  if (std::pow(static_cast<double>(n), k) > kWalkBudget) {
    throw BudgetExceeded("n^k exceeds the enumeration budget of 1e8 walks");
  }
}

// Sums weight(multiplicities) over closed walks of length k on K_n with no
// loops. With good_only, walks having an edge of multiplicity one are
// skipped (pruned as soon as the remaining steps cannot pair them up).
template <typename EdgeWeight>
double sum_over_walks(Index n, int k, bool good_only, EdgeWeight&& weight) {
  std::vector<int> mult(static_cast<std::size_t>(n * n), 0);
  std::vector<std::pair<int, int>> touched;
  std::vector<int> seq(static_cast<std::size_t>(k));
  int singles = 0;
  double total = 0.0;
  auto idx = [n](int a, int b) { return static_cast<std::size_t>(std::min(a, b) * n + std::max(a, b)); };
  auto add = [&](int a, int b) {
    int& m = mult[idx(a, b)];
    if (m == 0) touched.emplace_back(std::min(a, b), std::max(a, b));
    ++m;
    if (m == 1) ++singles;
    else if (m == 2) --singles;
  };
  auto remove = [&](int a, int b) {
    int& m = mult[idx(a, b)];
    if (m == 1) --singles;
    else if (m == 2) ++singles;
    --m;
    if (m == 0) touched.pop_back();
  };
  auto leaf = [&] {
    double prod = 1.0;
    for (const auto& [a, b] : touched) {
      prod *= weight(a, b, mult[idx(a, b)]);
      if (prod == 0.0) break;
    }
    total += prod;
  };
  auto rec = [&](auto&& self, int pos) -> void {
    if (pos == k) {
      const int last = seq[k - 1];
      if (last == seq[0]) return;
      add(last, seq[0]);
      if (!good_only || singles == 0) leaf();
      remove(last, seq[0]);
      return;
    }
    for (int v = 0; v < n; ++v) {
      if (v == seq[pos - 1]) continue;
      seq[pos] = v;
      add(seq[pos - 1], v);
      if (!good_only || singles <= k - pos) self(self, pos + 1);
      remove(seq[pos - 1], v);
    }
  };
  if (k == 1) return 0.0;  // a closed walk of length one is a loop
  for (int start = 0; start < n; ++start) {
    seq[0] = start;
    rec(rec, 1);
  }
  return total;
}

}  // namespace detail

/// E tr(B^k) for B = A - Abar, by summing prod_e E(b_e^{q_e}) over closed walks.
/// `good_only = false` visits every closed walk; the result is the same
/// because a multiplicity-one edge contributes a zero factor.
inline double exact_trace_moment(const ProbabilityMatrix& pm, int k, bool good_only = true) {
  detail::require_budget(pm.n(), k);
  const Matrix& p = pm.matrix();
  return detail::sum_over_walks(pm.n(), k, good_only,
                                [&](int a, int b, int q) { return centered_bernoulli_moment(p(a, b), q); });
}

/// Sum over good closed walks of prod_e sigma_e^2 with sigma_e^2 = p_e (1 - p_e).
inline double walk_weight_bound(const ProbabilityMatrix& pm, int k) {
  detail::require_budget(pm.n(), k);
  const Matrix& p = pm.matrix();
  return detail::sum_over_walks(pm.n(), k, true,
                                [&](int a, int b, int) { return p(a, b) * (1.0 - p(a, b)); });
}

/// tr(B^k) by repeated squaring.
inline double trace_of_power(const Matrix& b, int k) {
  if (k < 0) throw InvalidArgument("trace_of_power: negative exponent");
  Matrix result = Matrix::Identity(b.rows(), b.cols());
  Matrix base = b;
  for (int e = k; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  return result.trace();
}

}  // namespace eirg
