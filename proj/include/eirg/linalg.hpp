#pragma once

// Dense symmetric eigensolver front end. Eigen's self-adjoint solver
// (Householder tridiagonalization followed by implicit symmetric QL) does
// the work; this layer pins ordering, sign conventions and the residual
// contract the rest of the library relies on.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "eirg/error.hpp"
#include "eirg/models.hpp"

namespace eirg {

/// Real symmetric matrix; entries(i,j) == entries(j,i) bit for bit.
class SymmetricMatrix {
 public:
  SymmetricMatrix() = default;

  /// Rejects input that is not exactly symmetric.
  explicit SymmetricMatrix(Matrix m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw InvalidArgument("symmetric matrix must be square");
    for (Index j = 0; j < m_.cols(); ++j) {
      for (Index i = j + 1; i < m_.rows(); ++i) {
        if (!(m_(i, j) == m_(j, i)) && !(std::isnan(m_(i, j)) && std::isnan(m_(j, i)))) {
          throw InvalidArgument("matrix is not symmetric");
        }
      }
    }
  }

  /// (m + m^T)/2, which is exactly symmetric since IEEE addition commutes.
  static SymmetricMatrix symmetrized(const Matrix& m) {
    if (m.rows() != m.cols()) throw InvalidArgument("symmetric matrix must be square");
    Matrix s = 0.5 * (m + m.transpose());
    SymmetricMatrix out;
    out.m_ = std::move(s);
    return out;
  }

  static SymmetricMatrix zero(Index n) { return SymmetricMatrix(Matrix::Zero(n, n)); }
  static SymmetricMatrix identity(Index n) { return SymmetricMatrix(Matrix::Identity(n, n)); }

  Index n() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(Index i, Index j) const { return m_(i, j); }

  double max_abs() const { return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff(); }

  friend SymmetricMatrix operator+(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    check_same(a, b);
    SymmetricMatrix out;
    out.m_ = a.m_ + b.m_;
    return out;
  }
  friend SymmetricMatrix operator-(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    check_same(a, b);
    SymmetricMatrix out;
    out.m_ = a.m_ - b.m_;
    return out;
  }
  friend SymmetricMatrix operator*(double c, const SymmetricMatrix& a) {
    SymmetricMatrix out;
    out.m_ = c * a.m_;
    return out;
  }
  SymmetricMatrix operator-() const { return -1.0 * *this; }

 private:
  static void check_same(const SymmetricMatrix& a, const SymmetricMatrix& b) {
    if (a.n() != b.n()) throw DimensionMismatch("symmetric matrices of different dimension");
  }

  Matrix m_;
};

/// Sorted spectrum of a symmetric matrix.
struct SpectralSummary {
  std::vector<double> eigenvalues;  // non-decreasing
  double spectral_norm = 0.0;       // max |lambda|
  double residual = 0.0;            // max_i ||M v_i - lambda_i v_i||_2
};

/// Full eigendecomposition. Column i of `vectors` pairs with values[i];
/// each column has its first nonzero component positive.
struct EigenDecomposition {
  Vector values;
  Matrix vectors;
};

namespace detail {

inline void require_finite(const SymmetricMatrix& m) {
  if (!m.matrix().allFinite()) throw InvalidArgument("matrix has non-finite entries");
}

inline void normalize_signs(Matrix& v) {
  const double eps = 1e-12;
  for (Index c = 0; c < v.cols(); ++c) {
    for (Index r = 0; r < v.rows(); ++r) {
      if (std::abs(v(r, c)) > eps) {
        if (v(r, c) < 0.0) v.col(c) *= -1.0;
        break;
      }
    }
  }
}

}  // namespace detail

/// Eigenvalues only, non-decreasing. The fast path for large n.
inline std::vector<double> eigenvalues(const SymmetricMatrix& m) {
  detail::require_finite(m);
  if (m.n() == 0) return {};
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix(), Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw Error("eigensolver did not converge");
  std::vector<double> out(es.eigenvalues().data(), es.eigenvalues().data() + m.n());
  std::sort(out.begin(), out.end());
  return out;
}

inline EigenDecomposition eigen_decompose(const SymmetricMatrix& m) {
  detail::require_finite(m);
  EigenDecomposition out;
  if (m.n() == 0) return out;
  Eigen::SelfAdjointEigenSolver<Matrix> es(m.matrix(), Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw Error("eigensolver did not converge");
  // Eigen returns ascending values; a stable sort keeps equal values in solver order.
  std::vector<Index> order(static_cast<std::size_t>(m.n()));
  for (Index i = 0; i < m.n(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return es.eigenvalues()[a] < es.eigenvalues()[b]; });
  out.values.resize(m.n());
  out.vectors.resize(m.n(), m.n());
  for (Index i = 0; i < m.n(); ++i) {
    out.values[i] = es.eigenvalues()[order[i]];
    out.vectors.col(i) = es.eigenvectors().col(order[i]);
  }
  detail::normalize_signs(out.vectors);
  return out;
}

inline double max_abs_eigenvalue(const std::vector<double>& sorted) {
  if (sorted.empty()) return 0.0;
  return std::max(std::abs(sorted.front()), std::abs(sorted.back()));
}

/// Full spectrum with eigenpair residual.
inline SpectralSummary eigen_symmetric(const SymmetricMatrix& m) {
  SpectralSummary out;
  if (m.n() == 0) return out;
  EigenDecomposition ed = eigen_decompose(m);
  out.eigenvalues.assign(ed.values.data(), ed.values.data() + m.n());
  out.spectral_norm = max_abs_eigenvalue(out.eigenvalues);
  const Matrix r = m.matrix() * ed.vectors - ed.vectors * ed.values.asDiagonal();
  out.residual = r.colwise().norm().maxCoeff();
  return out;
}

inline double spectral_norm(const SymmetricMatrix& m) { return max_abs_eigenvalue(eigenvalues(m)); }

/// max_i |a_i - b_i| over two sorted spectra of equal length.
inline double max_sorted_gap(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("spectra of different length");
  double gap = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) gap = std::max(gap, std::abs(a[i] - b[i]));
  return gap;
}

/// max_i |lambda_i(a) - lambda_i(b)|, both spectra sorted non-decreasing.
inline double weyl_deviation(const SymmetricMatrix& a, const SymmetricMatrix& b) {
  if (a.n() != b.n()) throw DimensionMismatch("weyl_deviation: dimension mismatch");
  return max_sorted_gap(eigenvalues(a), eigenvalues(b));
}

}  // namespace eirg
