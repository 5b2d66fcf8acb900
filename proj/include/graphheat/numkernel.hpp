#pragma once

// Dense and sparse numerical primitives shared by every other module.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include <Eigen/Dense>

#include "graphheat/errors.hpp"
#include "graphheat/parallel.hpp"

namespace graphheat {

using Vector = Eigen::VectorXd;
using DenseMatrix = Eigen::MatrixXd;

/// Dimension above which the dense eigensolver refuses to run.
inline constexpr std::size_t kDenseThreshold = 4096;

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

/// Compressed-sparse-row storage of a symmetric matrix. Both triangles are
/// stored, so every row can be walked without a transpose.
class SparseSymMatrix {
 public:
  SparseSymMatrix() = default;

  /// Builds from triplets. An off-diagonal triplet (i, j, v) populates both
  /// (i, j) and (j, i); list each unordered pair once. Repeated positions
  /// are summed and entries that end up exactly zero are dropped.
  static SparseSymMatrix from_triplets(std::size_t dim, std::span<const Triplet> entries) {
    for (const auto& t : entries) {
      if (t.row >= dim || t.col >= dim) {
        throw InputError("triplet index (" + std::to_string(t.row) + ", " + std::to_string(t.col) +
                         ") out of range for dimension " + std::to_string(dim));
      }
      if (!std::isfinite(t.value)) throw InputError("non-finite matrix entry");
    }
    std::vector<Triplet> full;
    full.reserve(entries.size() * 2);
    for (const auto& t : entries) {
      full.push_back(t);
      if (t.row != t.col) full.push_back({t.col, t.row, t.value});
    }
    std::sort(full.begin(), full.end(), [](const Triplet& a, const Triplet& b) {
      return std::tie(a.row, a.col) < std::tie(b.row, b.col);
    });

    SparseSymMatrix m;
    m.dim_ = dim;
    m.row_ptr_.assign(dim + 1, 0);
    for (std::size_t k = 0; k < full.size();) {
      std::size_t e = k;
      double sum = 0.0;
      while (e < full.size() && full[e].row == full[k].row && full[e].col == full[k].col) {
        sum += full[e].value;
        ++e;
      }
      if (sum != 0.0) {
        m.col_idx_.push_back(full[k].col);
        m.values_.push_back(sum);
        ++m.row_ptr_[full[k].row + 1];
      }
      k = e;
    }
    for (std::size_t i = 0; i < dim; ++i) m.row_ptr_[i + 1] += m.row_ptr_[i];
    return m;
  }

  static SparseSymMatrix identity(std::size_t dim) {
    std::vector<Triplet> t;
    t.reserve(dim);
    for (std::size_t i = 0; i < dim; ++i) t.push_back({i, i, 1.0});
    return from_triplets(dim, t);
  }

  static SparseSymMatrix zero(std::size_t dim) { return from_triplets(dim, {}); }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t nnz() const noexcept { return values_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }

  double at(std::size_t i, std::size_t j) const {
    if (i >= dim_ || j >= dim_) throw InputError("matrix index out of range");
    const auto b = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i]);
    const auto e = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[i + 1]);
    const auto it = std::lower_bound(b, e, j);
    if (it == e || *it != j) return 0.0;
    return values_[static_cast<std::size_t>(it - col_idx_.begin())];
  }

  /// All stored entries in row-major order.
  std::vector<Triplet> triplets() const {
    std::vector<Triplet> out;
    out.reserve(nnz());
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) out.push_back({i, col_idx_[k], values_[k]});
    return out;
  }

  /// Stored entries with row <= col, the form accepted by from_triplets.
  std::vector<Triplet> upper_triplets() const {
    std::vector<Triplet> out;
    for (const auto& t : triplets())
      if (t.row <= t.col) out.push_back(t);
    return out;
  }

  DenseMatrix to_dense() const {
    DenseMatrix d = DenseMatrix::Zero(static_cast<Eigen::Index>(dim_), static_cast<Eigen::Index>(dim_));
    for (std::size_t i = 0; i < dim_; ++i)
      for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k)
        d(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(col_idx_[k])) = values_[k];
    return d;
  }

  friend bool operator==(const SparseSymMatrix&, const SparseSymMatrix&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

/// y = m v. Each row is summed in ascending column order.
inline Vector matvec(const SparseSymMatrix& m, const Vector& v) {
  if (static_cast<std::size_t>(v.size()) != m.dim()) {
    throw InputError("matvec: vector length " + std::to_string(v.size()) + " does not match dimension " +
                     std::to_string(m.dim()));
  }
  Vector y(v.size());
  const auto rp = m.row_ptr();
  const auto ci = m.col_idx();
  const auto val = m.values();
  parallel_for(m.dim(), 4096, [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) {
      double s = 0.0;
      for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) s += val[k] * v[static_cast<Eigen::Index>(ci[k])];
      y[static_cast<Eigen::Index>(i)] = s;
    }
  });
  return y;
}

/// Thin singular value decomposition x = u diag(d) vt.
struct SvdResult {
  DenseMatrix u;   ///< rows x r, orthonormal columns
  Vector d;        ///< r values, nonincreasing, nonnegative
  DenseMatrix vt;  ///< r x cols, orthonormal rows
};

namespace detail {
inline void require_finite(const DenseMatrix& x, const char* what) {
  if (x.size() == 0) throw InputError(std::string(what) + ": empty matrix");
  if (!x.allFinite()) throw InputError(std::string(what) + ": matrix has non-finite entries");
}
}  // namespace detail

inline SvdResult svd(const DenseMatrix& x) {
  detail::require_finite(x, "svd");
  Eigen::JacobiSVD<DenseMatrix> solver(x, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (solver.info() != Eigen::Success) throw NumericalError("svd: decomposition did not converge");
  SvdResult r{solver.matrixU(), solver.singularValues(), solver.matrixV().transpose()};
  if (!r.u.allFinite() || !r.d.allFinite() || !r.vt.allFinite())
    throw NumericalError("svd: decomposition produced non-finite factors");
  return r;
}

struct PinvResult {
  DenseMatrix inverse;
  std::size_t rank = 0;
  /// Ratio of the largest to the smallest retained singular value.
  double condition = 0.0;
};

/// Default relative cutoff for pinv: 1e-12 * max(rows, cols).
inline double default_rank_tol(const DenseMatrix& x) {
  return 1e-12 * static_cast<double>(std::max(x.rows(), x.cols()));
}

/// Moore-Penrose inverse V D^- U^T. Singular values at or below
/// rank_tol * d_max are treated as zero.
inline PinvResult pinv_detailed(const DenseMatrix& x, std::optional<double> rank_tol = std::nullopt) {
  const double tol = rank_tol.value_or(default_rank_tol(x));
  if (!(tol >= 0.0)) throw InputError("pinv: rank_tol must be nonnegative");
  const SvdResult s = svd(x);
  const double dmax = s.d.size() > 0 ? s.d[0] : 0.0;
  Vector dinv = Vector::Zero(s.d.size());
  PinvResult out;
  double dmin_kept = 0.0;
  for (Eigen::Index i = 0; i < s.d.size(); ++i) {
    if (s.d[i] > tol * dmax && s.d[i] > 0.0) {
      dinv[i] = 1.0 / s.d[i];
      ++out.rank;
      dmin_kept = s.d[i];
    }
  }
  out.condition = out.rank > 0 ? dmax / dmin_kept : 0.0;
  out.inverse = s.vt.transpose() * dinv.asDiagonal() * s.u.transpose();
  return out;
}

inline DenseMatrix pinv(const DenseMatrix& x, std::optional<double> rank_tol = std::nullopt) {
  return pinv_detailed(x, rank_tol).inverse;
}

/// Eigenpairs of a symmetric matrix, eigenvalues ascending, eigenvectors as
/// orthonormal columns.
struct SpectralBasis {
  Vector eigenvalues;
  DenseMatrix eigenvectors;  ///< n_nodes x k
  std::size_t n_nodes = 0;
  bool complete = false;  ///< k == n_nodes

  std::size_t size() const noexcept { return static_cast<std::size_t>(eigenvalues.size()); }
  double eigenvalue(std::size_t j) const { return eigenvalues[static_cast<Eigen::Index>(j)]; }
  auto eigenvector(std::size_t j) const { return eigenvectors.col(static_cast<Eigen::Index>(j)); }

  /// Leading k pairs.
  SpectralBasis truncated(std::size_t k) const {
    if (k > size()) throw InputError("cannot truncate a basis of size " + std::to_string(size()) + " to " + std::to_string(k));
    const auto kk = static_cast<Eigen::Index>(k);
    return {eigenvalues.head(kk), eigenvectors.leftCols(kk), n_nodes, k == n_nodes};
  }
};

namespace detail {
/// Flips each column so its first entry with |value| > 1e-12 is nonnegative.
inline void fix_signs(DenseMatrix& vecs) {
  for (Eigen::Index j = 0; j < vecs.cols(); ++j) {
    for (Eigen::Index i = 0; i < vecs.rows(); ++i) {
      if (std::abs(vecs(i, j)) > 1e-12) {
        if (vecs(i, j) < 0.0) vecs.col(j) *= -1.0;
        break;
      }
    }
  }
}
}  // namespace detail

/// Full spectrum via a dense symmetric eigensolver.
inline SpectralBasis eig_dense_sym(const SparseSymMatrix& m, std::size_t threshold = kDenseThreshold) {
  if (m.dim() > threshold) {
    throw InputError("eig_dense_sym: dimension " + std::to_string(m.dim()) + " exceeds dense threshold " +
                     std::to_string(threshold) + "; use eig_partial_sym");
  }
  if (m.dim() == 0) throw InputError("eig_dense_sym: empty matrix");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> solver(m.to_dense());
  if (solver.info() != Eigen::Success) throw NumericalError("eig_dense_sym: eigensolver did not converge");
  SpectralBasis b{solver.eigenvalues(), solver.eigenvectors(), m.dim(), true};
  detail::fix_signs(b.eigenvectors);
  return b;
}

}  // namespace graphheat
