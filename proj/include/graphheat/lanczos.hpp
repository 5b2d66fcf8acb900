#pragma once

// Partial spectrum of a sparse symmetric matrix by thick-restart Lanczos.
//
// The Krylov basis is fully reorthogonalized, so the restarted scheme is
// equivalent to implicitly restarted Lanczos. A single Krylov sequence sees
// only one direction of each eigenspace; repeated eigenvalues (e.g. one zero
// eigenvalue per connected component) are recovered by locking converged
// pairs and re-running from a fresh random start in their orthogonal
// complement until a sweep finds nothing below the current k-th value.

#include <cmath>
#include <cstdint>
#include <random>
#include <sstream>
#include <vector>

#include "graphheat/numkernel.hpp"

namespace graphheat {

struct LanczosOptions {
  double tol = 1e-11;  ///< Ritz residual tolerance relative to max(1, |A|)
  std::size_t max_restarts = 1000;
  std::size_t min_basis = 40;
  std::uint64_t seed = 0x6a09e667f3bcc908ULL;
};

namespace detail {

class LanczosRun {
 public:
  LanczosRun(const SparseSymMatrix& a, const DenseMatrix& locked, double anorm, const LanczosOptions& opt,
             std::mt19937_64& rng)
      : a_(a), locked_(locked), anorm_(anorm), opt_(opt), rng_(rng) {}

  struct Pairs {
    Vector values;
    DenseMatrix vectors;
    double worst_residual = 0.0;
  };

  Pairs run(std::size_t want) {
    const std::size_t n = a_.dim();
    const std::size_t remaining = n - static_cast<std::size_t>(locked_.cols());
    const std::size_t nb = std::min(remaining, std::max(2 * want + 20, opt_.min_basis));
    const double tol = opt_.tol * std::max(1.0, anorm_);

    DenseMatrix v = DenseMatrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(nb + 1));
    DenseMatrix h = DenseMatrix::Zero(static_cast<Eigen::Index>(nb), static_cast<Eigen::Index>(nb));
    v.col(0) = fresh_direction(v, 0);

    std::size_t kept = 0;
    double beta = 0.0;
    double worst = 0.0;
    for (std::size_t restart = 0; restart <= opt_.max_restarts; ++restart) {
      for (std::size_t j = kept; j < nb; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        Vector w = matvec(a_, v.col(jj));
        deflate(w);
        const auto cols = jj + 1;
        Vector coef = v.leftCols(cols).transpose() * w;
        w -= v.leftCols(cols) * coef;
        const Vector again = v.leftCols(cols).transpose() * w;
        w -= v.leftCols(cols) * again;
        coef += again;
        deflate(w);
        h.col(jj).head(cols) = coef;
        h.row(jj).head(cols) = coef.transpose();
        beta = w.norm();
        if (beta <= 1e-13 * std::max(1.0, anorm_)) {
          beta = 0.0;
          if (j + 1 < nb) v.col(jj + 1) = fresh_direction(v, jj + 1);
        } else {
          v.col(jj + 1) = w / beta;
        }
      }

      Eigen::SelfAdjointEigenSolver<DenseMatrix> small(h);
      if (small.info() != Eigen::Success) throw NumericalError("eig_partial_sym: projected eigenproblem failed");
      const Vector& theta = small.eigenvalues();
      const DenseMatrix& y = small.eigenvectors();

      const bool exhausted = nb == remaining;
      bool done = true;
      worst = 0.0;
      for (std::size_t i = 0; i < want; ++i) {
        const double r = std::abs(beta * y(static_cast<Eigen::Index>(nb - 1), static_cast<Eigen::Index>(i)));
        worst = std::max(worst, r);
        if (r > tol) done = false;
      }
      if (done || exhausted) {
        const auto ww = static_cast<Eigen::Index>(want);
        return {theta.head(ww), v.leftCols(static_cast<Eigen::Index>(nb)) * y.leftCols(ww), worst};
      }

      const std::size_t keep = std::min(nb - 1, want + (nb - want) / 2);
      const auto kk = static_cast<Eigen::Index>(keep);
      DenseMatrix ritz = v.leftCols(static_cast<Eigen::Index>(nb)) * y.leftCols(kk);
      Vector resid = v.col(static_cast<Eigen::Index>(nb));
      v.setZero();
      v.leftCols(kk) = ritz;
      h.setZero();
      for (Eigen::Index i = 0; i < kk; ++i) h(i, i) = theta[i];
      v.col(kk) = beta == 0.0 ? fresh_direction(v, kk) : resid;
      kept = keep;
    }
    std::ostringstream msg;
    msg << "eig_partial_sym: no convergence after " << opt_.max_restarts << " restarts (worst Ritz residual "
        << worst << ", tolerance " << tol << ")";
    throw NumericalError(msg.str());
  }

 private:
  void deflate(Vector& w) const {
    if (locked_.cols() == 0) return;
    for (int pass = 0; pass < 2; ++pass) w -= locked_ * (locked_.transpose() * w);
  }

  // Random unit vector orthogonal to the locked set and the first `cols`
  // columns of v.
  Vector fresh_direction(const DenseMatrix& v, Eigen::Index cols) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    for (int attempt = 0; attempt < 8; ++attempt) {
      Vector r(v.rows());
      for (Eigen::Index i = 0; i < r.size(); ++i) r[i] = gauss(rng_);
      for (int pass = 0; pass < 2; ++pass) {
        deflate(r);
        if (cols > 0) r -= v.leftCols(cols) * (v.leftCols(cols).transpose() * r);
      }
      const double nr = r.norm();
      if (nr > 1e-8) return r / nr;
    }
    throw NumericalError("eig_partial_sym: could not extend the Krylov basis");
  }

  const SparseSymMatrix& a_;
  const DenseMatrix& locked_;
  double anorm_;
  const LanczosOptions& opt_;
  std::mt19937_64& rng_;
};

inline double gershgorin_bound(const SparseSymMatrix& m) {
  double best = 0.0;
  const auto rp = m.row_ptr();
  const auto val = m.values();
  for (std::size_t i = 0; i < m.dim(); ++i) {
    double s = 0.0;
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) s += std::abs(val[k]);
    best = std::max(best, s);
  }
  return best;
}

}  // namespace detail

/// The k algebraically smallest eigenpairs of m, ascending, with the same
/// sign convention as eig_dense_sym.
inline SpectralBasis eig_partial_sym(const SparseSymMatrix& m, std::size_t k, const LanczosOptions& opt = {}) {
  const std::size_t n = m.dim();
  if (k < 1 || k >= n) {
    throw InputError("eig_partial_sym: need 1 <= k < dim (k = " + std::to_string(k) + ", dim = " + std::to_string(n) + ")");
  }
  const double anorm = detail::gershgorin_bound(m);
  const double scale = std::max(1.0, anorm);
  std::mt19937_64 rng(opt.seed);

  DenseMatrix locked(static_cast<Eigen::Index>(n), 0);
  std::vector<double> values;
  const std::size_t max_sweeps = k + 16;
  for (std::size_t sweep = 0; sweep < max_sweeps; ++sweep) {
    const std::size_t remaining = n - static_cast<std::size_t>(locked.cols());
    if (remaining == 0) break;
    const std::size_t want = std::min(sweep == 0 ? k : std::size_t{1}, remaining);
    detail::LanczosRun run(m, locked, anorm, opt, rng);
    const auto found = run.run(want);
    if (sweep > 0) {
      std::vector<double> sorted = values;
      std::sort(sorted.begin(), sorted.end());
      // Nothing below the current k-th value: the k smallest are complete.
      if (sorted.size() >= k && found.values[0] >= sorted[k - 1] - 1e-10 * scale) break;
    }
    const Eigen::Index old = locked.cols();
    locked.conservativeResize(Eigen::NoChange, old + found.vectors.cols());
    locked.rightCols(found.vectors.cols()) = found.vectors;
    for (Eigen::Index i = 0; i < found.values.size(); ++i) values.push_back(found.values[i]);
    if (sweep + 1 == max_sweeps) throw NumericalError("eig_partial_sym: locking sweeps did not settle");
  }

  // Rayleigh-Ritz over everything locked, which also restores orthogonality
  // between pairs found in different sweeps.
  Eigen::HouseholderQR<DenseMatrix> qr(locked);
  const DenseMatrix q = qr.householderQ() * DenseMatrix::Identity(locked.rows(), locked.cols());
  DenseMatrix aq(q.rows(), q.cols());
  for (Eigen::Index j = 0; j < q.cols(); ++j) aq.col(j) = matvec(m, q.col(j));
  DenseMatrix proj = q.transpose() * aq;
  proj = 0.5 * (proj + proj.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<DenseMatrix> rr(proj);
  if (rr.info() != Eigen::Success) throw NumericalError("eig_partial_sym: Rayleigh-Ritz step failed");
  const auto kk = static_cast<Eigen::Index>(k);
  SpectralBasis out{rr.eigenvalues().head(kk), q * rr.eigenvectors().leftCols(kk), n, false};

  double worst = 0.0;
  for (Eigen::Index j = 0; j < kk; ++j) {
    const Vector r = matvec(m, out.eigenvectors.col(j)) - out.eigenvalues[j] * out.eigenvectors.col(j);
    worst = std::max(worst, r.norm());
  }
  if (worst > 1e-8 * scale) {
    std::ostringstream msg;
    msg << "eig_partial_sym: residual " << worst << " exceeds tolerance " << 1e-8 * scale;
    throw NumericalError(msg.str());
  }
  detail::fix_signs(out.eigenvectors);
  return out;
}

}  // namespace graphheat
