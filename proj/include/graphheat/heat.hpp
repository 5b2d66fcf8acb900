#pragma once

// Discrete heat kernel K_sigma = sum_j exp(-lambda_j sigma) psi_j psi_j^T and
// heat kernel smoothing of node signals.
//
// Smoothing runs in the spectral domain and never forms the p x p kernel
// unless materialize() is called. A kernel built on a truncated basis is a
// low-pass approximation: it is not doubly stochastic and K_0 != I.

#include <memory>

#include "graphheat/spectral.hpp"

namespace graphheat {

class HeatKernel {
 public:
  HeatKernel(std::shared_ptr<const SpectralBasis> basis, double sigma) : basis_(std::move(basis)), sigma_(sigma) {
    if (!basis_) throw InputError("heat kernel needs a spectral basis");
    if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw InputError("heat kernel bandwidth must be finite and nonnegative");
  }

  double sigma() const noexcept { return sigma_; }
  const SpectralBasis& basis() const noexcept { return *basis_; }
  std::shared_ptr<const SpectralBasis> shared_basis() const noexcept { return basis_; }
  bool complete() const noexcept { return basis_->complete; }
  bool truncated() const noexcept { return !basis_->complete; }
  std::size_t n_nodes() const noexcept { return basis_->n_nodes; }

  /// exp(-lambda_j sigma). Negative eigenvalues are rounding noise on a
  /// positive semidefinite L and are clamped to zero.
  Vector weights() const {
    return basis_->eigenvalues.unaryExpr([s = sigma_](double l) { return std::exp(-std::max(l, 0.0) * s); });
  }

  DenseMatrix materialize() const {
    const auto& psi = basis_->eigenvectors;
    return psi * weights().asDiagonal() * psi.transpose();
  }

 private:
  std::shared_ptr<const SpectralBasis> basis_;
  double sigma_;
};

inline HeatKernel build_kernel(std::shared_ptr<const SpectralBasis> basis, double sigma) {
  return HeatKernel(std::move(basis), sigma);
}

inline HeatKernel build_kernel(SpectralBasis basis, double sigma) {
  return HeatKernel(std::make_shared<const SpectralBasis>(std::move(basis)), sigma);
}

/// K_sigma f = sum_j exp(-lambda_j sigma) f~_j psi_j.
inline NodeSignal smooth(const HeatKernel& kernel, const NodeSignal& f) {
  if (static_cast<std::size_t>(f.size()) != kernel.n_nodes()) throw InputError("smooth: signal length mismatch");
  if (kernel.sigma() == 0.0 && kernel.complete()) return f;  // K_0 = I exactly
  const auto& psi = kernel.basis().eigenvectors;
  const Vector coef = psi.transpose() * f;
  return psi * kernel.weights().cwiseProduct(coef);
}

/// Covariance of K_sigma e for noise covariance r_e: K_sigma R_e K_sigma.
inline DenseMatrix smoothed_covariance(const HeatKernel& kernel, const DenseMatrix& r_e) {
  const auto n = static_cast<Eigen::Index>(kernel.n_nodes());
  if (r_e.rows() != n || r_e.cols() != n) throw InputError("smoothed_covariance: covariance dimension mismatch");
  const double scale = std::max(1.0, r_e.cwiseAbs().maxCoeff());
  if ((r_e - r_e.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
    throw InputError("smoothed_covariance: covariance is not symmetric");
  Eigen::SelfAdjointEigenSolver<DenseMatrix> es(r_e, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() < -1e-10 * scale)
    throw InputError("smoothed_covariance: covariance is not positive semidefinite");
  const DenseMatrix k = kernel.materialize();
  return k * r_e * k;
}

/// K_sigma^n = K_{n sigma}; exact only for a complete basis.
inline HeatKernel iterate_kernel(const HeatKernel& kernel, std::size_t n) {
  if (n < 1) throw InputError("iterate_kernel: n must be at least 1");
  if (!kernel.complete()) throw InputError("iterate_kernel: semigroup identity requires a complete basis");
  return HeatKernel(kernel.shared_basis(), kernel.sigma() * static_cast<double>(n));
}

}  // namespace graphheat
