#pragma once

// Laplacian of noisy planar data at a point, from a least-squares quadratic
// fit mu(u, v) = b0 + b1 u + b2 v + b3 u^2 + b4 uv + b5 v^2 over its
// neighbors. The fit always goes through the Moore-Penrose inverse of the
// design matrix, so fewer than six samples or collinear neighbors yield the
// minimum-norm coefficients instead of an error.

#include <array>

#include "graphheat/numkernel.hpp"

namespace graphheat {

using Point2 = std::array<double, 2>;

struct NeighborSample {
  Point2 point;
  double value;
};

struct NeighborhoodSample {
  Point2 center{0.0, 0.0};
  /// May include the center itself as an observation.
  std::vector<NeighborSample> neighbors;
};

struct QuadraticFit {
  std::array<double, 6> beta{};
  std::size_t rank = 0;
  double residual_norm = 0.0;
  double condition = 0.0;
  /// Retained singular values span more than 1e8.
  bool ill_conditioned = false;
};

/// Rows (1, u, v, u^2, uv, v^2) in coordinates translated so the center is
/// the origin.
inline DenseMatrix quadratic_design_matrix(const NeighborhoodSample& s) {
  DenseMatrix x(static_cast<Eigen::Index>(s.neighbors.size()), 6);
  for (std::size_t i = 0; i < s.neighbors.size(); ++i) {
    const double u = s.neighbors[i].point[0] - s.center[0];
    const double v = s.neighbors[i].point[1] - s.center[1];
    x.row(static_cast<Eigen::Index>(i)) << 1.0, u, v, u * u, u * v, v * v;
  }
  return x;
}

inline QuadraticFit fit_quadratic(const NeighborhoodSample& s) {
  if (s.neighbors.empty()) throw InputError("fit_quadratic: neighborhood is empty");
  for (const auto& n : s.neighbors)
    if (!std::isfinite(n.point[0]) || !std::isfinite(n.point[1]) || !std::isfinite(n.value))
      throw InputError("fit_quadratic: non-finite sample");
  if (!std::isfinite(s.center[0]) || !std::isfinite(s.center[1])) throw InputError("fit_quadratic: non-finite center");

  const DenseMatrix x = quadratic_design_matrix(s);
  Vector y(x.rows());
  for (std::size_t i = 0; i < s.neighbors.size(); ++i) y[static_cast<Eigen::Index>(i)] = s.neighbors[i].value;

  const PinvResult inv = pinv_detailed(x);
  const Vector beta = inv.inverse * y;
  QuadraticFit fit;
  for (int k = 0; k < 6; ++k) fit.beta[static_cast<std::size_t>(k)] = beta[k];
  fit.rank = inv.rank;
  fit.residual_norm = (x * beta - y).norm();
  fit.condition = inv.condition;
  fit.ill_conditioned = inv.condition > 1e8;
  return fit;
}

inline double laplacian_from_fit(const QuadraticFit& fit) { return 2.0 * fit.beta[3] + 2.0 * fit.beta[5]; }

/// 2 b3 + 2 b5 of the fitted quadratic.
inline double estimate_laplacian(const NeighborhoodSample& s) { return laplacian_from_fit(fit_quadratic(s)); }

}  // namespace graphheat
