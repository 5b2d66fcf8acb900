#pragma once

// Graph Laplacian L = D - W and the Dirichlet energy f^T L f.
//
// Sign convention: L is positive semidefinite, with the weighted degree on
// the diagonal and -w_ij off the diagonal. The reversed-sign form (which
// flips every eigenvalue) is never produced.

#include "graphheat/graph.hpp"

namespace graphheat {

enum class LaplacianConvention { DminusW };

struct LaplacianMatrix {
  SparseSymMatrix l;
  LaplacianConvention convention = LaplacianConvention::DminusW;

  std::size_t dim() const noexcept { return l.dim(); }
};

inline LaplacianMatrix build_laplacian(const Graph& g) {
  std::vector<Triplet> t;
  std::vector<double> degree(g.n_nodes, 0.0);
  for (const auto& e : g.edges()) {
    t.push_back({e.i, e.j, -e.w});
    degree[e.i] += e.w;
    degree[e.j] += e.w;
  }
  for (std::size_t i = 0; i < g.n_nodes; ++i) t.push_back({i, i, degree[i]});
  return {SparseSymMatrix::from_triplets(g.n_nodes, t)};
}

/// f^T L f.
inline double dirichlet_energy(const LaplacianMatrix& l, const Vector& f) {
  if (static_cast<std::size_t>(f.size()) != l.dim()) throw InputError("dirichlet_energy: signal length mismatch");
  return f.dot(matvec(l.l, f));
}

/// Sum over edges of w_ij (f_i - f_j)^2. Same value as the quadratic form.
inline double dirichlet_energy(const Graph& g, const Vector& f) {
  if (static_cast<std::size_t>(f.size()) != g.n_nodes) throw InputError("dirichlet_energy: signal length mismatch");
  double s = 0.0;
  for (const auto& e : g.edges()) {
    const double d = f[static_cast<Eigen::Index>(e.i)] - f[static_cast<Eigen::Index>(e.j)];
    s += e.w * d * d;
  }
  return s;
}

/// L + alpha I, positive definite for alpha > 0.
inline SparseSymMatrix shift_regularize(const LaplacianMatrix& l, double alpha) {
  if (!(alpha > 0.0)) throw InputError("shift_regularize: alpha must be positive");
  auto t = l.l.upper_triplets();
  for (std::size_t i = 0; i < l.dim(); ++i) t.push_back({i, i, alpha});
  return SparseSymMatrix::from_triplets(l.dim(), t);
}

}  // namespace graphheat
