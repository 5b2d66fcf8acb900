#pragma once

// Spectral bases of graph Laplacians, graph Fourier coefficients, the Fiedler
// vector, and sign-domain / tightness analysis of node signals.

#include <optional>

#include "graphheat/lanczos.hpp"
#include "graphheat/laplacian.hpp"

namespace graphheat {

using NodeSignal = Vector;

/// Eigenpairs of L. With no k (or k == n) the full spectrum is computed
/// densely; otherwise the k smallest pairs come from the dense solver when
/// the graph is small enough and from Lanczos above the dense threshold.
inline SpectralBasis spectral_basis(const LaplacianMatrix& l, std::optional<std::size_t> k = std::nullopt,
                                    std::size_t dense_threshold = kDenseThreshold) {
  const std::size_t n = l.dim();
  const std::size_t want = k.value_or(n);
  if (want < 1 || want > n) throw InputError("spectral_basis: k must be in [1, " + std::to_string(n) + "]");
  if (n <= dense_threshold) return eig_dense_sym(l.l, dense_threshold).truncated(want);
  if (want == n) throw InputError("spectral_basis: full spectrum of " + std::to_string(n) + " nodes exceeds dense threshold");
  return eig_partial_sym(l.l, want);
}

/// f~_j = psi_j^T f for every pair in the basis.
inline Vector fourier_coefficients(const SpectralBasis& basis, const NodeSignal& f) {
  if (static_cast<std::size_t>(f.size()) != basis.n_nodes) throw InputError("fourier_coefficients: signal length mismatch");
  return basis.eigenvectors.transpose() * f;
}

/// Sum_j c_j psi_j.
inline NodeSignal fourier_synthesis(const SpectralBasis& basis, const Vector& coefficients) {
  if (static_cast<std::size_t>(coefficients.size()) != basis.size()) throw InputError("fourier_synthesis: coefficient count mismatch");
  return basis.eigenvectors * coefficients;
}

struct FiedlerResult {
  NodeSignal vector;
  double eigenvalue = 0.0;
  /// lambda_3 - lambda_2 <= 1e-8: psi_2 is one arbitrary member of its eigenspace.
  bool degenerate = false;
};

/// Second eigenvector psi_2 of a connected graph's Laplacian.
inline FiedlerResult fiedler_vector(const SpectralBasis& basis) {
  if (basis.size() < 2) throw InputError("fiedler_vector: basis needs at least two eigenpairs");
  if (basis.eigenvalue(1) <= 1e-10) {
    std::size_t zeros = 0;
    for (std::size_t j = 0; j < basis.size(); ++j)
      if (basis.eigenvalue(j) <= 1e-10) ++zeros;
    throw DisconnectedGraphError(zeros);
  }
  FiedlerResult r{basis.eigenvector(1), basis.eigenvalue(1), false};
  if (basis.size() >= 3) r.degenerate = basis.eigenvalue(2) - basis.eigenvalue(1) <= 1e-8;
  return r;
}

struct SignDomains {
  double threshold = 0.0;
  std::vector<std::vector<std::size_t>> positive_components;
  std::vector<std::vector<std::size_t>> negative_components;
  bool weak = false;

  std::size_t count() const { return positive_components.size() + negative_components.size(); }
};

/// Components of the subgraphs induced by {f > s} and {f < s} (strict), or
/// {f >= s} and {f <= s} (weak). In strict mode nodes with f == s belong to
/// neither side; in weak mode they belong to both.
inline SignDomains sign_domains(const NodeSignal& f, const Graph& g, double s, bool weak = false) {
  if (static_cast<std::size_t>(f.size()) != g.n_nodes) throw InputError("sign_domains: signal length mismatch");
  auto side = [&](auto&& pick) {
    std::vector<std::size_t> nodes;
    for (std::size_t i = 0; i < g.n_nodes; ++i)
      if (pick(f[static_cast<Eigen::Index>(i)])) nodes.push_back(i);
    auto comps = connected_components(induced_subgraph(g, nodes));
    for (auto& c : comps)
      for (auto& v : c) v = nodes[v];
    return comps;
  };
  SignDomains d;
  d.threshold = s;
  d.weak = weak;
  if (weak) {
    d.positive_components = side([s](double v) { return v >= s; });
    d.negative_components = side([s](double v) { return v <= s; });
  } else {
    d.positive_components = side([s](double v) { return v > s; });
    d.negative_components = side([s](double v) { return v < s; });
  }
  return d;
}

/// Every distinct value of f and every midpoint between consecutive distinct
/// values. The induced subgraphs only change at these thresholds.
inline std::vector<double> tightness_thresholds(const NodeSignal& f) {
  std::vector<double> v(f.data(), f.data() + f.size());
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  std::vector<double> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    out.push_back(v[i]);
    if (i + 1 < v.size()) out.push_back(0.5 * (v[i] + v[i + 1]));
  }
  return out;
}

/// True iff both strict sides are connected or empty at every threshold.
inline bool is_tight(const NodeSignal& f, const Graph& g, std::optional<std::vector<double>> thresholds = std::nullopt) {
  const auto ts = thresholds ? *thresholds : tightness_thresholds(f);
  if (ts.empty()) throw InputError("is_tight: no thresholds");
  for (double s : ts) {
    const auto d = sign_domains(f, g, s, false);
    if (d.positive_components.size() > 1 || d.negative_components.size() > 1) return false;
  }
  return true;
}

/// Number of strict sign domains of a vector at s = 0, treating entries with
/// |value| <= zero_tol * max|value| as zero.
inline std::size_t nodal_domain_count(const NodeSignal& psi, const Graph& g, double zero_tol = 1e-9) {
  const double cut = zero_tol * psi.cwiseAbs().maxCoeff();
  NodeSignal cleaned = psi;
  for (Eigen::Index i = 0; i < cleaned.size(); ++i)
    if (std::abs(cleaned[i]) <= cut) cleaned[i] = 0.0;
  return sign_domains(cleaned, g, 0.0, false).count();
}

/// Courant bound for the i-th eigenvector (1-based): at most i sign domains.
inline bool courant_check(const SpectralBasis& basis, const Graph& g, std::size_t i) {
  if (i < 1 || i > basis.size()) throw InputError("courant_check: index out of range");
  return nodal_domain_count(basis.eigenvector(i - 1), g) <= i;
}

}  // namespace graphheat
