#pragma once

// Steady-state diffusion (Laplace equation) on a graph with two boundary
// node sets held at +1 and -1, solved by least squares over a truncated
// spectral basis f = sum_j c_j psi_j:
//
//   interior rows   0 = sum_j c_j lambda_j psi_j(p)
//   G+ rows         1 = sum_j c_j psi_j(p)
//   G- rows        -1 = sum_j c_j psi_j(p)

#include <random>

#include "graphheat/spectral.hpp"

namespace graphheat {

struct BoundarySpec {
  std::vector<std::size_t> g_plus;
  std::vector<std::size_t> g_minus;
};

struct GalerkinSystem {
  DenseMatrix matrix;  ///< rows: interior, then G+, then G-; k columns
  Vector rhs;
  std::vector<std::size_t> row_nodes;
  std::size_t n_interior = 0;
  std::size_t n_plus = 0;
  std::size_t n_minus = 0;
  DenseMatrix basis_vectors;  ///< first k eigenvectors, for evaluation at all nodes
  Vector eigenvalues;         ///< first k eigenvalues

  std::size_t k() const { return static_cast<std::size_t>(matrix.cols()); }
};

/// Interior rows use all interior nodes up to this many, else a seeded
/// uniform subsample of this size.
inline constexpr std::size_t kInteriorSampleCap = 5000;

inline std::vector<std::size_t> interior_nodes(std::size_t n_nodes, const BoundarySpec& b) {
  std::vector<bool> on_boundary(n_nodes, false);
  for (auto v : b.g_plus) on_boundary.at(v) = true;
  for (auto v : b.g_minus) on_boundary.at(v) = true;
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < n_nodes; ++i)
    if (!on_boundary[i]) out.push_back(i);
  return out;
}

/// Default interior sample: everything up to kInteriorSampleCap, otherwise a
/// sorted uniform subsample drawn with the given seed.
inline std::vector<std::size_t> sample_interior(std::size_t n_nodes, const BoundarySpec& b, std::uint64_t seed = 0) {
  auto all = interior_nodes(n_nodes, b);
  if (all.size() <= kInteriorSampleCap) return all;
  std::mt19937_64 rng(seed);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(kInteriorSampleCap);
  std::sort(all.begin(), all.end());
  return all;
}

inline GalerkinSystem assemble(const SpectralBasis& basis, const BoundarySpec& b, std::span<const std::size_t> interior_sample,
                               std::size_t k, double boundary_weight = 1.0) {
  const std::size_t n = basis.n_nodes;
  if (k < 1 || k > basis.size()) throw InputError("assemble: k = " + std::to_string(k) + " exceeds basis size " + std::to_string(basis.size()));
  if (b.g_plus.empty() || b.g_minus.empty()) throw InputError("assemble: boundary sets must be nonempty");
  if (!(boundary_weight > 0.0)) throw InputError("assemble: boundary weight must be positive");

  std::vector<int> role(n, 0);  // 1 = G+, 2 = G-, 3 = interior sample
  for (auto v : b.g_plus) {
    if (v >= n) throw InputError("assemble: G+ node out of range");
    if (role[v]) throw InputError("assemble: node " + std::to_string(v) + " repeated in G+");
    role[v] = 1;
  }
  for (auto v : b.g_minus) {
    if (v >= n) throw InputError("assemble: G- node out of range");
    if (role[v]) throw InputError("assemble: node " + std::to_string(v) + " is in both G+ and G-");
    role[v] = 2;
  }
  if (b.g_plus.size() + b.g_minus.size() >= n) throw InputError("assemble: boundary sets must leave interior nodes");
  for (auto v : interior_sample) {
    if (v >= n) throw InputError("assemble: interior node out of range");
    if (role[v] == 1 || role[v] == 2) throw InputError("assemble: interior sample node " + std::to_string(v) + " lies on the boundary");
    if (role[v] == 3) throw InputError("assemble: interior node " + std::to_string(v) + " repeated");
    role[v] = 3;
  }
  const std::size_t rows = interior_sample.size() + b.g_plus.size() + b.g_minus.size();
  if (rows < k) {
    throw InputError("assemble: " + std::to_string(rows) + " sampled rows cannot determine " + std::to_string(k) + " coefficients");
  }

  GalerkinSystem sys;
  const auto kk = static_cast<Eigen::Index>(k);
  sys.basis_vectors = basis.eigenvectors.leftCols(kk);
  sys.eigenvalues = basis.eigenvalues.head(kk);
  sys.matrix.resize(static_cast<Eigen::Index>(rows), kk);
  sys.rhs.resize(static_cast<Eigen::Index>(rows));
  Eigen::Index r = 0;
  for (auto v : interior_sample) {
    sys.matrix.row(r) = sys.basis_vectors.row(static_cast<Eigen::Index>(v)).cwiseProduct(sys.eigenvalues.transpose());
    sys.rhs[r++] = 0.0;
    sys.row_nodes.push_back(v);
  }
  for (auto v : b.g_plus) {
    sys.matrix.row(r) = boundary_weight * sys.basis_vectors.row(static_cast<Eigen::Index>(v));
    sys.rhs[r++] = boundary_weight;
    sys.row_nodes.push_back(v);
  }
  for (auto v : b.g_minus) {
    sys.matrix.row(r) = boundary_weight * sys.basis_vectors.row(static_cast<Eigen::Index>(v));
    sys.rhs[r++] = -boundary_weight;
    sys.row_nodes.push_back(v);
  }
  sys.n_interior = interior_sample.size();
  sys.n_plus = b.g_plus.size();
  sys.n_minus = b.g_minus.size();
  return sys;
}

struct GalerkinSolution {
  NodeSignal potential;
  Vector coefficients;
  double system_residual = 0.0;    ///< ||Psi c - y||_2
  double interior_residual = 0.0;  ///< max |sum_j c_j lambda_j psi_j(p)| over sampled interior rows
};

inline GalerkinSolution solve(const GalerkinSystem& sys) {
  GalerkinSolution s;
  s.coefficients = pinv(sys.matrix) * sys.rhs;
  s.potential = sys.basis_vectors * s.coefficients;
  const Vector res = sys.matrix * s.coefficients - sys.rhs;
  s.system_residual = res.norm();
  s.interior_residual = sys.n_interior ? res.head(static_cast<Eigen::Index>(sys.n_interior)).cwiseAbs().maxCoeff() : 0.0;
  return s;
}

struct EdgeValue {
  std::size_t i;
  std::size_t j;
  double value;
};

/// -(f_j - f_i) w_ij on every edge, oriented i < j.
inline std::vector<EdgeValue> field_gradient(const Graph& g, const NodeSignal& f) {
  if (static_cast<std::size_t>(f.size()) != g.n_nodes) throw InputError("field_gradient: signal length mismatch");
  std::vector<EdgeValue> out;
  for (const auto& e : g.edges())
    out.push_back({e.i, e.j, -(f[static_cast<Eigen::Index>(e.j)] - f[static_cast<Eigen::Index>(e.i)]) * e.w});
  return out;
}

/// Minimum spanning tree (Prim from node 0) of a connected graph.
inline Graph minimum_spanning_tree(const Graph& g) {
  if (connected_components(g).size() != 1) throw InputError("minimum spanning tree needs a connected graph");
  using Item = std::tuple<double, std::size_t, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  std::vector<bool> in(g.n_nodes, false);
  std::vector<Edge> tree;
  auto add = [&](std::size_t u) {
    in[u] = true;
    for (const auto& [v, w] : g.neighbors(u))
      if (!in[v]) heap.emplace(w, u, v);
  };
  add(0);
  while (!heap.empty() && tree.size() + 1 < g.n_nodes) {
    const auto [w, u, v] = heap.top();
    heap.pop();
    if (in[v]) continue;
    tree.push_back({std::min(u, v), std::max(u, v), w});
    add(v);
  }
  return from_edge_list(tree, g.n_nodes);
}

/// Endpoints of a long path in the minimum spanning tree found by a double
/// sweep: farthest node from node 0, then the farthest node from that one.
/// Exact tree diameter for trees with unit weights; a heuristic otherwise.
inline BoundarySpec default_boundary(const Graph& g) {
  if (g.n_nodes < 3) throw InputError("default boundary needs at least three nodes");
  const Graph tree = minimum_spanning_tree(g);
  auto farthest = [&](std::size_t from) {
    const Vector d = geodesic_distances(tree, from);
    Eigen::Index best = 0;
    d.maxCoeff(&best);
    return static_cast<std::size_t>(best);
  };
  const std::size_t a = farthest(0);
  const std::size_t b = farthest(a);
  return {{a}, {b}};
}

}  // namespace graphheat
