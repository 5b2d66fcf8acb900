#pragma once

// Shared graph generators and independent reference computations for tests.

#include <random>

#include "graphheat/graphheat.hpp"

namespace gh_test {

using namespace graphheat;

inline Graph path_graph(std::size_t n, double w = 1.0) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i + 1 < n; ++i) e.push_back({i, i + 1, w});
  return from_edge_list(e, n);
}

inline Graph cycle_graph(std::size_t n) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i) e.push_back({i, (i + 1) % n, 1.0});
  return from_edge_list(e, n);
}

inline Graph complete_graph(std::size_t n, double w = 1.0) {
  std::vector<Edge> e;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) e.push_back({i, j, w});
  return from_edge_list(e, n);
}

inline double draw_weight(std::mt19937_64& rng, bool unit) {
  if (unit) return 1.0;
  return std::uniform_real_distribution<double>(0.1, 2.0)(rng);
}

/// Random tree: node i attaches to a uniformly chosen earlier node.
inline std::vector<Edge> random_tree_edges(std::size_t n, std::mt19937_64& rng, bool unit = false) {
  std::vector<Edge> e;
  for (std::size_t i = 1; i < n; ++i) {
    const std::size_t p = std::uniform_int_distribution<std::size_t>(0, i - 1)(rng);
    e.push_back({p, i, draw_weight(rng, unit)});
  }
  return e;
}

inline Graph random_tree(std::size_t n, std::mt19937_64& rng, bool unit = false) {
  return from_edge_list(random_tree_edges(n, rng, unit), n);
}

/// Spanning tree plus each other pair with probability p.
inline Graph random_connected_graph(std::size_t n, std::mt19937_64& rng, double p = 0.1, bool unit = false) {
  auto e = random_tree_edges(n, rng, unit);
  std::set<std::pair<std::size_t, std::size_t>> seen;
  for (const auto& x : e) seen.emplace(std::min(x.i, x.j), std::max(x.i, x.j));
  std::bernoulli_distribution coin(p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!seen.count({i, j}) && coin(rng)) e.push_back({i, j, draw_weight(rng, unit)});
  return from_edge_list(e, n);
}

/// Each pair with probability p; may be disconnected.
inline Graph random_graph(std::size_t n, std::mt19937_64& rng, double p) {
  std::vector<Edge> e;
  std::bernoulli_distribution coin(p);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (coin(rng)) e.push_back({i, j, draw_weight(rng, false)});
  return from_edge_list(e, n);
}

/// Weighted incidence matrix: row per edge, +sqrt(w) at i, -sqrt(w) at j.
inline DenseMatrix incidence(const Graph& g) {
  const auto edges = g.edges();
  DenseMatrix d = DenseMatrix::Zero(static_cast<Eigen::Index>(edges.size()), static_cast<Eigen::Index>(g.n_nodes));
  for (std::size_t r = 0; r < edges.size(); ++r) {
    const double s = std::sqrt(edges[r].w);
    d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(edges[r].i)) = s;
    d(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(edges[r].j)) = -s;
  }
  return d;
}

inline Vector random_vector(std::size_t n, std::mt19937_64& rng, double sd = 1.0) {
  std::normal_distribution<double> nd(0.0, sd);
  Vector v(static_cast<Eigen::Index>(n));
  for (auto& x : v) x = nd(rng);
  return v;
}

inline DenseMatrix random_matrix(std::size_t r, std::size_t c, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, 1.0);
  DenseMatrix m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = nd(rng);
  return m;
}

/// Heat kernel by a truncated power series of exp(-sigma L), squared up.
inline DenseMatrix expm_neg(const DenseMatrix& l, double sigma) {
  int squarings = 0;
  double norm = l.cwiseAbs().rowwise().sum().maxCoeff() * sigma;
  while (norm > 0.5) {
    norm /= 2.0;
    ++squarings;
  }
  const DenseMatrix a = -sigma / std::ldexp(1.0, squarings) * l;
  DenseMatrix term = DenseMatrix::Identity(l.rows(), l.cols());
  DenseMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * a / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

/// Largest principal angle between the column spans of a and b.
inline double max_principal_angle(const DenseMatrix& a, const DenseMatrix& b) {
  const DenseMatrix qa = Eigen::HouseholderQR<DenseMatrix>(a).householderQ() * DenseMatrix::Identity(a.rows(), a.cols());
  const DenseMatrix qb = Eigen::HouseholderQR<DenseMatrix>(b).householderQ() * DenseMatrix::Identity(b.rows(), b.cols());
  Eigen::JacobiSVD<DenseMatrix> s(qa.transpose() * qb);
  const double smallest = std::min(1.0, s.singularValues().minCoeff());
  return std::acos(smallest);
}

/// Exact Dirichlet solve with G+ pinned to 1, G- to -1, L f = 0 elsewhere.
inline Vector pinned_dirichlet(const Graph& g, const BoundarySpec& b) {
  const DenseMatrix l = build_laplacian(g).l.to_dense();
  const auto n = static_cast<Eigen::Index>(g.n_nodes);
  Vector fixed = Vector::Zero(n);
  std::vector<bool> pinned(g.n_nodes, false);
  for (auto v : b.g_plus) fixed[static_cast<Eigen::Index>(v)] = 1.0, pinned[v] = true;
  for (auto v : b.g_minus) fixed[static_cast<Eigen::Index>(v)] = -1.0, pinned[v] = true;
  std::vector<Eigen::Index> free;
  for (std::size_t i = 0; i < g.n_nodes; ++i)
    if (!pinned[i]) free.push_back(static_cast<Eigen::Index>(i));
  const auto m = static_cast<Eigen::Index>(free.size());
  DenseMatrix a(m, m);
  Vector rhs(m);
  const Vector lf = l * fixed;
  for (Eigen::Index r = 0; r < m; ++r) {
    for (Eigen::Index c = 0; c < m; ++c) a(r, c) = l(free[static_cast<std::size_t>(r)], free[static_cast<std::size_t>(c)]);
    rhs[r] = -lf[free[static_cast<std::size_t>(r)]];
  }
  const Vector x = a.ldlt().solve(rhs);
  Vector f = fixed;
  for (Eigen::Index r = 0; r < m; ++r) f[free[static_cast<std::size_t>(r)]] = x[r];
  return f;
}

/// Solid tube along x with a round cross-section `width` voxels across.
inline VoxelMask tube_mask(std::size_t length, std::size_t width) {
  VoxelMask m({length, width, width});
  const double c = (static_cast<double>(width) - 1.0) / 2.0;
  const double r = static_cast<double>(width) / 2.0;
  for (std::size_t z = 0; z < width; ++z)
    for (std::size_t y = 0; y < width; ++y)
      if (std::hypot(static_cast<double>(y) - c, static_cast<double>(z) - c) <= r - 0.25)
        for (std::size_t x = 0; x < length; ++x) m.set(x, y, z);
  return m;
}

/// Tube with random one-voxel bumps on its surface, seeded.
inline VoxelMask noisy_tube_mask(std::size_t length, std::size_t width, double p, std::uint64_t seed) {
  const VoxelMask tube = tube_mask(length, width + 2);
  VoxelMask m({length, width + 2, width + 2});
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(p);
  const VoxelMask core = tube_mask(length, width);
  // Core sits one voxel in from the padded grid border.
  for (std::size_t z = 0; z < width; ++z)
    for (std::size_t y = 0; y < width; ++y)
      for (std::size_t x = 0; x < length; ++x)
        if (core.at(x, y, z)) m.set(x, y + 1, z + 1);
  const VoxelMask base = m;
  for (std::size_t z = 0; z < width + 2; ++z)
    for (std::size_t y = 0; y < width + 2; ++y)
      for (std::size_t x = 0; x < length; ++x) {
        if (base.at(x, y, z) || !tube.at(x, y, z)) continue;
        const bool touches = (y > 0 && base.at(x, y - 1, z)) || (y + 1 < width + 2 && base.at(x, y + 1, z)) ||
                             (z > 0 && base.at(x, y, z - 1)) || (z + 1 < width + 2 && base.at(x, y, z + 1));
        if (touches && coin(rng)) m.set(x, y, z);
      }
  return m;
}

/// Two copies of a mask side by side along y with an empty gap between.
inline VoxelMask side_by_side(const VoxelMask& a, std::size_t gap) {
  VoxelMask m({a.shape[0], 2 * a.shape[1] + gap, a.shape[2]}, a.spacing);
  for (std::size_t z = 0; z < a.shape[2]; ++z)
    for (std::size_t y = 0; y < a.shape[1]; ++y)
      for (std::size_t x = 0; x < a.shape[0]; ++x)
        if (a.at(x, y, z)) {
          m.set(x, y, z);
          m.set(x, y + a.shape[1] + gap, z);
        }
  return m;
}

inline double rms(const Vector& v) { return v.size() ? std::sqrt(v.squaredNorm() / static_cast<double>(v.size())) : 0.0; }

}  // namespace gh_test
