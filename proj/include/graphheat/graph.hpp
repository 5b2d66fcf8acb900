#pragma once

// Weighted undirected graphs built from edge lists or binary voxel masks.

#include <array>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <utility>
#include <vector>

#include "graphheat/numkernel.hpp"

namespace graphheat {

struct Edge {
  std::size_t i;
  std::size_t j;
  double w;
  friend bool operator==(const Edge&, const Edge&) = default;
};

struct Graph {
  std::size_t n_nodes = 0;
  SparseSymMatrix adjacency;
  /// Optional node coordinates, one row per node.
  std::optional<DenseMatrix> coords;

  /// Edges with i < j in row-major order of the adjacency.
  std::vector<Edge> edges() const {
    std::vector<Edge> out;
    for (const auto& t : adjacency.triplets())
      if (t.row < t.col) out.push_back({t.row, t.col, t.value});
    return out;
  }

  std::size_t edge_count() const { return adjacency.nnz() / 2; }

  /// Neighbors of node i with their edge weights.
  std::vector<std::pair<std::size_t, double>> neighbors(std::size_t i) const {
    std::vector<std::pair<std::size_t, double>> out;
    const auto rp = adjacency.row_ptr();
    for (std::size_t k = rp[i]; k < rp[i + 1]; ++k) out.emplace_back(adjacency.col_idx()[k], adjacency.values()[k]);
    return out;
  }
};

inline Graph from_edge_list(std::span<const Edge> edges, std::size_t n_nodes) {
  if (n_nodes == 0) throw InputError("graph needs at least one node");
  std::set<std::pair<std::size_t, std::size_t>> seen;
  std::vector<Triplet> t;
  t.reserve(edges.size());
  for (const auto& e : edges) {
    if (e.i >= n_nodes || e.j >= n_nodes) {
      throw InputError("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ") out of range for " +
                       std::to_string(n_nodes) + " nodes");
    }
    if (e.i == e.j) throw InputError("self-loop at node " + std::to_string(e.i));
    if (!(e.w > 0.0) || !std::isfinite(e.w)) {
      throw InputError("edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ") has non-positive weight");
    }
    if (!seen.emplace(std::min(e.i, e.j), std::max(e.i, e.j)).second) {
      throw InputError("duplicate edge (" + std::to_string(e.i) + ", " + std::to_string(e.j) + ")");
    }
    t.push_back({e.i, e.j, e.w});
  }
  return Graph{n_nodes, SparseSymMatrix::from_triplets(n_nodes, t), std::nullopt};
}

inline Graph from_edge_list(std::span<const Edge> edges, std::size_t n_nodes, DenseMatrix coords) {
  Graph g = from_edge_list(edges, n_nodes);
  if (static_cast<std::size_t>(coords.rows()) != n_nodes) throw InputError("coordinate rows must match node count");
  g.coords = std::move(coords);
  return g;
}

/// 3D binary occupancy grid. Linear index is x + nx * (y + ny * z).
struct VoxelMask {
  std::array<std::size_t, 3> shape{1, 1, 1};
  std::vector<std::uint8_t> occupancy;
  std::array<double, 3> spacing{1.0, 1.0, 1.0};

  VoxelMask() = default;
  VoxelMask(std::array<std::size_t, 3> s, std::array<double, 3> sp = {1.0, 1.0, 1.0})
      : shape(s), occupancy(s[0] * s[1] * s[2], 0), spacing(sp) {
    if (s[0] == 0 || s[1] == 0 || s[2] == 0) throw InputError("voxel mask extents must be positive");
    for (double d : sp)
      if (!(d > 0.0)) throw InputError("voxel spacing must be positive");
  }

  std::size_t size() const { return occupancy.size(); }
  std::size_t index(std::size_t x, std::size_t y, std::size_t z) const { return x + shape[0] * (y + shape[1] * z); }
  std::array<std::size_t, 3> position(std::size_t idx) const {
    return {idx % shape[0], (idx / shape[0]) % shape[1], idx / (shape[0] * shape[1])};
  }
  bool at(std::size_t x, std::size_t y, std::size_t z) const { return occupancy[index(x, y, z)] != 0; }
  void set(std::size_t x, std::size_t y, std::size_t z, bool on = true) { occupancy[index(x, y, z)] = on ? 1 : 0; }
  std::size_t count() const { return static_cast<std::size_t>(std::count(occupancy.begin(), occupancy.end(), 1)); }

  friend bool operator==(const VoxelMask&, const VoxelMask&) = default;
};

enum class Connectivity { N4_2D, N8_2D, N6_3D, N18_3D, N26_3D };

inline bool is_planar(Connectivity c) { return c == Connectivity::N4_2D || c == Connectivity::N8_2D; }

/// Neighbor offsets of a scheme, forward half only (lexicographically positive).
inline std::vector<std::array<int, 3>> forward_offsets(Connectivity conn) {
  std::vector<std::array<int, 3>> out;
  for (int dz = -1; dz <= 1; ++dz)
    for (int dy = -1; dy <= 1; ++dy)
      for (int dx = -1; dx <= 1; ++dx) {
        const std::array<int, 3> d{dx, dy, dz};
        if (std::make_tuple(dz, dy, dx) <= std::make_tuple(0, 0, 0)) continue;
        const int l1 = std::abs(dx) + std::abs(dy) + std::abs(dz);
        bool ok = false;
        switch (conn) {
          case Connectivity::N4_2D: ok = dz == 0 && l1 == 1; break;
          case Connectivity::N8_2D: ok = dz == 0; break;
          case Connectivity::N6_3D: ok = l1 == 1; break;
          case Connectivity::N18_3D: ok = l1 <= 2; break;
          case Connectivity::N26_3D: ok = true; break;
        }
        if (ok) out.push_back(d);
      }
  return out;
}

/// One node per occupied voxel in (z, y, x) scan order, coordinates at voxel
/// centers times spacing, unit weights between neighboring occupied voxels.
inline Graph from_voxel_mask(const VoxelMask& mask, Connectivity conn) {
  if (is_planar(conn) && mask.shape[2] != 1) throw InputError("2D connectivity requires a mask with nz == 1");
  std::vector<std::size_t> node_of(mask.size(), std::numeric_limits<std::size_t>::max());
  std::size_t n = 0;
  for (std::size_t idx = 0; idx < mask.size(); ++idx)
    if (mask.occupancy[idx]) node_of[idx] = n++;
  if (n == 0) throw InputError("voxel mask has no occupied voxels");

  DenseMatrix coords(static_cast<Eigen::Index>(n), 3);
  std::vector<Triplet> t;
  const auto offsets = forward_offsets(conn);
  for (std::size_t idx = 0; idx < mask.size(); ++idx) {
    if (!mask.occupancy[idx]) continue;
    const auto p = mask.position(idx);
    const auto node = node_of[idx];
    for (int a = 0; a < 3; ++a)
      coords(static_cast<Eigen::Index>(node), a) = (static_cast<double>(p[static_cast<std::size_t>(a)]) + 0.5) * mask.spacing[static_cast<std::size_t>(a)];
    for (const auto& d : offsets) {
      std::array<std::size_t, 3> q{};
      bool inside = true;
      for (std::size_t a = 0; a < 3; ++a) {
        const auto c = static_cast<long long>(p[a]) + d[a];
        if (c < 0 || c >= static_cast<long long>(mask.shape[a])) inside = false;
        q[a] = static_cast<std::size_t>(c);
      }
      if (!inside) continue;
      const auto qi = mask.index(q[0], q[1], q[2]);
      if (mask.occupancy[qi]) t.push_back({node, node_of[qi], 1.0});
    }
  }
  return Graph{n, SparseSymMatrix::from_triplets(n, t), std::move(coords)};
}

/// Components as sorted node lists, ordered by smallest member.
inline std::vector<std::vector<std::size_t>> connected_components(const Graph& g) {
  std::vector<std::vector<std::size_t>> out;
  std::vector<bool> seen(g.n_nodes, false);
  const auto rp = g.adjacency.row_ptr();
  const auto ci = g.adjacency.col_idx();
  for (std::size_t s = 0; s < g.n_nodes; ++s) {
    if (seen[s]) continue;
    std::vector<std::size_t> comp{s};
    seen[s] = true;
    for (std::size_t head = 0; head < comp.size(); ++head) {
      const auto u = comp[head];
      for (std::size_t k = rp[u]; k < rp[u + 1]; ++k) {
        if (!seen[ci[k]]) {
          seen[ci[k]] = true;
          comp.push_back(ci[k]);
        }
      }
    }
    std::sort(comp.begin(), comp.end());
    out.push_back(std::move(comp));
  }
  return out;
}

/// Shortest-path lengths from source with edge weights as lengths;
/// unreachable nodes get +infinity.
inline Vector geodesic_distances(const Graph& g, std::size_t source) {
  if (source >= g.n_nodes) throw InputError("source node out of range");
  constexpr double inf = std::numeric_limits<double>::infinity();
  Vector dist = Vector::Constant(static_cast<Eigen::Index>(g.n_nodes), inf);
  using Item = std::pair<double, std::size_t>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[static_cast<Eigen::Index>(source)] = 0.0;
  heap.emplace(0.0, source);
  const auto rp = g.adjacency.row_ptr();
  const auto ci = g.adjacency.col_idx();
  const auto w = g.adjacency.values();
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[static_cast<Eigen::Index>(u)]) continue;
    for (std::size_t k = rp[u]; k < rp[u + 1]; ++k) {
      const double nd = d + w[k];
      auto& cur = dist[static_cast<Eigen::Index>(ci[k])];
      if (nd < cur) {
        cur = nd;
        heap.emplace(nd, ci[k]);
      }
    }
  }
  return dist;
}

/// Subgraph induced by a node subset; node order follows `nodes`.
inline Graph induced_subgraph(const Graph& g, std::span<const std::size_t> nodes) {
  std::vector<std::size_t> local(g.n_nodes, std::numeric_limits<std::size_t>::max());
  for (std::size_t k = 0; k < nodes.size(); ++k) local[nodes[k]] = k;
  std::vector<Triplet> t;
  for (const auto& e : g.edges())
    if (local[e.i] != std::numeric_limits<std::size_t>::max() && local[e.j] != std::numeric_limits<std::size_t>::max())
      t.push_back({local[e.i], local[e.j], e.w});
  const std::size_t n = nodes.size();
  return Graph{n, SparseSymMatrix::from_triplets(n, t), std::nullopt};
}

}  // namespace graphheat
