#pragma once

// Skeletonization of binary voxel structures: smooth the voxel-graph node
// coordinates with the heat kernel, scale them, round to voxel indices and
// re-voxelize. Smoothing contracts each connected component toward its own
// centerline; scaling up before rounding keeps more of that contraction.

#include <random>

#include "graphheat/heat.hpp"

namespace graphheat {

struct SkeletonConfig {
  double sigma = 1.0;
  double scale_factor = 1.0;
  /// Eigenpairs to use. Unset: the complete basis when the graph fits the
  /// dense solver, else min(6000, n - 1).
  std::optional<std::size_t> num_eig;
  Connectivity connectivity = Connectivity::N18_3D;
};

inline constexpr std::size_t kDefaultSkeletonEig = 6000;

inline std::size_t resolve_num_eig(std::size_t n_nodes, const SkeletonConfig& cfg) {
  if (cfg.num_eig) {
    if (*cfg.num_eig < 1 || *cfg.num_eig > n_nodes) {
      throw InputError("num_eig = " + std::to_string(*cfg.num_eig) + " must lie in [1, " + std::to_string(n_nodes) + "]");
    }
    if (*cfg.num_eig == n_nodes && n_nodes > kDenseThreshold)
      throw InputError("a complete basis of " + std::to_string(n_nodes) + " nodes exceeds the dense threshold");
    return *cfg.num_eig;
  }
  if (n_nodes <= std::min(kDefaultSkeletonEig, kDenseThreshold)) return n_nodes;
  return std::min(kDefaultSkeletonEig, n_nodes - 1);
}

/// Each coordinate axis smoothed as an independent node signal.
inline DenseMatrix smooth_coordinates(const Graph& g, const HeatKernel& kernel) {
  if (!g.coords) throw InputError("smooth_coordinates: graph has no coordinates");
  if (kernel.n_nodes() != g.n_nodes) throw InputError("smooth_coordinates: kernel does not match graph");
  DenseMatrix out(g.coords->rows(), g.coords->cols());
  for (Eigen::Index a = 0; a < out.cols(); ++a) out.col(a) = smooth(kernel, g.coords->col(a));
  return out;
}

inline DenseMatrix smooth_coordinates(const Graph& g, const SkeletonConfig& cfg) {
  if (!g.coords) throw InputError("smooth_coordinates: graph has no coordinates");
  const auto basis = spectral_basis(build_laplacian(g), resolve_num_eig(g.n_nodes, cfg));
  return smooth_coordinates(g, build_kernel(basis, cfg.sigma));
}

struct SkeletonResult {
  VoxelMask mask;
  Graph graph;
  /// Skeleton node of each input node.
  std::vector<std::size_t> node_map;
  bool truncated = false;
};

/// Builds the skeleton from already smoothed physical coordinates. Each node
/// lands on voxel round((c / spacing - 1/2) * scale) of a grid enlarged by
/// ceil(shape * scale); coincident nodes merge into one skeleton node, and
/// an input edge becomes a skeleton edge when its endpoints land on
/// different voxels.
inline SkeletonResult revoxelize(const VoxelMask& mask, const Graph& g, const DenseMatrix& smoothed, double scale) {
  if (!(scale > 0.0) || !std::isfinite(scale)) throw InputError("scale factor must be positive");
  if (static_cast<std::size_t>(smoothed.rows()) != g.n_nodes || smoothed.cols() != 3)
    throw InputError("revoxelize: expected one 3D point per node");
  std::array<std::size_t, 3> shape{};
  std::array<double, 3> spacing{};
  for (std::size_t a = 0; a < 3; ++a) {
    shape[a] = static_cast<std::size_t>(std::ceil(static_cast<double>(mask.shape[a]) * scale - 1e-9));
    shape[a] = std::max<std::size_t>(shape[a], 1);
    spacing[a] = mask.spacing[a] / scale;
  }
  SkeletonResult r;
  r.mask = VoxelMask(shape, spacing);
  std::vector<std::size_t> voxel_of(g.n_nodes);
  for (std::size_t i = 0; i < g.n_nodes; ++i) {
    std::array<std::size_t, 3> q{};
    for (std::size_t a = 0; a < 3; ++a) {
      const double u = smoothed(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(a)) / mask.spacing[a] - 0.5;
      const double idx = std::round(u * scale);
      q[a] = static_cast<std::size_t>(std::clamp(idx, 0.0, static_cast<double>(shape[a] - 1)));
    }
    voxel_of[i] = r.mask.index(q[0], q[1], q[2]);
    r.mask.occupancy[voxel_of[i]] = 1;
  }

  std::vector<std::size_t> node_of_voxel(r.mask.size(), 0);
  std::size_t n = 0;
  DenseMatrix coords(static_cast<Eigen::Index>(r.mask.count()), 3);
  for (std::size_t v = 0; v < r.mask.size(); ++v) {
    if (!r.mask.occupancy[v]) continue;
    const auto p = r.mask.position(v);
    for (std::size_t a = 0; a < 3; ++a)
      coords(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(a)) = (static_cast<double>(p[a]) + 0.5) * spacing[a];
    node_of_voxel[v] = n++;
  }
  r.node_map.resize(g.n_nodes);
  for (std::size_t i = 0; i < g.n_nodes; ++i) r.node_map[i] = node_of_voxel[voxel_of[i]];

  std::set<std::pair<std::size_t, std::size_t>> links;
  for (const auto& e : g.edges()) {
    const auto a = r.node_map[e.i];
    const auto b = r.node_map[e.j];
    if (a != b) links.emplace(std::min(a, b), std::max(a, b));
  }
  std::vector<Edge> edges;
  for (const auto& [a, b] : links) edges.push_back({a, b, 1.0});
  r.graph = from_edge_list(edges, n, std::move(coords));
  return r;
}

inline SkeletonResult skeletonize(const VoxelMask& mask, const SkeletonConfig& cfg) {
  if (!(cfg.sigma >= 0.0)) throw InputError("skeletonize: sigma must be nonnegative");
  const Graph g = from_voxel_mask(mask, cfg.connectivity);
  const auto basis = spectral_basis(build_laplacian(g), resolve_num_eig(g.n_nodes, cfg));
  const auto kernel = build_kernel(basis, cfg.sigma);
  SkeletonResult r = revoxelize(mask, g, smooth_coordinates(g, kernel), cfg.scale_factor);
  r.truncated = kernel.truncated();
  return r;
}

/// Copy of g with N(0, sd^2) noise added to one coordinate axis.
inline Graph add_noise_fixture(const Graph& g, std::size_t axis, double sd, std::uint64_t seed) {
  if (!g.coords) throw InputError("add_noise_fixture: graph has no coordinates");
  if (axis >= static_cast<std::size_t>(g.coords->cols()) || axis > 2) throw InputError("add_noise_fixture: invalid axis");
  if (!(sd >= 0.0)) throw InputError("add_noise_fixture: sd must be nonnegative");
  Graph out = g;
  if (sd == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> noise(0.0, sd);
  for (Eigen::Index i = 0; i < out.coords->rows(); ++i) (*out.coords)(i, static_cast<Eigen::Index>(axis)) += noise(rng);
  return out;
}

}  // namespace graphheat
