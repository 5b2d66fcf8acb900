#pragma once

// Explicit finite-difference diffusion on regular grids.
//
//   f(x, t_{k+1}) = f(x, t_k) + dt * sum_i w_i f(x + offset_i, t_k)
//
// plus the Toeplitz-matrix form of the 1D scheme, a time-step bound that
// keeps one step inside the local min/max, and the truncated Fourier-series
// solution of the 1D heat equation on [-l, l] used as an analytic oracle.

#include <limits>
#include <numbers>

#include "graphheat/numkernel.hpp"

namespace graphheat {

/// Samples on a regular grid, row-major (last axis fastest).
struct GridSignal {
  std::vector<std::size_t> shape;
  std::vector<double> values;
  std::vector<double> spacing;  ///< per axis, empty means all 1

  GridSignal() = default;
  GridSignal(std::vector<std::size_t> s, std::vector<double> v, std::vector<double> sp = {})
      : shape(std::move(s)), values(std::move(v)), spacing(std::move(sp)) {
    validate();
  }

  static GridSignal from_1d(std::vector<double> v, double dx = 1.0) {
    const std::size_t n = v.size();
    return GridSignal({n}, std::move(v), {dx});
  }

  std::size_t dims() const { return shape.size(); }
  std::size_t size() const { return values.size(); }
  double step(std::size_t axis) const { return spacing.empty() ? 1.0 : spacing[axis]; }

  void validate() const {
    if (shape.empty()) throw InputError("grid signal needs at least one axis");
    std::size_t total = 1;
    for (auto e : shape) {
      if (e == 0) throw InputError("grid extents must be positive");
      total *= e;
    }
    if (values.size() != total) throw InputError("grid values do not match the product of extents");
    if (!spacing.empty() && spacing.size() != shape.size()) throw InputError("one spacing per axis required");
    for (double d : spacing)
      if (!(d > 0.0)) throw InputError("grid spacing must be positive");
    for (double v : values)
      if (!std::isfinite(v)) throw InputError("grid values must be finite");
  }
};

enum class StencilName { LAP1D_3PT, LAP2D_N4, LAP2D_N8, LAPND_2N };
enum class Boundary { ZERO_PAD, REPLICATE };

struct StencilTap {
  std::vector<int> offset;
  double weight;
};

/// Laplacian stencil for unit spacing; taps in lexicographic offset order.
struct Stencil {
  StencilName name;
  std::size_t dims;
  std::vector<StencilTap> taps;

  double weight_sum() const {
    double s = 0.0;
    for (const auto& t : taps) s += t.weight;
    return s;
  }

  bool axis_aligned() const {
    for (const auto& t : taps) {
      int nonzero = 0;
      for (int o : t.offset) nonzero += o != 0;
      if (nonzero > 1) return false;
    }
    return true;
  }
};

inline Stencil lap1d_3pt() { return {StencilName::LAP1D_3PT, 1, {{{-1}, 1.0}, {{0}, -2.0}, {{1}, 1.0}}}; }

inline Stencil lap2d_n4() {
  return {StencilName::LAP2D_N4, 2,
          {{{-1, 0}, 1.0}, {{0, -1}, 1.0}, {{0, 0}, -4.0}, {{0, 1}, 1.0}, {{1, 0}, 1.0}}};
}

inline Stencil lap2d_n8() {
  Stencil s{StencilName::LAP2D_N8, 2, {}};
  for (int a = -1; a <= 1; ++a)
    for (int b = -1; b <= 1; ++b) s.taps.push_back({{a, b}, (a == 0 && b == 0 ? -8.0 : 1.0) / 9.0});
  return s;
}

/// 2n nearest neighbors on an n-dimensional unit hypercube grid.
inline Stencil lapnd_2n(std::size_t dims) {
  if (dims == 0) throw InputError("lapnd_2n: dimension must be positive");
  Stencil s{StencilName::LAPND_2N, dims, {}};
  for (std::size_t a = 0; a < dims; ++a) {
    std::vector<int> off(dims, 0);
    off[a] = -1;
    s.taps.push_back({off, 1.0});
  }
  s.taps.push_back({std::vector<int>(dims, 0), -2.0 * static_cast<double>(dims)});
  for (std::size_t a = dims; a-- > 0;) {
    std::vector<int> off(dims, 0);
    off[a] = 1;
    s.taps.push_back({off, 1.0});
  }
  return s;
}

namespace detail {

struct StencilPlan {
  std::vector<std::size_t> strides;
  std::vector<double> weights;  // spacing-scaled
  std::vector<bool> center;
};

inline StencilPlan plan(const GridSignal& sig, const Stencil& st) {
  if (st.dims != sig.dims()) {
    throw InputError("stencil dimension " + std::to_string(st.dims) + " does not match signal dimension " +
                     std::to_string(sig.dims()));
  }
  StencilPlan p;
  p.strides.assign(sig.dims(), 1);
  for (std::size_t a = sig.dims() - 1; a-- > 0;) p.strides[a] = p.strides[a + 1] * sig.shape[a + 1];

  bool isotropic = true;
  for (std::size_t a = 1; a < sig.dims(); ++a) isotropic = isotropic && sig.step(a) == sig.step(0);
  if (!isotropic && !st.axis_aligned()) throw InputError("diagonal stencil taps need isotropic spacing");

  double off_center = 0.0;
  for (const auto& t : st.taps) {
    bool is_center = true;
    double h2 = sig.step(0) * sig.step(0);
    for (std::size_t a = 0; a < t.offset.size(); ++a) {
      if (t.offset[a] != 0) {
        is_center = false;
        if (!isotropic) h2 = sig.step(a) * sig.step(a);
      }
    }
    p.center.push_back(is_center);
    p.weights.push_back(t.weight / h2);
    if (!is_center) off_center += t.weight / h2;
  }
  if (!isotropic)
    for (std::size_t k = 0; k < p.weights.size(); ++k)
      if (p.center[k]) p.weights[k] = -off_center;
  return p;
}

// Visits every grid point with its neighbor values under the boundary rule.
template <class Fn>
void for_each_neighborhood(const GridSignal& sig, const Stencil& st, const StencilPlan& p, Boundary boundary, Fn&& fn) {
  const std::size_t d = sig.dims();
  std::vector<std::size_t> idx(d, 0);
  std::vector<double> nbr(st.taps.size());
  for (std::size_t lin = 0; lin < sig.size(); ++lin) {
    for (std::size_t k = 0; k < st.taps.size(); ++k) {
      std::size_t pos = 0;
      bool outside = false;
      for (std::size_t a = 0; a < d; ++a) {
        long long c = static_cast<long long>(idx[a]) + st.taps[k].offset[a];
        if (c < 0 || c >= static_cast<long long>(sig.shape[a])) {
          if (boundary == Boundary::ZERO_PAD) {
            outside = true;
            break;
          }
          c = std::clamp<long long>(c, 0, static_cast<long long>(sig.shape[a]) - 1);
        }
        pos += static_cast<std::size_t>(c) * p.strides[a];
      }
      nbr[k] = outside ? 0.0 : sig.values[pos];
    }
    fn(lin, nbr);
    for (std::size_t a = d; a-- > 0;) {
      if (++idx[a] < sig.shape[a]) break;
      idx[a] = 0;
    }
  }
}

}  // namespace detail

/// Discrete Laplacian field sum_i w_i f(x + offset_i).
inline GridSignal apply_stencil(const GridSignal& sig, const Stencil& st, Boundary boundary) {
  const auto p = detail::plan(sig, st);
  GridSignal out = sig;
  detail::for_each_neighborhood(sig, st, p, boundary, [&](std::size_t lin, const std::vector<double>& nbr) {
    double s = 0.0;
    for (std::size_t k = 0; k < nbr.size(); ++k) s += p.weights[k] * nbr[k];
    out.values[lin] = s;
  });
  return out;
}

/// Tridiagonal (1, -2, 1) matrix of order n: the 3-point Laplacian with
/// zero padding at both ends.
inline SparseSymMatrix toeplitz_laplacian_1d(std::size_t n) {
  if (n < 2) throw InputError("toeplitz_laplacian_1d: n must be at least 2");
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, i, -2.0});
    if (i + 1 < n) t.push_back({i, i + 1, 1.0});
  }
  return SparseSymMatrix::from_triplets(n, t);
}

struct DiffusionConfig {
  double dt = 0.01;
  std::size_t n_steps = 10000;
  Boundary boundary = Boundary::ZERO_PAD;
  /// Reject dt above stability_dt_bound of the initial signal.
  bool strict_stability = false;
};

/// Largest dt for which one explicit step keeps every value inside the
/// min/max of its stencil neighborhood. Per point this is the largest gap
/// toward the side the Laplacian pushes, divided by |Laplacian|; in 1D that
/// equals max(|f_{i-1} - f_i|, |f_{i+1} - f_i|) / |f''_i|. The result is
/// the minimum over all points (boundary points see neighbors through the
/// boundary rule). +infinity when the Laplacian vanishes everywhere.
inline double stability_dt_bound(const GridSignal& sig, const Stencil& st, Boundary boundary = Boundary::REPLICATE) {
  const auto p = detail::plan(sig, st);
  double bound = std::numeric_limits<double>::infinity();
  detail::for_each_neighborhood(sig, st, p, boundary, [&](std::size_t lin, const std::vector<double>& nbr) {
    const double fi = sig.values[lin];
    double lap = 0.0;
    for (std::size_t k = 0; k < nbr.size(); ++k) lap += p.weights[k] * nbr[k];
    if (lap == 0.0) return;
    double gap = 0.0;
    for (std::size_t k = 0; k < nbr.size(); ++k) {
      if (p.center[k]) continue;
      gap = std::max(gap, lap > 0.0 ? nbr[k] - fi : fi - nbr[k]);
    }
    bound = std::min(bound, gap / std::abs(lap));
  });
  return bound;
}

/// One explicit Euler step.
inline GridSignal diffusion_step(const GridSignal& sig, const Stencil& st, Boundary boundary, double dt) {
  GridSignal lap = apply_stencil(sig, st, boundary);
  for (std::size_t i = 0; i < lap.values.size(); ++i) lap.values[i] = sig.values[i] + dt * lap.values[i];
  return lap;
}

inline GridSignal diffuse(const GridSignal& sig, const Stencil& st, const DiffusionConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw InputError("diffuse: dt must be positive");
  sig.validate();
  if (cfg.strict_stability) {
    const double bound = stability_dt_bound(sig, st, cfg.boundary);
    if (cfg.dt > bound) {
      throw InputError("diffuse: dt " + std::to_string(cfg.dt) + " exceeds stability bound " + std::to_string(bound));
    }
  }
  GridSignal cur = sig;
  for (std::size_t k = 0; k < cfg.n_steps; ++k) {
    cur = diffusion_step(cur, st, cfg.boundary, cfg.dt);
    for (double v : cur.values)
      if (!std::isfinite(v)) throw NumericalError("diffuse: divergence at step " + std::to_string(k + 1));
  }
  return cur;
}

/// g <- g + dt L g repeated n_steps times.
inline Vector diffuse_with_operator(const SparseSymMatrix& l, Vector g, double dt, std::size_t n_steps) {
  for (std::size_t k = 0; k < n_steps; ++k) {
    g += dt * matvec(l, g);
    if (!g.allFinite()) throw NumericalError("diffuse_with_operator: divergence at step " + std::to_string(k + 1));
  }
  return g;
}

struct AnalyticSolution {
  GridSignal solution;
  std::size_t terms_used = 0;
  /// RMS of the part of f0 outside the retained modes, i.e. the RMS
  /// reconstruction error of the series at t = 0.
  double truncation_rms = 0.0;
};

/// Fourier-series solution of df/dt = f'' on [-l, l] with periodic
/// extension. The N samples of f0 sit at cell centers
/// x_i = -l + (i + 1/2) h, h = 2l / N; coefficients use the periodic
/// trapezoid rule on those samples. Modes are capped at j < N/2, beyond
/// which the grid aliases.
inline AnalyticSolution analytic_solution_1d(const GridSignal& f0, double t, std::size_t n_terms, double l) {
  if (f0.dims() != 1) throw InputError("analytic_solution_1d: signal must be one-dimensional");
  if (n_terms < 1) throw InputError("analytic_solution_1d: need at least one term");
  if (!(l > 0.0)) throw InputError("analytic_solution_1d: half-width must be positive");
  if (!(t >= 0.0)) throw InputError("analytic_solution_1d: time must be nonnegative");
  const std::size_t n = f0.size();
  const double h = 2.0 * l / static_cast<double>(n);
  const std::size_t terms = std::min<std::size_t>(n_terms, (n - 1) / 2);
  const double pi = std::numbers::pi;

  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = -l + (static_cast<double>(i) + 0.5) * h;

  double energy = 0.0;
  double a0 = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    energy += f0.values[i] * f0.values[i] * h;
    a0 += f0.values[i] * h;
  }
  a0 /= std::sqrt(2.0 * l);
  double captured = a0 * a0;

  std::vector<double> g(n, a0 / std::sqrt(2.0 * l));
  const double inv_sqrt_l = 1.0 / std::sqrt(l);
  for (std::size_t j = 1; j <= terms; ++j) {
    const double k = static_cast<double>(j) * pi / l;
    double aj = 0.0, bj = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      aj += f0.values[i] * std::cos(k * x[i]) * h;
      bj += f0.values[i] * std::sin(k * x[i]) * h;
    }
    aj *= inv_sqrt_l;
    bj *= inv_sqrt_l;
    captured += aj * aj + bj * bj;
    const double decay = std::exp(-k * k * t);
    for (std::size_t i = 0; i < n; ++i)
      g[i] += decay * inv_sqrt_l * (aj * std::cos(k * x[i]) + bj * std::sin(k * x[i]));
  }
  AnalyticSolution out;
  out.solution = GridSignal({n}, std::move(g), {h});
  out.terms_used = terms;
  out.truncation_rms = std::sqrt(std::max(0.0, energy - captured) / (2.0 * l));
  return out;
}

}  // namespace graphheat
