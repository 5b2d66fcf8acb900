#pragma once

// Diffusion wavelets W_{t,q}(p) = sum_j g(lambda_j t) psi_j(p) psi_j(q) and
// the transform <W_{t,q}, f> = sum_j g(lambda_j t) f~_j psi_j(q), which is
// kernel regression in the spectral basis. With g(x) = exp(-x) it is heat
// kernel smoothing at bandwidth t.

#include <functional>
#include <map>
#include <string>

#include "graphheat/spectral.hpp"

namespace graphheat {

/// g(lambda * t) for a fixed scale t.
class ScaleFunction {
 public:
  using Profile = std::function<double(double)>;

  ScaleFunction(std::string name, Profile g, double t) : name_(std::move(name)), g_(std::move(g)), t_(t) {
    if (!g_) throw InputError("scale function needs a profile");
    if (!(t > 0.0) || !std::isfinite(t)) throw InputError("scale t must be positive");
  }

  static ScaleFunction exp_decay(double t) {
    return {"exp", [](double x) { return std::exp(-x); }, t};
  }

  const std::string& name() const noexcept { return name_; }
  double t() const noexcept { return t_; }

  double operator()(double lambda) const {
    const double v = g_(std::max(lambda, 0.0) * t_);
    if (!std::isfinite(v)) throw NumericalError("scale function " + name_ + " returned a non-finite value");
    return v;
  }

  Vector weights(const SpectralBasis& basis, std::size_t k) const {
    Vector w(static_cast<Eigen::Index>(k));
    for (std::size_t j = 0; j < k; ++j) w[static_cast<Eigen::Index>(j)] = (*this)(basis.eigenvalue(j));
    return w;
  }

 private:
  std::string name_;
  Profile g_;
  double t_;
};

/// Named scale-function profiles. "exp" is always present.
class ScaleFunctionRegistry {
 public:
  ScaleFunctionRegistry() { profiles_["exp"] = [](double x) { return std::exp(-x); }; }

  void add(const std::string& name, ScaleFunction::Profile g) {
    if (!g) throw InputError("cannot register an empty profile");
    profiles_[name] = std::move(g);
  }

  bool contains(const std::string& name) const { return profiles_.count(name) != 0; }

  ScaleFunction make(const std::string& name, double t) const {
    const auto it = profiles_.find(name);
    if (it == profiles_.end()) throw InputError("unknown scale function '" + name + "'");
    return {name, it->second, t};
  }

 private:
  std::map<std::string, ScaleFunction::Profile> profiles_;
};

namespace detail {
inline void check_terms(const SpectralBasis& basis, std::size_t k) {
  if (k < 1 || k > basis.size()) {
    throw InputError("wavelet: k = " + std::to_string(k) + " outside [1, " + std::to_string(basis.size()) + "]");
  }
}
}  // namespace detail

/// The wavelet centered at node q, built from the first k pairs.
inline NodeSignal wavelet_at(const SpectralBasis& basis, const ScaleFunction& sf, std::size_t q, std::size_t k) {
  if (q >= basis.n_nodes) throw InputError("wavelet_at: node " + std::to_string(q) + " out of range");
  detail::check_terms(basis, k);
  const auto kk = static_cast<Eigen::Index>(k);
  const auto psi = basis.eigenvectors.leftCols(kk);
  const Vector at_q = psi.row(static_cast<Eigen::Index>(q)).transpose();
  return psi * sf.weights(basis, k).cwiseProduct(at_q);
}

/// Transform at every node q at once.
inline NodeSignal wavelet_transform(const SpectralBasis& basis, const ScaleFunction& sf, const NodeSignal& f, std::size_t k) {
  if (static_cast<std::size_t>(f.size()) != basis.n_nodes) throw InputError("wavelet_transform: signal length mismatch");
  detail::check_terms(basis, k);
  const auto psi = basis.eigenvectors.leftCols(static_cast<Eigen::Index>(k));
  const Vector coef = psi.transpose() * f;
  return psi * sf.weights(basis, k).cwiseProduct(coef);
}

}  // namespace graphheat
