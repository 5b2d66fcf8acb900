#include <gtest/gtest.h>

#include "support.hpp"

using namespace graphheat;

namespace {

SpectralBasis full_basis(const Graph& g) { return spectral_basis(build_laplacian(g)); }

/// Random unit vector orthogonal to the constant vector.
Vector random_feasible(std::size_t n, std::mt19937_64& rng) {
  Vector u = gh_test::random_vector(n, rng);
  u.array() -= u.mean();
  return u.normalized();
}

}  // namespace

TEST(SpectralBasis, RoutingAndInvariants) {
  std::mt19937_64 rng(1);
  const auto g = gh_test::random_connected_graph(40, rng, 0.1);
  const auto full = full_basis(g);
  EXPECT_TRUE(full.complete);
  EXPECT_EQ(full.size(), 40u);
  EXPECT_GE(full.eigenvalue(0), -1e-10);
  EXPECT_LE((full.eigenvectors.transpose() * full.eigenvectors - DenseMatrix::Identity(40, 40)).cwiseAbs().maxCoeff(), 1e-9);
  const Vector psi1 = full.eigenvector(0);
  EXPECT_LE((psi1.array() - 1.0 / std::sqrt(40.0)).abs().maxCoeff(), 1e-12);

  const auto part = spectral_basis(build_laplacian(g), 5);
  EXPECT_FALSE(part.complete);
  EXPECT_EQ(part.size(), 5u);
  const auto lanczos = spectral_basis(build_laplacian(g), 5, 10);
  for (std::size_t j = 0; j < 5; ++j) EXPECT_NEAR(lanczos.eigenvalue(j), part.eigenvalue(j), 1e-9);
  EXPECT_THROW(spectral_basis(build_laplacian(g), 0), InputError);
  EXPECT_THROW(spectral_basis(build_laplacian(g), 41), InputError);
  EXPECT_THROW(spectral_basis(build_laplacian(g), 40, 10), InputError);
}

TEST(Fourier, EigenvectorHasUnitCoefficient) {
  const auto b = full_basis(gh_test::path_graph(6));
  const Vector c = fourier_coefficients(b, b.eigenvector(1));
  Vector want = Vector::Zero(6);
  want[1] = 1.0;
  EXPECT_LE((c - want).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Fourier, ConstantSignal) {
  std::mt19937_64 rng(2);
  const auto b = full_basis(gh_test::random_connected_graph(20, rng));
  const Vector c = fourier_coefficients(b, Vector::Constant(20, 2.5));
  EXPECT_NEAR(c[0], 2.5 * std::sqrt(20.0), 1e-12);
  EXPECT_LE(c.tail(19).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Fourier, CompleteBasisReconstructsAndParseval) {
  std::mt19937_64 rng(3);
  const auto b = full_basis(gh_test::path_graph(3));
  const Vector f = gh_test::random_vector(3, rng);
  const Vector c = fourier_coefficients(b, f);
  EXPECT_LE((fourier_synthesis(b, c) - f).cwiseAbs().maxCoeff(), 1e-10);
  EXPECT_NEAR(c.squaredNorm(), f.squaredNorm(), 1e-12);
  const auto big = full_basis(gh_test::random_connected_graph(80, rng));
  const Vector g = gh_test::random_vector(80, rng);
  EXPECT_LE((fourier_synthesis(big, fourier_coefficients(big, g)) - g).cwiseAbs().maxCoeff(), 1e-9);
  EXPECT_THROW(fourier_coefficients(b, Vector::Zero(4)), InputError);
  EXPECT_THROW(fourier_synthesis(b, Vector::Zero(2)), InputError);
}

TEST(Fiedler, PathP3) {
  const auto r = fiedler_vector(full_basis(gh_test::path_graph(3)));
  Vector want(3);
  want << 1, 0, -1;
  want /= std::sqrt(2.0);
  EXPECT_LE((r.vector - want).cwiseAbs().maxCoeff(), 1e-12);  // sign convention picks the positive first entry
  EXPECT_NEAR(r.eigenvalue, 1.0, 1e-12);
  EXPECT_FALSE(r.degenerate);
}

TEST(Fiedler, SingleEdge) {
  const std::vector<Edge> e{{0, 1, 1.0}};
  const auto r = fiedler_vector(full_basis(from_edge_list(e, 2)));
  EXPECT_NEAR(r.vector[0], 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.vector[1], -1.0 / std::sqrt(2.0), 1e-12);
}

TEST(Fiedler, PathsMonotoneTightEndpoints) {
  for (std::size_t n = 3; n <= 50; ++n) {
    const auto g = gh_test::path_graph(n);
    const auto r = fiedler_vector(full_basis(g));
    const Vector& f = r.vector;
    EXPECT_NEAR(f.norm(), 1.0, 1e-12);
    EXPECT_LE(std::abs(f.sum()), 1e-9);
    bool inc = true, dec = true;
    for (Eigen::Index i = 1; i < f.size(); ++i) {
      inc = inc && f[i] > f[i - 1];
      dec = dec && f[i] < f[i - 1];
    }
    EXPECT_TRUE(inc || dec) << "n = " << n;
    Eigen::Index amax = 0, amin = 0;
    f.maxCoeff(&amax);
    f.minCoeff(&amin);
    const std::set<Eigen::Index> ends{amax, amin};
    EXPECT_EQ(ends, (std::set<Eigen::Index>{0, static_cast<Eigen::Index>(n - 1)}));
    // The endpoint pair realizes the largest geodesic distance.
    EXPECT_DOUBLE_EQ(geodesic_distances(g, static_cast<std::size_t>(amax))[amin], static_cast<double>(n - 1));
    EXPECT_TRUE(is_tight(f, g));
  }
}

TEST(Fiedler, EnergyEqualsEigenvalueAndMinimizes) {
  std::mt19937_64 rng(4);
  for (int c = 0; c < 10; ++c) {
    const auto g = gh_test::random_connected_graph(35, rng, 0.1);
    const auto l = build_laplacian(g);
    const auto r = fiedler_vector(spectral_basis(l));
    const double e2 = dirichlet_energy(l, r.vector);
    EXPECT_NEAR(e2, r.eigenvalue, 1e-9 * std::max(1.0, r.eigenvalue));
    for (int t = 0; t < 100; ++t) EXPECT_LE(e2, dirichlet_energy(l, random_feasible(35, rng)) + 1e-9);
  }
}

TEST(Fiedler, DisconnectedNamesComponents) {
  const std::vector<Edge> e{{0, 1, 1.0}, {2, 3, 1.0}, {4, 5, 1.0}};
  try {
    fiedler_vector(full_basis(from_edge_list(e, 6)));
    FAIL() << "expected DisconnectedGraphError";
  } catch (const DisconnectedGraphError& err) {
    EXPECT_EQ(err.components(), 3u);
    EXPECT_NE(std::string(err.what()).find("3 connected components"), std::string::npos);
  }
  EXPECT_THROW(fiedler_vector(full_basis(from_edge_list({}, 1))), InputError);
}

TEST(Fiedler, DegenerateOnCycle) {
  EXPECT_TRUE(fiedler_vector(full_basis(gh_test::cycle_graph(8))).degenerate);
  EXPECT_FALSE(fiedler_vector(full_basis(gh_test::path_graph(8))).degenerate);
}

TEST(SignDomains, ConstantPositive) {
  const auto d = sign_domains(Vector::Constant(4, 2.0), gh_test::path_graph(4), 0.0);
  ASSERT_EQ(d.positive_components.size(), 1u);
  EXPECT_EQ(d.positive_components[0].size(), 4u);
  EXPECT_TRUE(d.negative_components.empty());
}

TEST(SignDomains, PathFiedlerStrict) {
  Vector f(3);
  f << 1, 0, -1;
  f /= std::sqrt(2.0);
  const auto d = sign_domains(f, gh_test::path_graph(3), 0.0);
  ASSERT_EQ(d.positive_components.size(), 1u);
  ASSERT_EQ(d.negative_components.size(), 1u);
  EXPECT_EQ(d.positive_components[0], std::vector<std::size_t>{0});
  EXPECT_EQ(d.negative_components[0], std::vector<std::size_t>{2});
  const auto w = sign_domains(f, gh_test::path_graph(3), 0.0, true);
  EXPECT_EQ(w.positive_components[0], (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(w.negative_components[0], (std::vector<std::size_t>{1, 2}));
}

TEST(SignDomains, TwoBumps) {
  Vector f(7);
  f << 0, 1, 0, 0, 0, 1, 0;
  const auto d = sign_domains(f, gh_test::path_graph(7), 0.5);
  EXPECT_EQ(d.positive_components.size(), 2u);
  EXPECT_EQ(d.negative_components.size(), 3u);
}

TEST(Tightness, Examples) {
  Vector mono(6);
  mono << 5, 4, 3, 2, 1, 0;
  EXPECT_TRUE(is_tight(mono, gh_test::path_graph(6)));
  Vector bumps(7);
  bumps << 0, 1, 0, 0, 0, 1, 0;
  EXPECT_FALSE(is_tight(bumps, gh_test::path_graph(7)));
  EXPECT_TRUE(is_tight(Vector::Constant(1, 3.0), from_edge_list({}, 1)));
  EXPECT_THROW(is_tight(mono, gh_test::path_graph(6), std::vector<double>{}), InputError);
}

TEST(Tightness, DefaultThresholdsCoverValuesAndMidpoints) {
  Vector f(4);
  f << 2, 0, 2, 1;
  EXPECT_EQ(tightness_thresholds(f), (std::vector<double>{0, 0.5, 1, 1.5, 2}));
}

TEST(Courant, ConstantAndFiedler) {
  std::mt19937_64 rng(5);
  for (int c = 0; c < 10; ++c) {
    const auto g = gh_test::random_connected_graph(30, rng, 0.1);
    const auto b = full_basis(g);
    EXPECT_TRUE(courant_check(b, g, 1));
    EXPECT_EQ(nodal_domain_count(b.eigenvector(0), g), 1u);
    EXPECT_EQ(nodal_domain_count(b.eigenvector(1), g), 2u);
  }
}

TEST(Courant, EveryEigenvectorOfRandomGraphs) {
  std::mt19937_64 rng(6);
  for (int c = 0; c < 30; ++c) {
    const std::size_t n = std::uniform_int_distribution<std::size_t>(4, 60)(rng);
    const auto g = gh_test::random_connected_graph(n, rng, 3.0 / static_cast<double>(n));
    const auto b = full_basis(g);
    for (std::size_t i = 1; i <= n; ++i) EXPECT_TRUE(courant_check(b, g, i)) << "graph " << c << " eigenvector " << i;
  }
  const auto b = full_basis(gh_test::path_graph(4));
  EXPECT_THROW(courant_check(b, gh_test::path_graph(4), 0), InputError);
  EXPECT_THROW(courant_check(b, gh_test::path_graph(4), 5), InputError);
}
