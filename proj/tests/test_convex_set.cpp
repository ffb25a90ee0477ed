#include <gtest/gtest.h>

#include <cmath>

#include "entroof/convex_set.hpp"
#include "oracles.hpp"
#include "test_support.hpp"

using namespace entroof;
using entroof::fixtures::basis;
using entroof::fixtures::random_state;

namespace {

DensityMatrix ket(std::size_t dim, std::size_t k) { return DensityMatrix::from_pure(PureState({dim}, basis(dim, k))); }

DensityMatrix maximally_mixed(std::size_t dim) {
  return DensityMatrix({dim}, ComplexMatrix::identity(dim) * (1.0 / static_cast<double>(dim)));
}

}  // namespace

TEST(ConvexSet, SetContainingTheState) {
  const auto rho = random_state({3}, 2, 1);
  EXPECT_NEAR(convex_set_fidelity(rho, {{rho}, "self"}).f_c, 1.0, 1e-10);
}

TEST(ConvexSet, ComputationalBasisHull) {
  const ConvexSetSpec x{{ket(2, 0), ket(2, 1)}, "z-basis"};
  const auto mixed = convex_set_fidelity(maximally_mixed(2), x);
  EXPECT_NEAR(mixed.f_c, 1.0, 1e-10);
  EXPECT_NEAR(mixed.q[0], 0.5, 1e-6);

  const DensityMatrix plus = DensityMatrix::from_pure(PureState({2}, {M_SQRT1_2, M_SQRT1_2}));
  const double oracle = oracles::simplex_fidelity(plus, x.extreme_points);
  EXPECT_NEAR(oracle, 0.5, 1e-9);
  EXPECT_NEAR(convex_set_fidelity(plus, x).f_c, oracle, 1e-4);
}

// A pure-member search would give 1/2 here: every pure state has fidelity
// 1/2 with I/2. The block search pairs rho with the whole element.
TEST(ConvexSet, MixedElementIsMatchedWhole) {
  const auto r = convex_set_fidelity(maximally_mixed(2), {{maximally_mixed(2)}, "centre"});
  EXPECT_NEAR(r.f_c, 1.0, 1e-10);
}

TEST(ConvexSet, MatchesSimplexOracle) {
  for (std::uint64_t seed = 0; seed < 16; ++seed) {
    const std::size_t d = 2 + seed % 2;
    const std::size_t m = 2 + (seed / 2) % 2;
    const auto rho = random_state({d}, 1 + seed % d, 100 + seed);
    ConvexSetSpec x;
    for (std::size_t k = 0; k < m; ++k) x.extreme_points.push_back(random_state({d}, 1 + (seed + k) % d, 200 + 7 * seed + k));
    ConvexSetOptions opt;
    opt.seed = seed;
    const auto r = convex_set_fidelity(rho, x, opt);
    EXPECT_NEAR(r.f_c, oracles::simplex_fidelity(rho, x.extreme_points), 1e-4) << "seed " << seed;
  }
}

TEST(ConvexSet, ResultIsConsistent) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto rho = random_state({3}, 3, 10 + seed);
    ConvexSetSpec x{{random_state({3}, 1, 20 + seed), random_state({3}, 2, 30 + seed), random_state({3}, 3, 40 + seed)},
                    "random"};
    const auto r = convex_set_fidelity(rho, x);
    // value is F(rho, sigma(q)) for the returned weights
    EXPECT_NEAR(fidelity(rho, hull_state(x, r.q)), r.f_c, 1e-10);
    // blocks decompose rho
    ComplexMatrix sum(3, 3);
    for (const auto& b : r.blocks) sum += b;
    EXPECT_LE(max_abs_diff(sum, rho.matrix()), 1e-10);
    // block objective sum_k p_k F(rho_k, sigma_k) meets f_c at the optimum,
    // and the best element per block cannot exceed it
    double paired = 0.0, best_element = 0.0;
    for (std::size_t k = 0; k < r.blocks.size(); ++k) {
      const double p = r.block_weights[k];
      if (p < 1e-12) continue;
      const DensityMatrix rk({3}, r.blocks[k] * (1.0 / p));
      paired += p * fidelity(rk, x.extreme_points[k]);
      double mx = 0.0;
      for (const auto& s : x.extreme_points) mx = std::max(mx, fidelity(rk, s));
      best_element += p * mx;
    }
    EXPECT_NEAR(paired, r.f_c, 1e-6);
    EXPECT_LE(best_element, r.f_c + 1e-6);
    for (std::size_t i = 1; i < r.objective_trace.size(); ++i) {
      EXPECT_GE(r.objective_trace[i], r.objective_trace[i - 1]);
    }
  }
}

TEST(ConvexSet, RejectsBadInput) {
  const auto rho = random_state({2}, 2, 1);
  EXPECT_THROW(convex_set_fidelity(rho, {{}, "empty"}), InvalidArgument);
  EXPECT_THROW(convex_set_fidelity(rho, {{random_state({3}, 1, 2)}, "wrong"}), InvalidArgument);
  ConvexSetOptions opt;
  opt.restarts = 0;
  EXPECT_THROW(convex_set_fidelity(rho, {{rho}, "self"}, opt), InvalidArgument);
}
