#include <gtest/gtest.h>

#include <cmath>

#include "entroof/measures.hpp"
#include "test_support.hpp"

using namespace entroof;
using entroof::fixtures::basis;
using entroof::fixtures::random_state;

namespace {

// cos(t)|00> + sin(t)|11> has concurrence sin(2t).
DensityMatrix pure_with_concurrence(double c) {
  const double t = 0.5 * std::asin(c);
  return DensityMatrix::from_pure(PureState({2, 2}, {std::cos(t), 0, 0, std::sin(t)}));
}

Dims dims_for(std::size_t d) { return d == 4 ? Dims{2, 2} : Dims{d}; }

}  // namespace

TEST(Fidelity, SelfAndPureCases) {
  const auto rho = random_state({2, 2}, 3, 1);
  EXPECT_NEAR(fidelity(rho, rho), 1.0, 1e-10);
  const auto bell = DensityMatrix::from_pure(fixtures::bell_phi_plus());
  const DensityMatrix mixed({2, 2}, ComplexMatrix::identity(4) * 0.25);
  EXPECT_NEAR(fidelity(bell, mixed), 0.25, 1e-12);
  EXPECT_THROW(fidelity(bell, DensityMatrix({2}, ComplexMatrix::identity(2) * 0.5)), InvalidArgument);
}

TEST(Fidelity, PureArgumentReducesToExpectation) {
  Engine eng = make_engine(3);
  for (int t = 0; t < 50; ++t) {
    const PureState psi = PureState::from_unnormalized({3}, random_unit_vector(3, eng));
    const auto sigma = random_state({3}, 1 + t % 3, 100 + t);
    const double expect = sandwich(psi.amplitudes(), sigma.matrix(), psi.amplitudes()).real();
    EXPECT_NEAR(fidelity(DensityMatrix::from_pure(psi), sigma), expect, 1e-10);
  }
}

TEST(Fidelity, SymmetricAndAboveOverlapTrace) {
  for (std::size_t d : {2u, 3u, 4u}) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const auto rho = random_state(dims_for(d), 1 + seed % d, seed);
      const auto sigma = random_state(dims_for(d), 1 + (seed / d) % d, seed + 50000);
      const double f = fidelity(rho, sigma);
      EXPECT_NEAR(f, fidelity(sigma, rho), 1e-9);
      EXPECT_GE(f, trace_of_product(rho.matrix(), sigma.matrix()).real() - 1e-10);
      EXPECT_LE(f, 1.0);
    }
  }
}

TEST(Entropy, KnownValues) {
  EXPECT_EQ(von_neumann_entropy(DensityMatrix::from_pure(fixtures::bell_phi_plus())), 0.0);
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix({2, 2}, ComplexMatrix::identity(4) * 0.25)), 2.0, 1e-14);
  const std::vector<double> half{0.5, 0.5, 0, 0};
  EXPECT_NEAR(von_neumann_entropy(DensityMatrix({2, 2}, ComplexMatrix::diagonal(half))), 1.0, 1e-14);
}

TEST(Entropy, BoundedByLogDimension) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto rho = random_state({2, 3}, 1 + seed % 6, seed);
    const double s = von_neumann_entropy(rho);
    EXPECT_GE(s, 0.0);
    EXPECT_LE(s, std::log2(6.0) + 1e-12);
    if (seed % 6 == 0) {
      EXPECT_LT(s, 1e-9);
    }
  }
}

TEST(RelativeEntropy, ZeroAndInfinite) {
  const auto rho = random_state({3}, 3, 8);
  EXPECT_NEAR(relative_entropy(rho, rho), 0.0, 1e-12);
  const DensityMatrix mixed({2}, ComplexMatrix::identity(2) * 0.5);
  const auto zero = DensityMatrix::from_pure(PureState({2}, basis(2, 0)));
  EXPECT_TRUE(std::isinf(relative_entropy(mixed, zero)));
  EXPECT_TRUE(std::isfinite(relative_entropy(zero, mixed)));
  EXPECT_NEAR(relative_entropy(zero, mixed), 1.0, 1e-12);
}

// Independent evaluation on the two-dimensional support span{|01>, |10>}:
// eigenvalues of the 2x2 block from the quadratic formula, sigma diagonal.
TEST(RelativeEntropy, GvpMatchesTwoByTwoSpectralOracle) {
  for (double p : {0.99, 0.9, 0.5}) {
    for (int i = 1; i < 20; ++i) {
      const double a = i / 20.0;
      const double r11 = p * a + 1 - p, r22 = p * (1 - a), r12 = p * std::sqrt(a * (1 - a));
      const double mean = 0.5 * (r11 + r22);
      const double rad = std::sqrt(0.25 * (r11 - r22) * (r11 - r22) + r12 * r12);
      const double l1 = mean + rad, l2 = mean - rad;
      auto xl = [](double x) { return x > 0 ? x * std::log2(x) : 0.0; };
      const double s1 = 1 - p + p * a, s2 = p * (1 - a);
      const double expected = xl(l1) + xl(l2) - r11 * std::log2(s1) - r22 * std::log2(s2);
      EXPECT_NEAR(gvp_relative_entropy(a, p), expected, 1e-10) << "a=" << a << " p=" << p;
    }
  }
}

// S(rho||sigma) >= Tr[rho log2 rho] - log2 F(rho, sigma).
TEST(RelativeEntropy, FidelityLowerBoundHoldsOnRandomPairs) {
  for (std::size_t d : {2u, 3u, 4u}) {
    for (std::uint64_t seed = 0; seed < 1000; ++seed) {
      const auto rho = random_state(dims_for(d), 1 + seed % d, 7 * seed + d);
      const auto sigma = random_state(dims_for(d), d - (seed / 3) % 2, 7 * seed + 100000 + d);
      const double s = relative_entropy(rho, sigma);
      if (!std::isfinite(s)) continue;
      const double bound = -von_neumann_entropy(rho) - std::log2(fidelity(rho, sigma));
      EXPECT_GE(s, bound - 1e-8);
    }
  }
}

TEST(Concurrence, KnownStates) {
  EXPECT_NEAR(concurrence(DensityMatrix::from_pure(fixtures::bell_phi_plus())), 1.0, 1e-12);
  EXPECT_NEAR(concurrence(DensityMatrix::from_pure(PureState({2, 2}, basis(4, 1)))), 0.0, 1e-12);
  EXPECT_NEAR(concurrence(gvp_state(0.5, 0.99)), 0.99, 1e-10);
  for (int i = 0; i <= 10; ++i) {
    const double a = i / 10.0;
    EXPECT_NEAR(concurrence(gvp_state(a, 0.9)), 2 * 0.9 * std::sqrt(a * (1 - a)), 1e-10);
  }
  EXPECT_THROW(concurrence(random_state({3}, 2, 1)), InvalidArgument);
}

TEST(Concurrence, PurePathAgreesWithSpinFlip) {
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto rho = random_state({2, 2}, 1, seed);
    EXPECT_NEAR(concurrence(rho), wootters_concurrence(rho), 1e-7);
    const auto inv = two_qubit_invariants(rho);
    EXPECT_NEAR(inv.root * inv.root + inv.concurrence * inv.concurrence, 1.0, 1e-12);
  }
}

TEST(Concurrence, SeparableInputsGiveZero) {
  Engine eng = make_engine(12);
  for (int t = 0; t < 100; ++t) {
    ComplexMatrix sigma(4, 4);
    double wsum = 0.0;
    std::vector<double> w(4);
    for (auto& x : w) wsum += (x = std::uniform_real_distribution<double>(0.05, 1)(eng));
    for (int k = 0; k < 4; ++k) {
      const cvec v = tensor_product(random_unit_vector(2, eng), random_unit_vector(2, eng));
      sigma += ComplexMatrix::projector(v) * (w[k] / wsum);
    }
    EXPECT_LE(concurrence(DensityMatrix({2, 2}, sigma)), 1e-9);
  }
}

TEST(TwoQubitForms, ClosedFormValues) {
  const auto bell = DensityMatrix::from_pure(fixtures::bell_phi_plus());
  EXPECT_NEAR(entanglement_of_formation_2q(bell), 1.0, 1e-12);
  EXPECT_NEAR(geometric_measure_2q(bell), 0.5, 1e-12);
  EXPECT_NEAR(fs_2q(bell), 0.5, 1e-12);
  EXPECT_NEAR(bures_measure_2q(bell), 2 - std::sqrt(2.0), 1e-12);
  EXPECT_EQ(fs_from_concurrence(1.0), 0.5);
  EXPECT_EQ(bures_from_concurrence(1.0), 2 - std::sqrt(2.0));

  EXPECT_EQ(formation_from_concurrence(0.0), 0.0);
  EXPECT_EQ(geometric_from_concurrence(0.0), 0.0);
  EXPECT_EQ(fs_from_concurrence(0.0), 1.0);
  EXPECT_EQ(bures_from_concurrence(0.0), 0.0);
  EXPECT_DOUBLE_EQ(formation_from_concurrence(1.0), 1.0);

  // C = 0.6: sqrt(1 - 0.36) = 0.8
  EXPECT_NEAR(formation_from_concurrence(0.6), 0.468995593589281221, 1e-15);
  EXPECT_NEAR(geometric_from_concurrence(0.6), 0.1, 1e-15);
  EXPECT_NEAR(fs_from_concurrence(0.6), 0.9, 1e-15);
  EXPECT_NEAR(bures_from_concurrence(0.6), 0.102633403898972401, 1e-15);

  const auto c06 = pure_with_concurrence(0.6);
  EXPECT_NEAR(concurrence(c06), 0.6, 1e-12);
  EXPECT_NEAR(geometric_measure_2q(c06), 0.1, 1e-12);
}

TEST(TwoQubitForms, FsPlusGeometricIsExactlyOne) {
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto rho = random_state({2, 2}, 1 + seed % 4, seed);
    EXPECT_EQ(fs_2q(rho) + geometric_measure_2q(rho), 1.0);
  }
}

TEST(TwoQubitForms, FormationDominatesGeometric) {
  for (std::uint64_t seed = 0; seed < 1000; ++seed) {
    const auto rho = random_state({2, 2}, 1 + seed % 4, seed + 7);
    const double ef = entanglement_of_formation_2q(rho);
    const double eg = geometric_measure_2q(rho);
    EXPECT_GE(ef, eg);
    EXPECT_GE(eg, 0.0);
    EXPECT_LE(eg, 0.5);
    EXPECT_LE(ef, 1.0);
  }
}

TEST(TwoQubitForms, FormationMonotoneInConcurrence) {
  double prev = 0.0;
  for (int i = 1; i <= 1000; ++i) {
    const double v = formation_from_concurrence(i / 1000.0);
    EXPECT_GT(v, prev);
    prev = v;
  }
}

TEST(TwoQubitForms, LocalUnitaryInvariance) {
  Engine eng = make_engine(21);
  for (std::uint64_t seed = 0; seed < 200; ++seed) {
    const auto rho = random_state({2, 2}, 1 + seed % 4, seed);
    const ComplexMatrix u = fixtures::random_local_unitary({2, 2}, eng);
    const DensityMatrix rotated({2, 2}, u * rho.matrix() * u.adjoint());
    EXPECT_NEAR(concurrence(rotated), concurrence(rho), 1e-9);
    EXPECT_NEAR(entanglement_of_formation_2q(rotated), entanglement_of_formation_2q(rho), 1e-9);
    EXPECT_NEAR(bures_measure_2q(rotated), bures_measure_2q(rho), 1e-9);
  }
}

TEST(DerivedMeasures, GroverianAndBound) {
  EXPECT_EQ(groverian_measure(1.0), 0.0);
  EXPECT_NEAR(groverian_measure(0.5), M_SQRT1_2, 1e-15);
  EXPECT_NEAR(groverian_measure(0.9), std::sqrt(0.1), 1e-15);
  EXPECT_THROW(groverian_measure(0.0), InvalidArgument);
  EXPECT_THROW(groverian_measure(1.5), InvalidArgument);

  const auto bell = DensityMatrix::from_pure(fixtures::bell_phi_plus());
  EXPECT_NEAR(er_lower_bound(bell, 0.5), 1.0, 1e-12);
  const DensityMatrix mixed({2, 2}, ComplexMatrix::identity(4) * 0.25);
  EXPECT_EQ(er_lower_bound(mixed, 0.0), 0.0);
  EXPECT_THROW(er_lower_bound(mixed, 1.0), InvalidArgument);
}

TEST(DerivedMeasures, GvpBoundOrdering) {
  for (double p : {0.99, 0.9}) {
    for (int i = 0; i <= 100; ++i) {
      const double a = i / 100.0;
      const auto rho = gvp_state(a, p);
      const double lower = er_lower_bound(rho, geometric_measure_2q(rho));
      const double er = gvp_relative_entropy(a, p);
      const double ef = entanglement_of_formation_2q(rho);
      EXPECT_LE(lower, er + 1e-12) << "a=" << a;
      EXPECT_LE(er, ef + 1e-12) << "a=" << a;
    }
  }
  EXPECT_THROW(gvp_state(0.5, 0.0), InvalidArgument);
  EXPECT_THROW(gvp_state(1.5, 0.5), InvalidArgument);
}

TEST(DerivedMeasures, GvpEndpointsVanishExactly) {
  for (double p : {0.99, 0.9}) {
    for (double a : {0.0, 1.0}) {
      const auto rho = gvp_state(a, p);
      EXPECT_EQ(gvp_relative_entropy(a, p), 0.0);
      EXPECT_EQ(entanglement_of_formation_2q(rho), 0.0);
      EXPECT_EQ(er_lower_bound(rho, geometric_measure_2q(rho)), 0.0);
    }
  }
}
