#include <gtest/gtest.h>

#include <cmath>

#include "entroof/report.hpp"
#include "test_support.hpp"

using namespace entroof;

TEST(Report, BellStateUsesClosedForms) {
  const auto r = report_all(DensityMatrix::from_pure(fixtures::bell_phi_plus()));
  EXPECT_EQ(r.source, "closed-form");
  ASSERT_TRUE(r.concurrence.has_value());
  EXPECT_NEAR(*r.concurrence, 1.0, 1e-12);
  EXPECT_NEAR(*r.e_formation, 1.0, 1e-12);
  EXPECT_NEAR(r.e_geometric, 0.5, 1e-12);
  EXPECT_NEAR(r.e_bures, 2.0 - std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(r.e_groverian, std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(r.er_lower_bound, 1.0, 1e-12);
}

TEST(Report, ProductStateIsZero) {
  cvec v(4);
  v[0] = 1.0;
  const auto r = report_all(DensityMatrix::from_pure(PureState({2, 2}, v)));
  EXPECT_EQ(r.f_separability, 1.0);
  EXPECT_EQ(r.e_geometric, 0.0);
  EXPECT_EQ(r.e_bures, 0.0);
  EXPECT_EQ(r.e_groverian, 0.0);
  EXPECT_EQ(*r.concurrence, 0.0);
}

TEST(Report, PureThreeQubitUsesProductSearch) {
  cvec ghz(8);
  ghz[0] = ghz[7] = 1.0 / std::sqrt(2.0);
  const auto r = report_all(DensityMatrix::from_pure(PureState({2, 2, 2}, ghz)));
  EXPECT_EQ(r.source, "pure");
  EXPECT_FALSE(r.concurrence.has_value());
  EXPECT_NEAR(r.e_geometric, 0.5, 1e-10);
}

TEST(Report, MixedQutritUsesRoofSolver) {
  const auto rho = fixtures::random_state({2, 3}, 2, 5);
  RoofOptions opt;
  opt.restarts = 2;
  const auto r = report_all(rho, opt);
  EXPECT_EQ(r.source, "roof");
  EXPECT_GE(r.e_geometric, 0.0);
  EXPECT_LT(r.e_geometric, 0.5);
  EXPECT_NEAR(r.e_bures, 2.0 - 2.0 * std::sqrt(r.f_separability), 1e-15);
}

TEST(Report, GvpFamilyMatchesClosedForms) {
  for (int i = 0; i <= 10; ++i) {
    const double a = i / 10.0;
    const auto rho = gvp_state(a, 0.9);
    const auto r = report_all(rho);
    EXPECT_NEAR(*r.e_formation, entanglement_of_formation_2q(rho), 1e-15);
    EXPECT_LE(r.er_lower_bound, gvp_relative_entropy(a, 0.9) + 1e-12);
  }
}
