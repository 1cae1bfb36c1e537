#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "dmps/error.hpp"
#include "dmps/verifier.hpp"

using namespace dmps;

namespace {

// Closed form of the lambda-derivative of int_{-inf}^x P(y, t) dy.
double phi_exact(double lambda, double t, double x) {
  const double k = std::sqrt(2 * lambda);
  const double m = k * t;
  const double dm = t / k;
  const double s = std::sqrt(t);
  return 0.5 * dm * (normal_cdf((x + m) / s) - normal_cdf((x - m) / s));
}

}  // namespace

TEST(CdfP, Values) {
  for (double lambda : {0.0, 1.0, 7.0}) {
    for (double t : {0.1, 1.0, 3.0}) EXPECT_NEAR(cdf_P(RiskParam(lambda), t, 0.0), 0.5, 1e-16);
  }
  EXPECT_NEAR(cdf_P(RiskParam(0.0), 1.0, 1.64485362695147271486), 0.95, 1e-15);
  EXPECT_EQ(cdf_P(RiskParam(2.0), 1.0, std::numeric_limits<double>::infinity()), 1.0);
  EXPECT_EQ(cdf_P(RiskParam(2.0), 1.0, -std::numeric_limits<double>::infinity()), 0.0);
  EXPECT_THROW(cdf_P(RiskParam(2.0), 0.0, 1.0), Error);
}

TEST(CdfP, MoreRiskMeansMoreLeftTailMass) {
  for (double t : {0.25, 1.0, 2.0}) {
    for (double x : linspace(0.01, 8, 100)) {
      double prev = cdf_P(RiskParam(0.0), t, -x);
      for (double lambda : {0.5, 1.0, 2.0, 5.0, 10.0}) {
        const double p = cdf_P(RiskParam(lambda), t, -x);
        EXPECT_GE(p, prev);
        prev = p;
      }
    }
  }
}

TEST(FirstCondition, ResidualVanishes) {
  for (auto [lambda, t] : {std::pair{2.0, 1.0}, std::pair{5.0, 0.25}}) {
    const RiskParam l(lambda);
    const auto r = first_integral_condition(l, t, VerifyGrid::for_ballistic(l, t));
    EXPECT_LT(std::fabs(r.residual), 1e-6);
    EXPECT_NEAR(r.mean_difference, 0.0, 1e-8);
  }
}

TEST(FirstCondition, NeedsPositiveLambda) {
  EXPECT_THROW(first_integral_condition(RiskParam(0.0), 1.0, VerifyGrid{}), Error);
  VerifyGrid grid = VerifyGrid::for_ballistic(RiskParam(1e-5), 1.0);
  grid.lambda_step = 1e-4;
  EXPECT_THROW(first_integral_condition(RiskParam(1e-5), 1.0, grid), Error);
}

TEST(SecondCondition, PositiveInsideVanishingAtEnds) {
  const RiskParam l(2.0);
  const auto grid = VerifyGrid::for_ballistic(l, 1.0);
  EXPECT_GT(second_integral_condition(l, 1.0, 0.0, grid), 0.0);
  EXPECT_NEAR(second_integral_condition(l, 1.0, grid.x_hi, grid), 0.0, 1e-6);
  EXPECT_NEAR(second_integral_condition(l, 1.0, grid.x_lo, grid), 0.0, 1e-6);
}

TEST(SecondCondition, MatchesClosedForm) {
  for (double lambda : {1.0, 2.0, 5.0, 10.0}) {
    for (double t : {0.25, 0.5, 1.0, 2.0}) {
      const RiskParam l(lambda);
      const auto grid = VerifyGrid::for_ballistic(l, t);
      const auto pts = grid.points();
      const auto phi = phi_profile(l, t, grid);
      for (std::size_t i = 0; i < pts.size(); i += 64) {
        EXPECT_NEAR(phi[i], phi_exact(lambda, t, pts[i]), 1e-7) << lambda << " " << t << " " << pts[i];
      }
      EXPECT_GE(*std::min_element(phi.begin(), phi.end()), -1e-8);
      // agreement between the point evaluator and the profile
      EXPECT_NEAR(second_integral_condition(l, t, pts[700], grid), phi[700], 1e-12);
    }
  }
}

TEST(SecondCondition, CurvatureIsLambdaDerivativeOfDensity) {
  const double lambda = 2.0;
  const double t = 1.0;
  const RiskParam l(lambda);
  auto grid = VerifyGrid::for_ballistic(l, t);
  grid.quad_tol = 1e-14;
  const auto pts = grid.points();
  const auto phi = phi_profile(l, t, grid);
  const auto fam = EigenFamily::ballistic(l);
  const double dx = pts[1] - pts[0];
  double peak = 0.0;
  std::vector<double> target(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    target[i] = std::exp(-lambda * t) * (fam.R(pts[i]) - t * fam.h(pts[i])) * fam.base_tpd(pts[i], t);
    peak = std::max(peak, std::fabs(target[i]));
  }
  int checked = 0;
  for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
    if (std::fabs(target[i]) < 0.05 * peak) continue;
    const double second = (phi[i + 1] - 2 * phi[i] + phi[i - 1]) / (dx * dx);
    EXPECT_NEAR(second / target[i], 1.0, 1e-4) << pts[i];
    ++checked;
  }
  EXPECT_GT(checked, 100);
}

TEST(Proposition1, BallisticReportClean) {
  const RiskParam l(2.0);
  const auto r = check_proposition1(EigenFamily::ballistic(l), 1.0, VerifyGrid::for_ballistic(l, 1.0));
  EXPECT_LT(r.r_symmetry_residual, 1e-8);
  EXPECT_LT(r.psi_antisymmetry_residual, 1e-8);
  EXPECT_LT(std::fabs(r.first_condition_residual), 1e-8);
  EXPECT_GE(r.r_min, -1e-10);
  EXPECT_GE(r.curvature_min, -1e-10);
  EXPECT_GE(r.second_condition_min, -1e-10);
  EXPECT_TRUE(r.passes());
}

TEST(Proposition1, HermiteReport) {
  const auto fam = EigenFamily::hermite(RiskParam(1.0));
  const auto grid = VerifyGrid::for_family(fam, 1.0);
  EXPECT_EQ(grid.x_hi, 6.0);
  const auto r = check_proposition1(fam, 1.0, grid);
  EXPECT_LT(r.r_symmetry_residual, 1e-8);
  EXPECT_GE(r.r_min, -1e-10);
  EXPECT_GE(r.curvature_min, -1e-10);
  EXPECT_LT(r.psi_antisymmetry_residual, 1e-8);
}

TEST(Proposition1, CurvatureZeroAtOrigin) {
  const auto fam = EigenFamily::ballistic(RiskParam(3.0));
  EXPECT_EQ(fam.R(0.0) * fam.base_tpd(0.0, 1.0), 0.0);
}

TEST(VerifyBallistic, PassesAcrossGrid) {
  for (double lambda : {1.0, 2.0, 5.0, 10.0}) {
    for (double t : {0.25, 0.5, 1.0, 2.0}) {
      const RiskParam l(lambda);
      const auto r = verify_ballistic(l, t, VerifyGrid::for_ballistic(l, t));
      EXPECT_TRUE(r.passes()) << lambda << " " << t;
    }
  }
}

TEST(VerifyGrid, AutoRangeWidensWithRisk) {
  const auto g = VerifyGrid::for_ballistic(RiskParam(10.0), 2.0);
  EXPECT_NEAR(g.x_hi, std::sqrt(20.0) * 2 + 10 * std::sqrt(2.0), 1e-12);
  EXPECT_EQ(g.x_lo, -g.x_hi);
  EXPECT_EQ(g.n_x, 2048);
  EXPECT_EQ(VerifyGrid::for_ballistic(RiskParam(5e-4), 1.0).lambda_step, 5e-5);
  VerifyGrid bad;
  bad.n_x = 3;
  EXPECT_THROW(bad.validate(), Error);
}
