#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "dmps/error.hpp"
#include "dmps/quadrature.hpp"
#include "dmps/stationary.hpp"

using namespace dmps;

namespace {

double log_curvature_fd(const StationaryDensity& d) {
  const double s = 1e-3;
  return (std::log(d(s)) - 2 * std::log(d(0.0)) + std::log(d(-s))) / (s * s);
}

}  // namespace

TEST(StationaryWgn, OrnsteinUhlenbeck) {
  const auto d = stationary_wgn(linear_drift(-1.0, 1.0));
  for (double x : {0.0, 0.5, -1.2, 2.0}) {
    EXPECT_NEAR(d(x), std::exp(-x * x) / std::sqrt(M_PI), 1e-12);
  }
  const auto d2 = stationary_wgn(linear_drift(-1.0, std::sqrt(2.0)));
  EXPECT_NEAR(d2(1.0), std::exp(-0.5) / std::sqrt(2 * M_PI), 1e-12);
  EXPECT_NEAR(integrate([&](double x) { return d(x); }, d.lo, d.hi), 1.0, 1e-10);
}

TEST(StationaryWgn, NonConfiningDriftIsRejected) {
  try {
    stationary_wgn(linear_drift(0.5, 1.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNormalizable);
  }
  DiffusionSpec no_b = linear_drift(-1.0, 1.0);
  no_b.drift_antiderivative.reset();
  EXPECT_THROW(stationary_wgn(no_b), Error);
}

TEST(StationaryWgn, ArgmaxDoesNotMoveWithSigma) {
  for (double sigma : {0.3, 1.0, 2.5}) {
    EXPECT_NEAR(argmax(stationary_wgn(linear_drift(-2.0, sigma)), 2001), 0.0, 1e-12);
  }
}

TEST(BallisticMarginal, ReducesToWgnAtZeroRisk) {
  const auto spec = linear_drift(-1.0, 1.3);
  const auto w = stationary_wgn(spec);
  for (auto form : {MarginalForm::CoshProduct, MarginalForm::BranchSum}) {
    const auto b = stationary_ballistic_marginal(spec, RiskParam(0.0), form);
    for (double x : linspace(-3, 3, 31)) EXPECT_NEAR(b(x) / w(x), 1.0, 1e-14);
  }
}

TEST(BallisticMarginal, CoshFormShape) {
  const auto spec = linear_drift(-1.0, 1.0);
  const double lambda = 1.5;
  const auto d = stationary_ballistic_marginal(spec, RiskParam(lambda));
  const double k = std::sqrt(2 * lambda);
  EXPECT_NEAR(d(0.7) / d(0.0), std::cosh(k * 0.7) * std::exp(-0.49), 1e-12);
  EXPECT_NEAR(integrate([&](double x) { return d(x); }, d.lo, d.hi), 1.0, 1e-10);
}

TEST(BallisticMarginal, BranchSumShape) {
  // branches of dX = (-x +- sigma k) dt + sigma dW are N(+-sigma k, sigma^2/2)
  const double sigma = 1.4;
  const double k = std::sqrt(2 * 0.8);
  const auto d = stationary_ballistic_marginal(linear_drift(-1.0, sigma), RiskParam(0.8), MarginalForm::BranchSum);
  const double var = 0.5 * sigma * sigma;
  for (double x : {-2.0, 0.0, 0.9, 3.0}) {
    const double expect = 0.5 * gauss_pdf(x, sigma * k, var) + 0.5 * gauss_pdf(x, -sigma * k, var);
    EXPECT_NEAR(d(x), expect, 1e-12);
  }
}

TEST(BallisticMarginal, BranchThatEscapesIsNotNormalizable) {
  // |b| <= 1 cannot hold back a tilt of size sqrt(2 lambda) = 2
  DiffusionSpec spec;
  spec.drift = [](double x) { return -std::tanh(x); };
  spec.drift_antiderivative = [](double x) { return -log_cosh(x); };
  spec.antisymmetric_drift = true;
  spec.sigma = 1.0;
  try {
    stationary_ballistic_marginal(spec, RiskParam(2.0));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotNormalizable);
  }
}

TEST(Curvature, OrnsteinUhlenbeckValues) {
  const auto spec = linear_drift(-1.0, 1.0);
  EXPECT_EQ(curvature_origin(spec, RiskParam(0.0)), -2.0);
  EXPECT_EQ(curvature_origin(spec, RiskParam(1.0)), 0.0);
  EXPECT_EQ(curvature_origin(spec, RiskParam(1.5)), 1.0);
  for (double lambda : {0.1, 0.5, 0.75, 2.0, 4.0}) {
    EXPECT_EQ(curvature_origin(spec, RiskParam(lambda)), -2.0 + 2.0 * lambda);
  }
}

TEST(Curvature, MatchesNumericalLogCurvature) {
  for (double sigma : {0.8, 1.0, 1.5}) {
    const auto spec = linear_drift(-1.0, sigma);
    for (double lambda : {0.2, 0.5, 1.5, 3.0}) {
      for (auto form : {MarginalForm::CoshProduct, MarginalForm::BranchSum}) {
        const double c = curvature_origin(spec, RiskParam(lambda), form);
        const double fd = log_curvature_fd(stationary_ballistic_marginal(spec, RiskParam(lambda), form));
        if (std::fabs(c) < 1e-9) continue;
        EXPECT_NEAR(fd / c, 1.0, 1e-3) << sigma << " " << lambda;
      }
    }
  }
}

TEST(Curvature, RequiresAntisymmetricDrift) {
  DiffusionSpec spec = linear_drift(-1.0, 1.0);
  spec.antisymmetric_drift = false;
  EXPECT_THROW(curvature_origin(spec, RiskParam(1.0)), Error);
}

TEST(ModeCount, TransitionAcrossCriticalRisk) {
  const auto spec = linear_drift(-1.0, 1.0);
  EXPECT_EQ(mode_count(stationary_wgn(spec), 2001), 1);
  EXPECT_EQ(mode_count(stationary_ballistic_marginal(spec, RiskParam(0.5)), 2001), 1);
  EXPECT_EQ(mode_count(stationary_ballistic_marginal(spec, RiskParam(0.95)), 4001), 1);
  EXPECT_EQ(mode_count(stationary_ballistic_marginal(spec, RiskParam(1.05)), 4001), 2);
  EXPECT_EQ(mode_count(stationary_ballistic_marginal(spec, RiskParam(1.5)), 2001), 2);
  // The branch-sum marginal flips at lambda = 1/4 instead.
  EXPECT_EQ(mode_count(stationary_ballistic_marginal(spec, RiskParam(0.2), MarginalForm::BranchSum), 4001), 1);
  EXPECT_EQ(mode_count(stationary_ballistic_marginal(spec, RiskParam(0.5), MarginalForm::BranchSum), 4001), 2);
  EXPECT_THROW(mode_count(stationary_wgn(spec), 100), Error);
}

TEST(ModeCount, PlateauCountsOnce) {
  StationaryDensity flat;
  flat.unnormalized = [](double x) { return std::fabs(x) < 1 ? 1.0 : std::exp(-(std::fabs(x) - 1)); };
  flat.lo = -5;
  flat.hi = 5;
  EXPECT_EQ(mode_count(flat, 1001), 1);
}

TEST(Cep, Examples) {
  const auto a = cep_classify(1.0, RiskParam(0.1));
  EXPECT_TRUE(a.holds);
  EXPECT_NEAR(a.margin, 1.0 - std::sqrt(0.2), 1e-15);
  EXPECT_NEAR(a.margin, 0.5528, 1e-4);
  const auto b = cep_classify(1.0, RiskParam(2.0));
  EXPECT_FALSE(b.holds);
  EXPECT_EQ(b.margin, -1.0);
  const auto c = cep_classify(0.0, RiskParam(0.0));
  EXPECT_FALSE(c.holds);
  EXPECT_EQ(c.margin, 0.0);
  EXPECT_FALSE(cep_classify(-1.0, RiskParam(0.5)).holds);
  EXPECT_TRUE(cep_classify(-1.0, RiskParam(0.4)).holds);
}

TEST(Cep, AgreesWithInequalityOnRandomPairs) {
  std::mt19937_64 gen(20240611);
  std::uniform_real_distribution<double> b_dist(-5.0, 5.0);
  std::uniform_real_distribution<double> l_dist(0.0, 12.5);
  for (int i = 0; i < 1000; ++i) {
    const double b = b_dist(gen);
    const double lambda = l_dist(gen);
    EXPECT_EQ(cep_classify(b, RiskParam(lambda)).holds, std::sqrt(2 * lambda) < std::fabs(b));
  }
}
