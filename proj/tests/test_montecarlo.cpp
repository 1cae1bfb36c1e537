#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "dmps/error.hpp"
#include "dmps/montecarlo.hpp"
#include "dmps/random.hpp"
#include "dmps/stationary.hpp"
#include "dmps/verifier.hpp"

using namespace dmps;

TEST(CounterRng, StreamsAreReproducibleAndDistinct) {
  CounterRng a(42, 7);
  CounterRng b(42, 7);
  CounterRng c(42, 8);
  CounterRng d(43, 7);
  for (int i = 0; i < 100; ++i) {
    const auto va = a();
    EXPECT_EQ(va, b());
    EXPECT_NE(va, c());
    EXPECT_NE(va, d());
  }
  CounterRng u(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u.uniform();
    EXPECT_GE(x, 0.0);
    EXPECT_LT(x, 1.0);
  }
}

TEST(SimConfig, Validation) {
  SimConfig cfg{1e-3, 1.0, 10, 1};
  EXPECT_NO_THROW(cfg.validate());
  EXPECT_EQ(cfg.steps(), 1000);
  cfg.dt = 0.3;
  EXPECT_EQ(cfg.steps(), 4);
  cfg.dt = 0.0;
  EXPECT_THROW(cfg.validate(), Error);
  SimConfig no_paths{1e-3, 1.0, 0, 1};
  EXPECT_THROW(no_paths.validate(), Error);
}

TEST(EulerMaruyama, BrownianMoments) {
  const auto s = euler_maruyama(brownian(1.0), std::nullopt, 0.0, SimConfig{1e-2, 1.0, 100000, 3});
  const auto st = sample_stats(s.values);
  EXPECT_NEAR(st.mean, 0.0, 0.01);
  EXPECT_NEAR(st.variance, 1.0, 0.02);
  EXPECT_EQ(s.provenance, Provenance::IntegratedSde);
  EXPECT_STREQ(to_string(s.provenance), "integrated-sde");
}

TEST(EulerMaruyama, DeterministicLimit) {
  DiffusionSpec spec = brownian(1.0);
  spec.sigma = 0.0;
  const auto s = euler_maruyama(spec, RealFn([](double) { return 0.75; }), 2.0, SimConfig{0.01, 2.0, 4, 1});
  for (double v : s.values) EXPECT_NEAR(v, 2.0 + 0.75 * 2.0, 1e-12);
}

TEST(EulerMaruyama, BlowupNamesPathAndStep) {
  const RealFn explosive = [](double x) { return 1.0 + x * x * x; };
  try {
    euler_maruyama(brownian(1.0), explosive, 1.0, SimConfig{0.1, 50.0, 3, 1}, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NumericalBlowup);
    EXPECT_NE(std::string(e.what()).find("path 0"), std::string::npos) << e.what();
    EXPECT_NE(std::string(e.what()).find("step"), std::string::npos);
  }
}

TEST(EulerMaruyama, WorkerCountDoesNotChangeResults) {
  const RiskParam l(2.0);
  const RealFn drift = [l](double x) { return ballistic_drift(x, l); };
  const SimConfig cfg{1e-2, 1.0, 3001, 99};
  const auto one = euler_maruyama(brownian(1.0), drift, 0.0, cfg, 1);
  for (unsigned w : {2u, 3u, 8u}) {
    const auto many = euler_maruyama(brownian(1.0), drift, 0.0, cfg, w);
    ASSERT_EQ(one.values, many.values) << w;
  }
  const auto e1 = exact_ballistic_sample(l, 1.0, 3001, 99, 1);
  EXPECT_EQ(e1.values, exact_ballistic_sample(l, 1.0, 3001, 99, 8).values);
}

TEST(EulerMaruyama, StepHalvingReducesBias) {
  const double lambda = 2.0;
  const RiskParam l(lambda);
  const RealFn drift = [l](double x) { return ballistic_drift(x, l); };
  const double target = 1.0 + 2 * lambda;
  const long n = 40000;
  const auto coarse = sample_stats(euler_maruyama(brownian(1.0), drift, 0.0, SimConfig{0.2, 1.0, n, 5}).values);
  const auto fine = sample_stats(euler_maruyama(brownian(1.0), drift, 0.0, SimConfig{0.1, 1.0, n, 5}).values);
  // standard error of the sample variance
  const double se = target * std::sqrt(2.0 / n) * 2;
  EXPECT_LE(std::fabs(fine.variance - target), std::fabs(coarse.variance - target) + 3 * se);
  EXPECT_LE(std::fabs(fine.mean), std::fabs(coarse.mean) + 3 * fine.mean_standard_error);
}

TEST(ExactSampler, ZeroRiskIsGaussian) {
  const auto s = exact_ballistic_sample(RiskParam(0.0), 2.0, 100000, 11);
  EXPECT_EQ(s.provenance, Provenance::ExactMixture);
  EXPECT_LT(ks_distance(s, [](double x) { return normal_cdf(x / std::sqrt(2.0)); }), 1.63 / std::sqrt(1e5));
}

TEST(ExactSampler, MatchesClosedFormCdf) {
  const RiskParam l(2.0);
  const auto s = exact_ballistic_sample(l, 1.0, 100000, 42);
  EXPECT_LT(ks_distance(s, [&](double x) { return cdf_P(l, 1.0, x); }), 0.006);
  const auto st = sample_stats(s.values);
  const double var = 1.0 + 2 * 2.0;
  const double se_var = std::sqrt(2.0 / 1e5) * var * 2;
  EXPECT_NEAR(st.variance, var, 3 * se_var);
  const RiskParam l5(5.0);
  const auto s5 = exact_ballistic_sample(l5, 0.5, 100000, 8);
  EXPECT_LT(ks_distance(s5, [&](double x) { return cdf_P(l5, 0.5, x); }), 0.006);
}

TEST(ExactSampler, AgreesWithIntegratedSde) {
  const RiskParam l(2.0);
  const RealFn drift = [l](double x) { return ballistic_drift(x, l); };
  const auto em = euler_maruyama(brownian(1.0), drift, 0.0, SimConfig{1e-3, 1.0, 100000, 17});
  const auto ex = exact_ballistic_sample(l, 1.0, 100000, 18);
  EXPECT_LT(ks_two_sample(em.values, ex.values), 0.02);
  EXPECT_LT(ks_distance(em, [&](double x) { return cdf_P(l, 1.0, x); }), 0.02);
}

TEST(Ks, DegenerateSample) {
  std::vector<double> zeros(1000, 0.0);
  EXPECT_NEAR(ks_distance(zeros, [](double x) { return normal_cdf(x); }), 0.5, 1e-12);
  EXPECT_EQ(ks_two_sample({1.0, 2.0, 3.0}, {1.0, 2.0, 3.0}), 0.0);
  EXPECT_EQ(ks_two_sample({0.0, 0.0}, {5.0, 5.0}), 1.0);
}

TEST(Histogram, CountsAndDensity) {
  const auto h = make_histogram({-6.0, -0.1, 0.05, 0.1, 0.3, 7.0}, HistogramSpec{-1, 1, 4});
  EXPECT_EQ(h.total, 6);
  EXPECT_EQ(h.underflow, 1);
  EXPECT_EQ(h.overflow, 1);
  EXPECT_EQ(h.counts, (std::vector<long>{0, 1, 3, 0}));
  EXPECT_DOUBLE_EQ(h.center(0), -0.75);
  EXPECT_DOUBLE_EQ(h.density(2), 3.0 / (6 * 0.5));
  EXPECT_THROW(make_histogram({}, HistogramSpec{1, -1, 4}), Error);
}

TEST(Coupled, ZeroRiskMatchesWgn) {
  const auto spec = linear_drift(-1.0, 1.0);
  const auto h = simulate_coupled(spec, RiskParam(0.0), SimConfig{1e-2, 10.0, 20000, 4});
  EXPECT_LT(l1_distance(h, stationary_wgn(spec)), 0.05);
  EXPECT_EQ(histogram_mode_count(h), 1);
}

TEST(Coupled, ModesFollowCurvature) {
  const auto spec = linear_drift(-1.0, 1.0);
  const SimConfig cfg{1e-2, 10.0, 20000, 6};
  for (auto form : {MarginalForm::CoshProduct, MarginalForm::BranchSum}) {
    const auto h = simulate_coupled(spec, RiskParam(1.5), cfg, {}, form);
    EXPECT_EQ(histogram_mode_count(h), 2);
    EXPECT_LT(l1_distance(h, stationary_ballistic_marginal(spec, RiskParam(1.5), form)), 0.05);
  }
  const auto cosh_half = simulate_coupled(spec, RiskParam(0.5), cfg, {}, MarginalForm::CoshProduct);
  EXPECT_EQ(histogram_mode_count(cosh_half), 1);
  EXPECT_LT(l1_distance(cosh_half, stationary_ballistic_marginal(spec, RiskParam(0.5))), 0.05);
  // sigma-scaled coupling: curvature -2 + 8 lambda, already bimodal
  const auto literal_half = simulate_coupled(spec, RiskParam(0.5), cfg, {}, MarginalForm::BranchSum);
  EXPECT_EQ(histogram_mode_count(literal_half), 2);
}

TEST(L1, IdenticalMassIsZeroOutsideMassCounts) {
  const auto spec = linear_drift(-1.0, 1.0);
  const auto d = stationary_wgn(spec);
  Histogram far = make_histogram(std::vector<double>(100, 50.0), HistogramSpec{-5, 5, 50});
  EXPECT_NEAR(l1_distance(far, d), 2.0, 1e-9);
}
