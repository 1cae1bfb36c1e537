#pragma once

#include <optional>
#include <string>

#include "dmps/process.hpp"

namespace dmps {

// Marginal value of installed capital (Cobb-Douglas profits h p^theta K) with
// productivity driven by geometric noise.
struct InvestParams {
  double r = 0.05;      // discount rate
  double delta = 0.05;  // depreciation
  double alpha = 0.5;   // Cobb-Douglas labour exponent
  double omega = 1.0;   // wage
  double theta = 1.0;
  double sigma = 0.0;
  double mu = 0.0;      // ballistic amplitude
  double p_t = 1.0;     // current productivity
  // Profit scale; derived from (alpha, omega) when absent. Required when
  // omega = 0.
  std::optional<double> h;

  void validate() const;
  // r + delta - theta (theta - 1) sigma^2 / 2
  double effective_discount() const;
  double profit_scale() const;
};

double q0(const InvestParams& p);
double q_mu(const InvestParams& p, int drift_sign);
// Average of the two drifted branches: h p^theta A / (A^2 - mu^2).
double q_ballistic(const InvestParams& p);
// q0 [1 + (mu / A)^2], accurate to O(mu^4); meant for mu < A / 2.
double q_ballistic_smallmu(const InvestParams& p);

// E[p_{t+s}^theta] = p_t^theta exp(theta (theta - 1) sigma^2 s / 2).
double expected_power_moment(double p_t, double theta, double sigma, double s);

enum class MomentConvention {
  Paper,         // x0 e^{(mu + sigma^2) t} cosh(sigma sqrt(2 lambda) t)
  HalfVariance,  // x0 e^{(mu + sigma^2/2) t} cosh(sigma sqrt(2 lambda) t)
};

const char* to_string(MomentConvention c) noexcept;
MomentConvention parse_convention(const std::string& name);

struct BSParams {
  double x0 = 1.0;
  double mu = 10.0;
  double sigma = 1.0;
  RiskParam lambda{0.0};
  MomentConvention convention = MomentConvention::Paper;

  void validate() const;
};

// Equal mixture of the log-normal densities with log-mean
// ln x0 + (mu -+ sigma sqrt(2 lambda)) t and log-variance sigma^2 t.
double bs_marginal_density(double x, double t, const BSParams& p);
double bs_mean(double t, const BSParams& p);
// Median of one branch, x0 e^{(mu + sign sigma sqrt(2 lambda)) t}.
double bs_branch_median(double t, const BSParams& p, int sign);
double growth_ratio(double t, double sigma, RiskParam lambda);

}  // namespace dmps
