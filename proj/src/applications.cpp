#include "dmps/applications.hpp"

#include <cmath>

#include "dmps/error.hpp"

namespace dmps {
namespace {

double checked_denominator(double d) {
  if (!(d > 0.0)) {
    throw Error(ErrorKind::DivergentIntegral,
                "present-value integral diverges: effective discount rate <= 0");
  }
  return d;
}

double numerator(const InvestParams& p) {
  p.validate();
  return p.profit_scale() * std::pow(p.p_t, p.theta);
}

}  // namespace

void InvestParams::validate() const {
  detail::require(r > 0.0, "InvestParams: r must be > 0");
  detail::require(delta >= 0.0, "InvestParams: delta must be >= 0");
  detail::require(alpha > 0.0 && alpha < 1.0, "InvestParams: alpha must lie in (0, 1)");
  detail::require(omega >= 0.0, "InvestParams: omega must be >= 0");
  detail::require(sigma >= 0.0, "InvestParams: sigma must be >= 0");
  detail::require(mu >= 0.0, "InvestParams: mu must be >= 0");
  detail::require(p_t > 0.0, "InvestParams: p_t must be > 0");
  detail::require(std::isfinite(theta), "InvestParams: theta must be finite");
  detail::require(h.has_value() || omega > 0.0,
                  "InvestParams: h must be supplied when omega = 0");
  if (h) detail::require(std::isfinite(*h), "InvestParams: h must be finite");
}

double InvestParams::effective_discount() const {
  return r + delta - 0.5 * theta * (theta - 1.0) * sigma * sigma;
}

double InvestParams::profit_scale() const {
  if (h) return *h;
  const double e = alpha / (1.0 - alpha);
  return (1.0 - alpha) * std::pow(alpha, e) * std::pow(omega, -e);
}

double q0(const InvestParams& p) {
  const double num = numerator(p);
  return num / checked_denominator(p.effective_discount());
}

double q_mu(const InvestParams& p, int drift_sign) {
  detail::require(drift_sign == 1 || drift_sign == -1, "q_mu: drift_sign must be +-1");
  const double num = numerator(p);
  return num / checked_denominator(p.effective_discount() - drift_sign * p.mu);
}

double q_ballistic(const InvestParams& p) {
  return 0.5 * (q_mu(p, +1) + q_mu(p, -1));
}

double q_ballistic_smallmu(const InvestParams& p) {
  const double base = q0(p);
  const double ratio = p.mu / p.effective_discount();
  return base * (1.0 + ratio * ratio);
}

double expected_power_moment(double p_t, double theta, double sigma, double s) {
  detail::require(s >= 0.0, "expected_power_moment: s must be >= 0");
  return std::pow(p_t, theta) * std::exp(0.5 * theta * (theta - 1.0) * sigma * sigma * s);
}

const char* to_string(MomentConvention c) noexcept {
  return c == MomentConvention::Paper ? "paper" : "half-variance";
}

MomentConvention parse_convention(const std::string& name) {
  if (name == "paper") return MomentConvention::Paper;
  if (name == "half-variance") return MomentConvention::HalfVariance;
  throw Error(ErrorKind::InvalidParameter,
              "unknown moment convention '" + name + "' (paper|half-variance)");
}

void BSParams::validate() const {
  detail::require(x0 > 0.0, "BSParams: x0 must be > 0");
  detail::require(sigma > 0.0, "BSParams: sigma must be > 0");
  detail::require(std::isfinite(mu), "BSParams: mu must be finite");
}

double bs_marginal_density(double x, double t, const BSParams& p) {
  p.validate();
  detail::require(x > 0.0, "bs_marginal_density: x must be > 0");
  detail::require(t > 0.0, "bs_marginal_density: t must be > 0");
  const double y = std::log(x);
  const double centre = std::log(p.x0) + p.mu * t;
  const double spread = p.sigma * p.lambda.rate() * t;
  const double var = p.sigma * p.sigma * t;
  return 0.5 * (gauss_pdf(y, centre - spread, var) + gauss_pdf(y, centre + spread, var)) / x;
}

double bs_mean(double t, const BSParams& p) {
  p.validate();
  detail::require(t >= 0.0, "bs_mean: t must be >= 0");
  const double variance_rate =
      p.convention == MomentConvention::Paper ? p.sigma * p.sigma : 0.5 * p.sigma * p.sigma;
  return p.x0 * std::exp((p.mu + variance_rate) * t) * growth_ratio(t, p.sigma, p.lambda);
}

double bs_branch_median(double t, const BSParams& p, int sign) {
  p.validate();
  detail::require(sign == 1 || sign == -1, "bs_branch_median: sign must be +-1");
  return p.x0 * std::exp((p.mu + sign * p.sigma * p.lambda.rate()) * t);
}

double growth_ratio(double t, double sigma, RiskParam lambda) {
  detail::require(t >= 0.0, "growth_ratio: t must be >= 0");
  return std::cosh(sigma * lambda.rate() * t);
}

}  // namespace dmps
