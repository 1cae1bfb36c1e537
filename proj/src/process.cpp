#include "dmps/process.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "dmps/error.hpp"

namespace dmps {
namespace {

constexpr double kSampleGrid[] = {0.0, 0.25, 0.5, 1.0, 1.5, 2.0, 3.0, 5.0};

}  // namespace

RiskParam::RiskParam(double value) : value_(value), rate_(0.0) {
  detail::require(std::isfinite(value) && value >= 0.0,
                  "risk parameter lambda must be finite and >= 0");
  rate_ = std::sqrt(2.0 * value);
}

void DiffusionSpec::validate() const {
  detail::require(static_cast<bool>(drift), "DiffusionSpec: drift is empty");
  detail::require(std::isfinite(sigma) && sigma > 0.0,
                  "DiffusionSpec: sigma must be > 0");
  if (antisymmetric_drift) {
    for (double x : kSampleGrid) {
      detail::require(std::fabs(drift(x) + drift(-x)) <= 1e-12,
                      "DiffusionSpec: drift flagged antisymmetric but "
                      "b(x) + b(-x) != 0");
    }
  }
  if (drift_antiderivative) {
    const auto& B = *drift_antiderivative;
    constexpr double step = 1e-5;
    for (double x : kSampleGrid) {
      for (double s : {x, -x}) {
        const double slope = (B(s + step) - B(s - step)) / (2.0 * step);
        const double b = drift(s);
        detail::require(std::fabs(slope - b) <= 1e-6 * std::max(1.0, std::fabs(b)),
                        "DiffusionSpec: drift antiderivative does not match drift");
      }
    }
  }
}

DiffusionSpec linear_drift(double slope, double sigma) {
  DiffusionSpec spec;
  spec.drift = [slope](double x) { return slope * x; };
  spec.sigma = sigma;
  spec.drift_antiderivative = [slope](double x) { return 0.5 * slope * x * x; };
  spec.antisymmetric_drift = true;
  return spec;
}

DiffusionSpec brownian(double sigma) { return linear_drift(0.0, sigma); }

GaussianMixture::GaussianMixture(std::vector<GaussianComponent> components)
    : components_(std::move(components)) {
  detail::require(!components_.empty(), "GaussianMixture: no components");
  double total = 0.0;
  for (const auto& c : components_) {
    detail::require(c.weight >= 0.0 && c.weight <= 1.0,
                    "GaussianMixture: weights must lie in [0, 1]");
    detail::require(c.var > 0.0, "GaussianMixture: variances must be > 0");
    total += c.weight;
  }
  detail::require(std::fabs(total - 1.0) <= 1e-15,
                  "GaussianMixture: weights must sum to 1");
}

double GaussianMixture::pdf(double x) const {
  double acc = 0.0;
  for (const auto& c : components_) acc += c.weight * gauss_pdf(x, c.mean, c.var);
  return acc;
}

double GaussianMixture::cdf(double x) const {
  double acc = 0.0;
  for (const auto& c : components_) {
    acc += c.weight * normal_cdf((x - c.mean) / std::sqrt(c.var));
  }
  return acc;
}

double GaussianMixture::mean() const {
  double acc = 0.0;
  for (const auto& c : components_) acc += c.weight * c.mean;
  return acc;
}

double GaussianMixture::variance() const {
  const double m = mean();
  double acc = 0.0;
  for (const auto& c : components_) {
    acc += c.weight * (c.var + (c.mean - m) * (c.mean - m));
  }
  return acc;
}

double ballistic_drift(double x, RiskParam lambda) {
  const double k = lambda.rate();
  if (k == 0.0) return 0.0;
  return k * std::tanh(k * x);
}

double ballistic_tpd(double x, double t, RiskParam lambda) {
  detail::require(t > 0.0, "ballistic_tpd: t must be > 0");
  const double k = lambda.rate();
  return std::exp(-lambda.value() * t - x * x / (2.0 * t)) * std::cosh(k * x) /
         std::sqrt(2.0 * std::numbers::pi * t);
}

GaussianMixture bernoulli_mixture(RiskParam lambda, double t) {
  detail::require(t > 0.0, "bernoulli_mixture: t must be > 0");
  const double shift = lambda.rate() * t;
  return GaussianMixture({{0.5, -shift, t}, {0.5, shift, t}});
}

double hermite_h(RiskParam lambda, double x, const SeriesControl& ctrl) {
  const double z = 0.5 * x * x;
  const double a = 0.5 * (lambda.value() + 1.0);
  return std::exp(-z) * hyp1f1(a, 0.5, z, ctrl);
}

EigenFamily::EigenFamily(EigenKind kind, RiskParam lambda, DiffusionSpec base,
                         SeriesControl ctrl)
    : kind_(kind), lambda_(lambda), base_(std::move(base)), ctrl_(ctrl) {}

EigenFamily EigenFamily::ballistic(RiskParam lambda) {
  return EigenFamily(EigenKind::BallisticCosh, lambda, brownian(1.0), {});
}

EigenFamily EigenFamily::hermite(RiskParam lambda, SeriesControl ctrl) {
  ctrl.validate();
  return EigenFamily(EigenKind::HermiteF11, lambda,
                     linear_drift(1.0, std::numbers::sqrt2), ctrl);
}

double EigenFamily::h(double x) const {
  switch (kind_) {
    case EigenKind::BallisticCosh:
      return std::cosh(lambda_.rate() * x);
    case EigenKind::HermiteF11:
      return hermite_h(lambda_, x, ctrl_);
  }
  return 0.0;
}

double EigenFamily::R(double x) const {
  switch (kind_) {
    case EigenKind::BallisticCosh: {
      // d/dlambda cosh(sqrt(2 lambda) x) = x sinh(sqrt(2 lambda) x) / sqrt(2 lambda)
      const double k = lambda_.rate();
      if (k == 0.0) return x * x;
      return x * std::sinh(k * x) / k;
    }
    case EigenKind::HermiteF11: {
      const double z = 0.5 * x * x;
      const double a = 0.5 * (lambda_.value() + 1.0);
      return 0.5 * std::exp(-z) * hyp1f1_da(a, 0.5, z, ctrl_);
    }
  }
  return 0.0;
}

double EigenFamily::log_slope(double x) const {
  switch (kind_) {
    case EigenKind::BallisticCosh:
      return ballistic_drift(x, lambda_);
    case EigenKind::HermiteF11: {
      // h = e^{-z} M(a, 1/2, z), z = x^2/2, M' = 2a M(a+1, 3/2, z).
      const double z = 0.5 * x * x;
      const double a = 0.5 * (lambda_.value() + 1.0);
      const double m = hyp1f1(a, 0.5, z, ctrl_);
      if (!(m > 0.0) || !std::isfinite(m)) {
        throw Error(ErrorKind::EvaluationFailure,
                    "Hermite eigenfunction is not representable at this x");
      }
      return x * (2.0 * a * hyp1f1(a + 1.0, 1.5, z, ctrl_) / m - 1.0);
    }
  }
  return 0.0;
}

double EigenFamily::base_tpd(double x, double t) const {
  detail::require(t > 0.0, "base_tpd: t must be > 0");
  switch (kind_) {
    case EigenKind::BallisticCosh:
      return gauss_pdf(x, 0.0, t);
    case EigenKind::HermiteF11:
      // dX = X dt + sqrt(2) dW from 0: variance e^{2t} - 1.
      return gauss_pdf(x, 0.0, std::expm1(2.0 * t));
  }
  return 0.0;
}

double eigen_R(const EigenFamily& family, double x) { return family.R(x); }

RealFn dual_drift(const DiffusionSpec& spec, const EigenFamily& family) {
  spec.validate();
  const DiffusionSpec& base = family.base();
  detail::require(spec.sigma == base.sigma,
                  "dual_drift: spec sigma differs from the family's base process");
  for (double x : kSampleGrid) {
    for (double s : {x, -x}) {
      detail::require(std::fabs(spec.drift(s) - base.drift(s)) <= 1e-12,
                      "dual_drift: spec drift differs from the family's base process");
    }
  }
  const double sigma2 = spec.sigma * spec.sigma;
  return [drift = spec.drift, sigma2, family](double x) {
    const double h = family.h(x);
    if (!(h > 0.0)) {
      throw Error(ErrorKind::EvaluationFailure,
                  "dual_drift: h underflows to zero");
    }
    return drift(x) + sigma2 * family.log_slope(x);
  };
}

}  // namespace dmps
