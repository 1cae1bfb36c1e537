#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "dmps/specialfn.hpp"

namespace dmps {

using RealFn = std::function<double(double)>;

// Rothschild-Stiglitz increasing-risk parameter, lambda >= 0.
class RiskParam {
 public:
  explicit RiskParam(double value);

  double value() const noexcept { return value_; }
  // sqrt(2 lambda): the drift asymptote of the ballistic process.
  double rate() const noexcept { return rate_; }

 private:
  double value_;
  double rate_;
};

// dX = b(X) dt + sigma dW.
struct DiffusionSpec {
  RealFn drift;
  double sigma = 1.0;
  std::optional<RealFn> drift_antiderivative;  // B with B' = b
  bool antisymmetric_drift = false;

  // Checks sigma > 0 and, on a sample grid, the declared antisymmetry
  // (|b(x) + b(-x)| <= 1e-12) and B' = b (central differences, 1e-6).
  void validate() const;
};

// b(x) = slope * x with B(x) = slope * x^2 / 2.
DiffusionSpec linear_drift(double slope, double sigma);
DiffusionSpec brownian(double sigma = 1.0);

struct GaussianComponent {
  double weight;
  double mean;
  double var;
};

class GaussianMixture {
 public:
  explicit GaussianMixture(std::vector<GaussianComponent> components);

  const std::vector<GaussianComponent>& components() const noexcept {
    return components_;
  }
  double pdf(double x) const;
  double cdf(double x) const;
  double mean() const;
  double variance() const;

 private:
  std::vector<GaussianComponent> components_;
};

// sqrt(2 lambda) tanh(sqrt(2 lambda) x).
double ballistic_drift(double x, RiskParam lambda);

// Transition density of the ballistic process started at 0, in the
// e^{-lambda t} cosh(sqrt(2 lambda) x) N(0, t; x) form.
double ballistic_tpd(double x, double t, RiskParam lambda);

// The same law as a fair mixture of N(-+sqrt(2 lambda) t, t).
GaussianMixture bernoulli_mixture(RiskParam lambda, double t);

// Positive even solution of (d^2/dx^2 + x d/dx) h = lambda h:
// e^{-x^2/2} 1F1((lambda+1)/2; 1/2; x^2/2), normalised to h(0) = 1.
double hermite_h(RiskParam lambda, double x, const SeriesControl& ctrl = {});

enum class EigenKind { BallisticCosh, HermiteF11 };

// A positive solution h of L h = lambda h for one of the two built-in
// generators, together with R = dh/dlambda and the base transition density
// q(0, 0 | x, t) of the untilted process.
class EigenFamily {
 public:
  // Base process b = 0, sigma = 1; h = cosh(sqrt(2 lambda) x).
  static EigenFamily ballistic(RiskParam lambda);
  // Base process b(x) = x, sigma = sqrt(2); h = hermite_h.
  static EigenFamily hermite(RiskParam lambda, SeriesControl ctrl = {});

  EigenKind kind() const noexcept { return kind_; }
  RiskParam lambda() const noexcept { return lambda_; }
  const DiffusionSpec& base() const noexcept { return base_; }

  double h(double x) const;
  double R(double x) const;
  // d/dx log h, in closed form for both families.
  double log_slope(double x) const;
  double base_tpd(double x, double t) const;

 private:
  EigenFamily(EigenKind kind, RiskParam lambda, DiffusionSpec base,
              SeriesControl ctrl);

  EigenKind kind_;
  RiskParam lambda_;
  DiffusionSpec base_;
  SeriesControl ctrl_;
};

double eigen_R(const EigenFamily& family, double x);

// x -> b(x) + sigma^2 d/dx log h(x). Throws InvalidParameter if spec does not
// match the family's base process; the returned function throws
// EvaluationFailure where h underflows.
RealFn dual_drift(const DiffusionSpec& spec, const EigenFamily& family);

}  // namespace dmps
