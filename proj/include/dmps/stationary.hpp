#pragma once

#include "dmps/process.hpp"

namespace dmps {

// Time-invariant density N * u(x) on a bounded support outside of which u is
// below 1e-16 of its maximum.
struct StationaryDensity {
  RealFn unnormalized;
  double normalization = 1.0;
  double lo = 0.0;
  double hi = 0.0;

  double operator()(double x) const { return normalization * unnormalized(x); }
};

// How the Bernoulli drift +-sqrt(2 lambda) enters the stationary marginal.
enum class MarginalForm {
  // u = cosh(sqrt(2 lambda) x) exp(2 B(x) / sigma^2). Stationary law of
  // dX = [b(X) + (sigma^2/2) Bern] dt + sigma dW.
  CoshProduct,
  // Equal-weight mixture of the separately normalised stationary laws of
  // dX = [b(X) + sigma Bern] dt + sigma dW, the literal coupled system.
  BranchSum,
};

// exp(2 B(x) / sigma^2), normalised. Needs the drift antiderivative.
StationaryDensity stationary_wgn(const DiffusionSpec& spec);

StationaryDensity stationary_ballistic_marginal(
    const DiffusionSpec& spec, RiskParam lambda,
    MarginalForm form = MarginalForm::CoshProduct);

// Log-curvature u''(0)/u(0) of the marginal: (2/sigma^2) b'(0) + 2 lambda for
// the cosh form; the tilt of the branch-sum form is 2 sqrt(2 lambda)/sigma,
// giving (2/sigma^2) b'(0) + 8 lambda / sigma^2.
double curvature_origin(const DiffusionSpec& spec, RiskParam lambda,
                        MarginalForm form = MarginalForm::CoshProduct);

// Strict local maxima of u on grid_n uniform points of the support, with
// runs of equal values merged.
int mode_count(const StationaryDensity& density, int grid_n);

double argmax(const StationaryDensity& density, int grid_n);

struct CepVerdict {
  bool holds;
  double margin;  // |b| - sqrt(2 lambda)
};

// Certainty equivalence holds iff the two-point drift law b +- sqrt(2 lambda)
// stays strictly on one side of zero.
CepVerdict cep_classify(double drift, RiskParam lambda);

}  // namespace dmps
