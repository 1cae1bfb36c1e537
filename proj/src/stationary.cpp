#include "dmps/stationary.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>
#include <vector>

#include "dmps/error.hpp"
#include "dmps/quadrature.hpp"

namespace dmps {
namespace {

const double kTailLog = std::log(1e-16);
constexpr double kMaxReach = 1e6;

struct Support {
  double lo;
  double hi;
  double log_max;
};

double bisect_tail(const RealFn& log_u, double inner, double outer, double level) {
  for (int i = 0; i < 200 && std::fabs(outer - inner) > 1e-12 * std::max(1.0, std::fabs(outer)); ++i) {
    const double mid = 0.5 * (inner + outer);
    (log_u(mid) > level ? inner : outer) = mid;
  }
  return outer;
}

// Bracket the region where log_u is within log(1e-16) of its maximum.
Support find_support(const RealFn& log_u) {
  for (double reach = 1.0; reach <= kMaxReach; reach *= 2.0) {
    const auto xs = linspace(-reach, reach, 801);
    double log_max = -std::numeric_limits<double>::infinity();
    double x_max = 0.0;
    for (double x : xs) {
      const double v = log_u(x);
      if (v > log_max) {
        log_max = v;
        x_max = x;
      }
    }
    const double level = log_max + kTailLog;
    if (log_u(-reach) < level && log_u(reach) < level) {
      return {bisect_tail(log_u, x_max, -reach, level),
              bisect_tail(log_u, x_max, reach, level), log_max};
    }
  }
  throw Error(ErrorKind::NotNormalizable,
              "stationary density does not decay: drift is not globally attracting");
}

RealFn require_antiderivative(const DiffusionSpec& spec) {
  spec.validate();
  if (!spec.drift_antiderivative) {
    throw Error(ErrorKind::InvalidParameter,
                "stationary density needs the drift antiderivative B(x)");
  }
  return *spec.drift_antiderivative;
}

StationaryDensity normalise(RealFn log_u, const Support& support) {
  RealFn u = [log_u = std::move(log_u), shift = support.log_max](double x) {
    return std::exp(log_u(x) - shift);
  };
  // The tail test on the declared support.
  const double edge = std::max(u(support.lo), u(support.hi));
  if (edge > 1e-12) {
    throw Error(ErrorKind::NotNormalizable,
                "stationary density is not negligible at its support bounds");
  }
  QuadratureOptions opts;
  opts.abs_tol = 1e-13;
  const auto points = linspace(support.lo, support.hi, 257);
  const double mass = cumulative_integral(u, points, opts).back();
  return StationaryDensity{std::move(u), 1.0 / mass, support.lo, support.hi};
}

double slope_at_origin(const DiffusionSpec& spec) {
  constexpr double step = 1e-6;
  return (spec.drift(step) - spec.drift(-step)) / (2.0 * step);
}

}  // namespace

StationaryDensity stationary_wgn(const DiffusionSpec& spec) {
  const RealFn B = require_antiderivative(spec);
  const double scale = 2.0 / (spec.sigma * spec.sigma);
  RealFn log_u = [B, scale](double x) { return scale * B(x); };
  const Support support = find_support(log_u);
  return normalise(std::move(log_u), support);
}

StationaryDensity stationary_ballistic_marginal(const DiffusionSpec& spec,
                                                RiskParam lambda,
                                                MarginalForm form) {
  const RealFn B = require_antiderivative(spec);
  const double scale = 2.0 / (spec.sigma * spec.sigma);
  const double k = lambda.rate();

  if (form == MarginalForm::CoshProduct) {
    // Each exponential branch must be attracting on its own.
    for (double sign : {1.0, -1.0}) {
      find_support([B, scale, k, sign](double x) { return scale * B(x) + sign * k * x; });
    }
    RealFn log_u = [B, scale, k](double x) { return scale * B(x) + log_cosh(k * x); };
    const Support support = find_support(log_u);
    return normalise(std::move(log_u), support);
  }

  const double tilt = 2.0 * k / spec.sigma;
  std::vector<StationaryDensity> branches;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (double sign : {1.0, -1.0}) {
    RealFn log_u = [B, scale, tilt, sign](double x) {
      return scale * B(x) + sign * tilt * x;
    };
    const Support support = find_support(log_u);
    branches.push_back(normalise(std::move(log_u), support));
    lo = std::min(lo, support.lo);
    hi = std::max(hi, support.hi);
  }
  RealFn u = [plus = branches[0], minus = branches[1]](double x) {
    return 0.5 * (plus(x) + minus(x));
  };
  QuadratureOptions opts;
  opts.abs_tol = 1e-13;
  const double mass = cumulative_integral(u, linspace(lo, hi, 257), opts).back();
  return StationaryDensity{std::move(u), 1.0 / mass, lo, hi};
}

double curvature_origin(const DiffusionSpec& spec, RiskParam lambda,
                        MarginalForm form) {
  detail::require(spec.antisymmetric_drift,
                  "curvature_origin: drift must be flagged antisymmetric");
  spec.validate();
  const double sigma2 = spec.sigma * spec.sigma;
  const double base = 2.0 / sigma2 * slope_at_origin(spec);
  if (form == MarginalForm::CoshProduct) return base + 2.0 * lambda.value();
  return base + 8.0 * lambda.value() / sigma2;
}

int mode_count(const StationaryDensity& density, int grid_n) {
  detail::require(grid_n >= 256, "mode_count: grid_n must be >= 256");
  const auto xs = linspace(density.lo, density.hi, static_cast<std::size_t>(grid_n));
  std::vector<double> runs;
  for (double x : xs) {
    const double v = density.unnormalized(x);
    if (runs.empty() || runs.back() != v) runs.push_back(v);
  }
  int modes = 0;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const bool above_left = i == 0 || runs[i] > runs[i - 1];
    const bool above_right = i + 1 == runs.size() || runs[i] > runs[i + 1];
    if (above_left && above_right && runs.size() > 1) ++modes;
  }
  return modes;
}

double argmax(const StationaryDensity& density, int grid_n) {
  detail::require(grid_n >= 2, "argmax: grid_n must be >= 2");
  const auto xs = linspace(density.lo, density.hi, static_cast<std::size_t>(grid_n));
  double best_x = xs.front();
  double best = -1.0;
  for (double x : xs) {
    const double v = density.unnormalized(x);
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  return best_x;
}

CepVerdict cep_classify(double drift, RiskParam lambda) {
  const double margin = std::fabs(drift) - lambda.rate();
  return {margin > 0.0, margin};
}

}  // namespace dmps
