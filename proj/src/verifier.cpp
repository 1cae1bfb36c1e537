#include "dmps/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dmps/error.hpp"

namespace dmps {
namespace {

// [P(lambda + h) - P(lambda - h)] / 2h at x. Right of the origin the
// difference is taken between survival functions so that it does not cancel
// against 1.
double cdf_difference_quotient(double lambda, double h, double t, double x) {
  const double s = std::sqrt(t);
  const double up = std::sqrt(2.0 * (lambda + h)) * t;
  const double down = std::sqrt(2.0 * (lambda - h)) * t;
  double diff = 0.0;
  if (x <= 0.0) {
    diff = 0.5 * (normal_cdf((x + up) / s) - normal_cdf((x + down) / s)) +
           0.5 * (normal_cdf((x - up) / s) - normal_cdf((x - down) / s));
  } else {
    diff = -0.5 * (normal_sf((x + up) / s) - normal_sf((x + down) / s)) -
           0.5 * (normal_sf((x - up) / s) - normal_sf((x - down) / s));
  }
  return diff / (2.0 * h);
}

void check_step(RiskParam lambda, const VerifyGrid& grid) {
  detail::require(lambda.value() > 0.0,
                  "integral conditions need lambda > 0 (central lambda difference)");
  detail::require(grid.lambda_step <= 0.5 * lambda.value(),
                  "VerifyGrid.lambda_step must lie in (0, lambda/2]");
}

QuadratureOptions panel_options(const VerifyGrid& grid) {
  QuadratureOptions opts;
  opts.abs_tol = grid.quad_tol;
  return opts;
}

}  // namespace

void VerifyGrid::validate() const {
  detail::require(std::isfinite(x_lo) && std::isfinite(x_hi) && x_lo < 0.0 &&
                      x_hi > 0.0,
                  "VerifyGrid: need x_lo < 0 < x_hi");
  detail::require(n_x >= 64 && n_x % 2 == 0, "VerifyGrid: n_x must be even and >= 64");
  detail::require(lambda_step > 0.0, "VerifyGrid: lambda_step must be > 0");
  detail::require(quad_tol > 0.0, "VerifyGrid: quad_tol must be > 0");
}

std::vector<double> VerifyGrid::points() const {
  return linspace(x_lo, x_hi, static_cast<std::size_t>(n_x) + 1);
}

VerifyGrid VerifyGrid::for_ballistic(RiskParam lambda, double t) {
  detail::require(t > 0.0, "VerifyGrid: t must be > 0");
  const double reach = lambda.rate() * t + 10.0 * std::sqrt(t);
  VerifyGrid grid;
  grid.x_lo = -reach;
  grid.x_hi = reach;
  grid.lambda_step = lambda.value() > 0.0 ? std::min(1e-4, lambda.value() / 10.0) : 1e-4;
  return grid;
}

VerifyGrid VerifyGrid::for_family(const EigenFamily& family, double t) {
  if (family.kind() == EigenKind::BallisticCosh) {
    return for_ballistic(family.lambda(), t);
  }
  VerifyGrid grid = for_ballistic(family.lambda(), t);
  grid.x_lo = -6.0;
  grid.x_hi = 6.0;
  return grid;
}

bool DmpsReport::passes(const DmpsTolerances& tol) const {
  return std::fabs(first_condition_residual) < tol.first_condition &&
         second_condition_min >= tol.phi_floor &&
         std::fabs(phi_left_end) < tol.phi_ends &&
         std::fabs(phi_right_end) < tol.phi_ends &&
         r_symmetry_residual < tol.r_symmetry && r_min >= tol.r_floor &&
         psi_antisymmetry_residual < tol.psi_antisymmetry &&
         curvature_min >= tol.curvature_floor;
}

double cdf_P(RiskParam lambda, double t, double x) {
  detail::require(t > 0.0, "cdf_P: t must be > 0");
  if (x == std::numeric_limits<double>::infinity()) return 1.0;
  if (x == -std::numeric_limits<double>::infinity()) return 0.0;
  const double s = std::sqrt(t);
  const double shift = lambda.rate() * t;
  return 0.5 * normal_cdf((x + shift) / s) + 0.5 * normal_cdf((x - shift) / s);
}

FirstConditionResult first_integral_condition(RiskParam lambda, double t,
                                              const VerifyGrid& grid) {
  detail::require(t > 0.0, "first_integral_condition: t must be > 0");
  grid.validate();
  check_step(lambda, grid);
  const double lam = lambda.value();
  const double h = grid.lambda_step;
  const auto opts = panel_options(grid);
  const auto points = grid.points();

  auto quotient = [&](double x) { return cdf_difference_quotient(lam, h, t, x); };
  const double residual = cumulative_integral(quotient, points, opts).back();

  const RiskParam up(lam + h);
  const RiskParam down(lam - h);
  auto first_moment = [&](RiskParam l) {
    auto integrand = [&](double x) { return x * ballistic_tpd(x, t, l); };
    return cumulative_integral(integrand, points, opts).back();
  };
  const double mean_difference = (first_moment(down) - first_moment(up)) / (2.0 * h);
  return {residual, mean_difference};
}

std::vector<double> phi_profile(RiskParam lambda, double t, const VerifyGrid& grid) {
  detail::require(t > 0.0, "phi_profile: t must be > 0");
  grid.validate();
  check_step(lambda, grid);
  const double lam = lambda.value();
  const double h = grid.lambda_step;
  auto quotient = [&](double x) { return cdf_difference_quotient(lam, h, t, x); };
  return cumulative_integral(quotient, grid.points(), panel_options(grid));
}

double second_integral_condition(RiskParam lambda, double t, double x,
                                 const VerifyGrid& grid) {
  detail::require(t > 0.0, "second_integral_condition: t must be > 0");
  grid.validate();
  check_step(lambda, grid);
  const double lam = lambda.value();
  const double h = grid.lambda_step;
  auto quotient = [&](double y) { return cdf_difference_quotient(lam, h, t, y); };
  const double upper = std::clamp(x, grid.x_lo, grid.x_hi);
  // Same panel layout as phi_profile, so both agree at grid points.
  std::vector<double> points;
  for (double p : grid.points()) {
    if (p < upper) points.push_back(p);
  }
  points.push_back(upper);
  return cumulative_integral(quotient, points, panel_options(grid)).back();
}

DmpsReport check_proposition1(const EigenFamily& family, double t,
                              const VerifyGrid& grid) {
  detail::require(t > 0.0, "check_proposition1: t must be > 0");
  grid.validate();
  const auto points = grid.points();
  const auto opts = panel_options(grid);

  DmpsReport report;
  report.lambda = family.lambda().value();
  report.t = t;

  double r_sym = 0.0;
  double r_min = std::numeric_limits<double>::infinity();
  double rho_min = std::numeric_limits<double>::infinity();
  for (double x : points) {
    const double r = family.R(x);
    r_sym = std::max(r_sym, std::fabs(r - family.R(-x)));
    r_min = std::min(r_min, r);
    rho_min = std::min(rho_min, r * family.base_tpd(x, t));
  }
  report.r_symmetry_residual = r_sym;
  report.r_min = r_min;
  report.curvature_min = rho_min;

  // Dual density Q = h q / Z on the truncated support; its lambda-derivative
  // is (R - c h) q / Z with c = int R q / Z.
  // h q and R q can reach e^{lambda t}; both are scaled by their grid maximum
  // so that quad_tol acts as a relative tolerance.
  double hq_max = 0.0;
  double rq_max = 0.0;
  for (double x : points) {
    const double q = family.base_tpd(x, t);
    hq_max = std::max(hq_max, std::fabs(family.h(x) * q));
    rq_max = std::max(rq_max, std::fabs(family.R(x) * q));
  }
  if (!(hq_max > 0.0) || !std::isfinite(hq_max) || !std::isfinite(rq_max)) {
    throw Error(ErrorKind::EvaluationFailure, "check_proposition1: h q is not finite and positive");
  }
  if (rq_max == 0.0) rq_max = 1.0;
  auto hq = [&](double x) { return family.h(x) * family.base_tpd(x, t) / hq_max; };
  auto rq = [&](double x) { return family.R(x) * family.base_tpd(x, t) / rq_max; };
  const double z = hq_max * cumulative_integral(hq, points, opts).back();
  const double c = rq_max * cumulative_integral(rq, points, opts).back() / z;
  auto dq = [&](double x) {
    return (family.R(x) - c * family.h(x)) * family.base_tpd(x, t) / z;
  };
  auto x_dq = [&](double x) { return x * dq(x); };
  const auto psi = cumulative_integral(dq, points, opts);
  const auto first_moment = cumulative_integral(x_dq, points, opts);

  // Psi is compared at mirrored grid points; the grid need not be symmetric,
  // so -x is re-integrated when it is not itself a grid point.
  const bool symmetric = std::fabs(grid.x_lo + grid.x_hi) <= 1e-12 * grid.x_hi;
  double psi_anti = 0.0;
  const std::size_t n = points.size();
  for (std::size_t i = 0; i < n; ++i) {
    double mirrored = 0.0;
    if (symmetric) {
      mirrored = psi[n - 1 - i];
    } else {
      const double target = -points[i];
      if (target <= grid.x_lo || target >= grid.x_hi) continue;
      mirrored = integrate(dq, grid.x_lo, target, opts);
    }
    psi_anti = std::max(psi_anti, std::fabs(psi[i] + mirrored));
  }
  report.psi_antisymmetry_residual = psi_anti;

  // By parts, Phi(x) = int_{x_lo}^x Psi = x Psi(x) - int_{x_lo}^x y dQ(y).
  double phi_min = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < n; ++i) {
    phi_min = std::min(phi_min, points[i] * psi[i] - first_moment[i]);
  }
  const double phi_end = grid.x_hi * psi.back() - first_moment.back();
  report.first_condition_residual = phi_end;
  report.mean_difference = -first_moment.back();
  report.second_condition_min = phi_min;
  report.phi_left_end = 0.0;
  report.phi_right_end = phi_end;
  return report;
}

DmpsReport verify_ballistic(RiskParam lambda, double t, const VerifyGrid& grid) {
  DmpsReport report = check_proposition1(EigenFamily::ballistic(lambda), t, grid);
  const auto first = first_integral_condition(lambda, t, grid);
  const auto phi = phi_profile(lambda, t, grid);
  report.first_condition_residual = first.residual;
  report.mean_difference = first.mean_difference;
  report.second_condition_min = *std::min_element(phi.begin(), phi.end());
  report.phi_left_end = phi.front();
  report.phi_right_end = phi.back();
  return report;
}

}  // namespace dmps
