#include "dmps/specialfn.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dmps/error.hpp"

namespace dmps {
namespace {

constexpr double kKummerThreshold = 35.0;

bool is_nonpositive_integer(double v) {
  return v <= 0.0 && std::nearbyint(v) == v;
}

bool converged(long double term, long double sum, const SeriesControl& ctrl) {
  const long double mag = std::fabs(term);
  if (mag < ctrl.abs_tol * std::max<long double>(1.0L, std::fabs(sum))) {
    return true;
  }
  return ctrl.rel_tol > 0.0 && mag < ctrl.rel_tol * std::fabs(sum);
}

long double sum_series(double a, double b, double z, const SeriesControl& ctrl) {
  long double term = 1.0L;
  long double sum = 1.0L;
  for (int n = 0; n < ctrl.max_terms; ++n) {
    const long double ratio =
        (a + n) / static_cast<long double>(b + n) * z / (n + 1.0L);
    term *= ratio;
    sum += term;
    if (term == 0.0L) return sum;  // terminating series
    // Only trust the stop test once the terms have started shrinking.
    const long double next_ratio =
        (a + n + 1) / static_cast<long double>(b + n + 1) * z / (n + 2.0L);
    if (std::fabs(next_ratio) < 1.0L && converged(term, sum, ctrl)) {
      return sum;
    }
  }
  throw Error(ErrorKind::NonConvergence,
              "hyp1f1 series did not converge within max_terms");
}

}  // namespace

void SeriesControl::validate() const {
  detail::require(max_terms >= 1, "SeriesControl.max_terms must be >= 1");
  detail::require(std::isfinite(abs_tol) && abs_tol >= 0.0,
                  "SeriesControl.abs_tol must be finite and >= 0");
  detail::require(std::isfinite(rel_tol) && rel_tol >= 0.0,
                  "SeriesControl.rel_tol must be finite and >= 0");
}

double hyp1f1(double a, double b, double z, const SeriesControl& ctrl) {
  ctrl.validate();
  detail::require(!is_nonpositive_integer(b),
                  "hyp1f1: b must not be zero or a negative integer");
  detail::require(std::isfinite(a) && std::isfinite(b) && std::isfinite(z),
                  "hyp1f1: arguments must be finite");
  if (z == 0.0 || a == 0.0) return 1.0;
  if (a == b) return std::exp(z);

  const double c = b - a;
  if (z > kKummerThreshold && is_nonpositive_integer(c)) {
    return static_cast<double>(std::exp(static_cast<long double>(z)) *
                               sum_series(c, b, -z, ctrl));
  }
  if (z < -1.0 && b > 0.0 && c >= 0.0) {
    return static_cast<double>(std::exp(static_cast<long double>(z)) *
                               sum_series(c, b, -z, ctrl));
  }
  return static_cast<double>(sum_series(a, b, z, ctrl));
}

double hyp1f1_da(double a, double b, double z, const SeriesControl& ctrl) {
  ctrl.validate();
  detail::require(!is_nonpositive_integer(b),
                  "hyp1f1_da: b must not be zero or a negative integer");
  detail::require(std::isfinite(a) && std::isfinite(b) && std::isfinite(z),
                  "hyp1f1_da: arguments must be finite");
  if (z == 0.0) return 0.0;

  // c_n = (a)_n * sum_{k<n} 1/(a+k) obeys c_{n+1} = (a+n) c_n + (a)_n,
  // which avoids dividing by a.
  long double pochhammer_a = a;  // (a)_1
  long double c = 1.0L;          // c_1
  long double weight = z / static_cast<long double>(b);  // z^n / ((b)_n n!)
  long double sum = c * weight;
  for (int n = 1; n < ctrl.max_terms; ++n) {
    c = (a + n) * c + pochhammer_a;
    pochhammer_a *= (a + n);
    weight *= z / ((b + n) * (n + 1.0L));
    const long double term = c * weight;
    sum += term;
    const long double growth = std::fabs(z / ((b + n + 1) * (n + 2.0L))) *
                               std::max<long double>(1.0L, std::fabs(a + n + 1));
    if (growth < 1.0L && converged(term, sum, ctrl)) {
      return static_cast<double>(sum);
    }
  }
  throw Error(ErrorKind::NonConvergence,
              "hyp1f1_da series did not converge within max_terms");
}

double digamma(double z) {
  detail::require(std::isfinite(z) && z > 0.0, "digamma: z must be > 0");
  double shift = 0.0;
  while (z < 8.0) {
    shift -= 1.0 / z;
    z += 1.0;
  }
  const double inv2 = 1.0 / (z * z);
  // Bernoulli-number tail: -sum B_{2k} / (2k z^{2k}), k = 1..7.
  const double tail =
      inv2 * (-1.0 / 12.0 +
      inv2 * (1.0 / 120.0 +
      inv2 * (-1.0 / 252.0 +
      inv2 * (1.0 / 240.0 +
      inv2 * (-1.0 / 132.0 +
      inv2 * (691.0 / 32760.0 +
      inv2 * (-1.0 / 12.0)))))));
  return shift + std::log(z) - 0.5 / z + tail;
}

double gauss_pdf(double x, double mean, double var) {
  detail::require(var > 0.0, "gauss_pdf: variance must be > 0");
  const double d = x - mean;
  return std::exp(-d * d / (2.0 * var)) /
         std::sqrt(2.0 * std::numbers::pi * var);
}

double normal_cdf(double x) {
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double normal_sf(double x) {
  return 0.5 * std::erfc(x / std::numbers::sqrt2);
}

double log_cosh(double x) {
  const double ax = std::fabs(x);
  return ax + std::log1p(std::exp(-2.0 * ax)) - std::numbers::ln2;
}

}  // namespace dmps
