#pragma once

// Scalar special functions used by the eigenfunction families and the
// Gaussian / log-normal densities. Everything here is pure.

namespace dmps {

struct SeriesControl {
  int max_terms = 500;
  double abs_tol = 1e-15;  // |term| < abs_tol * max(1, |partial sum|)
  double rel_tol = 0.0;    // optional extra stop: |term| < rel_tol * |sum|

  void validate() const;
};

// Kummer's confluent hypergeometric function 1F1(a; b; z).
//
// Direct summation is carried in long double. For z > 35 the Kummer transform
// e^z 1F1(b-a; b; -z) is used when it terminates (b-a a non-positive
// integer); otherwise the positive-term series is summed directly. For
// z < -1 with b > 0 and b-a >= 0 the transform turns an alternating series
// into a positive one.
double hyp1f1(double a, double b, double z, const SeriesControl& ctrl = {});

// d/da 1F1(a; b; z), summed as sum_n (a)_n [psi(a+n) - psi(a)] z^n / ((b)_n n!)
// with the digamma difference replaced by its finite sum
// sum_{k=0}^{n-1} 1/(a+k). Well defined at a = 0.
double hyp1f1_da(double a, double b, double z, const SeriesControl& ctrl = {});

// Digamma function for z > 0: upward recurrence to z >= 8, then the
// asymptotic expansion.
double digamma(double z);

double gauss_pdf(double x, double mean, double var);

// Standard normal CDF and survival function (both accurate in their tails).
double normal_cdf(double x);
double normal_sf(double x);

// log(cosh(x)) without overflow.
double log_cosh(double x);

}  // namespace dmps
