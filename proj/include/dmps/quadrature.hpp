#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "dmps/error.hpp"

namespace dmps {

struct QuadratureOptions {
  double abs_tol = 1e-10;
  int min_depth = 5;
  int max_depth = 48;
  long max_evaluations = 20'000'000;
};

namespace detail {

template <typename F>
class SimpsonIntegrator {
 public:
  SimpsonIntegrator(F& f, const QuadratureOptions& opts) : f_(f), opts_(opts) {}

  double run(double a, double b) {
    const double fa = eval(a);
    const double fm = eval(0.5 * (a + b));
    const double fb = eval(b);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return recurse(a, b, fa, fm, fb, whole, opts_.abs_tol, 0);
  }

 private:
  double eval(double x) {
    if (++evaluations_ > opts_.max_evaluations) {
      throw Error(ErrorKind::QuadratureFailure,
                  "adaptive Simpson exceeded its evaluation budget");
    }
    return f_(x);
  }

  double recurse(double a, double b, double fa, double fm, double fb,
                 double whole, double tol, int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = eval(lm);
    const double frm = eval(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double delta = left + right - whole;
    if (depth >= opts_.min_depth && std::fabs(delta) <= 15.0 * tol) {
      return left + right + delta / 15.0;
    }
    if (depth >= opts_.max_depth) {
      throw Error(ErrorKind::QuadratureFailure,
                  "adaptive Simpson exceeded its refinement depth");
    }
    return recurse(a, m, fa, flm, fm, left, 0.5 * tol, depth + 1) +
           recurse(m, b, fm, frm, fb, right, 0.5 * tol, depth + 1);
  }

  F& f_;
  const QuadratureOptions& opts_;
  long evaluations_ = 0;
};

}  // namespace detail

// Adaptive Simpson quadrature of f over [a, b] to an absolute tolerance.
template <typename F>
double integrate(F&& f, double a, double b, const QuadratureOptions& opts = {}) {
  if (a == b) return 0.0;
  detail::SimpsonIntegrator<std::remove_reference_t<F>> simpson(f, opts);
  return simpson.run(a, b);
}

// Running integrals of f from grid[0] to every grid point; each panel
// [grid[i-1], grid[i]] is integrated separately to opts.abs_tol and the
// panels are summed left to right.
template <typename F>
std::vector<double> cumulative_integral(F&& f, std::span<const double> grid,
                                        const QuadratureOptions& opts = {}) {
  std::vector<double> out(grid.size(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 1; i < grid.size(); ++i) {
    acc += integrate(f, grid[i - 1], grid[i], opts);
    out[i] = acc;
  }
  return out;
}

inline std::vector<double> linspace(double lo, double hi, std::size_t n) {
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double step = (hi - lo) / static_cast<double>(n - 1);
  for (std::size_t i = 0; i < n; ++i) out[i] = lo + step * static_cast<double>(i);
  out[n - 1] = hi;
  return out;
}

}  // namespace dmps
