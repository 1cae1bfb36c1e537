#include "dmps/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

#include <boost/random/normal_distribution.hpp>

#include "dmps/error.hpp"
#include "dmps/quadrature.hpp"
#include "dmps/random.hpp"

namespace dmps {
namespace {

constexpr double kBlowup = 1e12;

// Runs fn(path) for every path in [0, n), split into contiguous blocks over
// the workers. Rethrows the failure of the lowest-indexed failing path so the
// reported error does not depend on scheduling either.
template <typename PathFn>
void for_each_path(long n, unsigned workers, PathFn&& fn) {
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<long>(workers, std::max(1L, n)));
  if (workers <= 1) {
    for (long i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::exception_ptr> errors(workers);
  std::vector<long> failed_at(workers, -1);
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const long block = (n + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const long begin = std::min(n, block * w);
    const long end = std::min(n, begin + block);
    pool.emplace_back([&, w, begin, end] {
      long i = begin;
      try {
        for (; i < end; ++i) fn(i);
      } catch (...) {
        errors[w] = std::current_exception();
        failed_at[w] = i;
      }
    });
  }
  for (auto& thread : pool) thread.join();
  for (unsigned w = 0; w < workers; ++w) {
    if (errors[w]) std::rethrow_exception(errors[w]);
  }
}

template <typename Drift>
double integrate_path(const Drift& drift, double sigma, double x0, double dt,
                      long steps, CounterRng& rng, long path) {
  boost::random::normal_distribution<double> normal;
  const double noise = sigma * std::sqrt(dt);
  double x = x0;
  for (long k = 0; k < steps; ++k) {
    x += drift(x) * dt + noise * normal(rng);
    if (!(std::fabs(x) <= kBlowup)) {
      throw Error(ErrorKind::NumericalBlowup,
                  "path " + std::to_string(path) + " left |x| <= 1e12 at step " +
                      std::to_string(k + 1));
    }
  }
  return x;
}

}  // namespace

void SimConfig::validate() const {
  detail::require(std::isfinite(dt) && dt > 0.0, "SimConfig: dt must be > 0");
  detail::require(std::isfinite(horizon) && horizon > 0.0,
                  "SimConfig: horizon must be > 0");
  detail::require(dt <= horizon * (1.0 + 1e-12), "SimConfig: dt must be <= horizon");
  detail::require(n_paths >= 1, "SimConfig: n_paths must be >= 1");
}

long SimConfig::steps() const {
  return std::max(1L, static_cast<long>(std::ceil(horizon / dt - 1e-9)));
}

const char* to_string(Provenance p) noexcept {
  return p == Provenance::ExactMixture ? "exact-mixture" : "integrated-sde";
}

SampleStats sample_stats(const std::vector<double>& values) {
  detail::require(values.size() >= 2, "sample_stats: need at least two samples");
  const double n = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / n;
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double variance = ss / (n - 1.0);
  return {mean, variance, std::sqrt(variance / n)};
}

SampleSet euler_maruyama(const DiffusionSpec& spec,
                         const std::optional<RealFn>& drift_override, double x0,
                         const SimConfig& cfg, unsigned workers) {
  cfg.validate();
  detail::require(std::isfinite(spec.sigma) && spec.sigma >= 0.0,
                  "euler_maruyama: sigma must be >= 0");
  const RealFn& drift = drift_override ? *drift_override : spec.drift;
  detail::require(static_cast<bool>(drift), "euler_maruyama: no drift given");

  const long steps = cfg.steps();
  const double dt = cfg.horizon / static_cast<double>(steps);
  SampleSet out{std::vector<double>(static_cast<std::size_t>(cfg.n_paths)), cfg,
                Provenance::IntegratedSde};
  for_each_path(cfg.n_paths, workers, [&](long path) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(path));
    out.values[static_cast<std::size_t>(path)] =
        integrate_path(drift, spec.sigma, x0, dt, steps, rng, path);
  });
  return out;
}

SampleSet exact_ballistic_sample(RiskParam lambda, double t, long n,
                                 std::uint64_t seed, unsigned workers) {
  detail::require(t > 0.0, "exact_ballistic_sample: t must be > 0");
  detail::require(n >= 1, "exact_ballistic_sample: n must be >= 1");
  SimConfig cfg;
  cfg.dt = t;
  cfg.horizon = t;
  cfg.n_paths = n;
  cfg.seed = seed;
  SampleSet out{std::vector<double>(static_cast<std::size_t>(n)), cfg,
                Provenance::ExactMixture};
  const double shift = lambda.rate() * t;
  const double scale = std::sqrt(t);
  for_each_path(n, workers, [&](long i) {
    CounterRng rng(seed, static_cast<std::uint64_t>(i));
    const double sign = (rng() >> 63) != 0 ? 1.0 : -1.0;
    boost::random::normal_distribution<double> normal;
    out.values[static_cast<std::size_t>(i)] = sign * shift + scale * normal(rng);
  });
  return out;
}

Histogram make_histogram(const std::vector<double>& values, const HistogramSpec& spec) {
  detail::require(spec.bins >= 1 && spec.hi > spec.lo, "Histogram: bad bin layout");
  Histogram hist{spec, std::vector<long>(static_cast<std::size_t>(spec.bins), 0), 0, 0, 0};
  const double width = hist.width();
  for (double v : values) {
    ++hist.total;
    if (v < spec.lo) {
      ++hist.underflow;
    } else if (v >= spec.hi) {
      ++hist.overflow;
    } else {
      const auto bin = std::min<long>(spec.bins - 1, static_cast<long>((v - spec.lo) / width));
      ++hist.counts[static_cast<std::size_t>(bin)];
    }
  }
  return hist;
}

SampleSet simulate_coupled_samples(const DiffusionSpec& spec, RiskParam lambda,
                                   const SimConfig& cfg, MarginalForm form,
                                   unsigned workers) {
  spec.validate();
  cfg.validate();
  const double coupling =
      form == MarginalForm::BranchSum ? spec.sigma : 0.5 * spec.sigma * spec.sigma;
  const double tilt = coupling * lambda.rate();
  const long steps = cfg.steps();
  const double dt = cfg.horizon / static_cast<double>(steps);
  SampleSet out{std::vector<double>(static_cast<std::size_t>(cfg.n_paths)), cfg,
                Provenance::IntegratedSde};
  for_each_path(cfg.n_paths, workers, [&](long path) {
    CounterRng rng(cfg.seed, static_cast<std::uint64_t>(path));
    const double shift = (rng() >> 63) != 0 ? tilt : -tilt;
    const auto& b = spec.drift;
    auto drift = [&b, shift](double x) { return b(x) + shift; };
    out.values[static_cast<std::size_t>(path)] =
        integrate_path(drift, spec.sigma, 0.0, dt, steps, rng, path);
  });
  return out;
}

Histogram simulate_coupled(const DiffusionSpec& spec, RiskParam lambda,
                           const SimConfig& cfg, const HistogramSpec& bins,
                           MarginalForm form, unsigned workers) {
  return make_histogram(simulate_coupled_samples(spec, lambda, cfg, form, workers).values,
                        bins);
}

double l1_distance(const Histogram& hist, const StationaryDensity& density) {
  QuadratureOptions opts;
  opts.abs_tol = 1e-12;
  const double total = static_cast<double>(hist.total);
  double inside_model = 0.0;
  double distance = 0.0;
  for (int i = 0; i < hist.spec.bins; ++i) {
    const double a = hist.spec.lo + i * hist.width();
    const double b = a + hist.width();
    const double lo = std::max(a, density.lo);
    const double hi = std::min(b, density.hi);
    const double model = hi > lo ? integrate(density, lo, hi, opts) : 0.0;
    inside_model += model;
    distance += std::fabs(static_cast<double>(hist.counts[static_cast<std::size_t>(i)]) / total - model);
  }
  const double outside_empirical = static_cast<double>(hist.underflow + hist.overflow) / total;
  distance += std::fabs(outside_empirical - std::max(0.0, 1.0 - inside_model));
  return distance;
}

int histogram_mode_count(const Histogram& hist, double min_prominence_sigmas) {
  const auto& c = hist.counts;
  const std::size_t n = c.size();
  int modes = 0;
  for (std::size_t i = 0; i < n; ++i) {
    // Only the left end of a run of equal counts is considered.
    if (i > 0 && c[i - 1] == c[i]) continue;
    std::size_t end = i;
    while (end + 1 < n && c[end + 1] == c[i]) ++end;
    const bool above_left = i == 0 || c[i] > c[i - 1];
    const bool above_right = end + 1 == n || c[i] > c[end + 1];
    if (!above_left || !above_right) continue;

    // Prominence: depth of the higher of the two saddles separating this peak
    // from higher ground; a side that reaches the edge does not constrain it.
    long left_min = c[i];
    bool left_higher = false;
    for (std::size_t j = i; j-- > 0;) {
      if (c[j] > c[i]) {
        left_higher = true;
        break;
      }
      left_min = std::min(left_min, c[j]);
    }
    long right_min = c[i];
    bool right_higher = false;
    for (std::size_t j = end + 1; j < n; ++j) {
      if (c[j] > c[i]) {
        right_higher = true;
        break;
      }
      right_min = std::min(right_min, c[j]);
    }
    long saddle = std::min(left_min, right_min);
    if (left_higher && right_higher) {
      saddle = std::max(left_min, right_min);
    } else if (left_higher) {
      saddle = left_min;
    } else if (right_higher) {
      saddle = right_min;
    }
    const double prominence = static_cast<double>(c[i] - saddle);
    if (prominence > min_prominence_sigmas * std::sqrt(static_cast<double>(c[i]))) ++modes;
  }
  return modes;
}

double ks_distance(const SampleSet& samples, const RealFn& cdf) {
  return ks_distance(samples.values, cdf);
}

double ks_distance(std::vector<double> values, const RealFn& cdf) {
  detail::require(!values.empty(), "ks_distance: no samples");
  std::sort(values.begin(), values.end());
  const double n = static_cast<double>(values.size());
  double d = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    const double f = cdf(values[i]);
    d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
  }
  return d;
}

double ks_two_sample(std::vector<double> a, std::vector<double> b) {
  detail::require(!a.empty() && !b.empty(), "ks_two_sample: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  return d;
}

}  // namespace dmps
