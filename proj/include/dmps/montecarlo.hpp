#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dmps/process.hpp"
#include "dmps/stationary.hpp"

namespace dmps {

enum class Scheme { EulerMaruyama };

struct SimConfig {
  double dt = 1e-3;
  double horizon = 1.0;
  long n_paths = 1;
  std::uint64_t seed = 0;
  Scheme scheme = Scheme::EulerMaruyama;

  void validate() const;
  // Number of steps; the step is shrunk to horizon / steps() when dt does not
  // divide the horizon.
  long steps() const;
};

enum class Provenance { ExactMixture, IntegratedSde };

const char* to_string(Provenance p) noexcept;

struct SampleSet {
  std::vector<double> values;
  SimConfig config;
  Provenance provenance = Provenance::IntegratedSde;
};

struct SampleStats {
  double mean;
  double variance;  // unbiased
  double mean_standard_error;
};

// Accumulated over path index in order.
SampleStats sample_stats(const std::vector<double>& values);

// workers = 0 picks std::thread::hardware_concurrency(). Results never depend
// on the worker count.
SampleSet euler_maruyama(const DiffusionSpec& spec,
                         const std::optional<RealFn>& drift_override, double x0,
                         const SimConfig& cfg, unsigned workers = 0);

// Exact draw from the ballistic law: s * sqrt(2 lambda) t + sqrt(t) xi with a
// fair random sign s.
SampleSet exact_ballistic_sample(RiskParam lambda, double t, long n,
                                 std::uint64_t seed, unsigned workers = 0);

struct HistogramSpec {
  double lo = -5.0;
  double hi = 5.0;
  int bins = 50;
};

struct Histogram {
  HistogramSpec spec;
  std::vector<long> counts;
  long total = 0;
  long underflow = 0;
  long overflow = 0;

  double width() const { return (spec.hi - spec.lo) / spec.bins; }
  double center(int i) const { return spec.lo + (i + 0.5) * width(); }
  double density(int i) const {
    return static_cast<double>(counts[static_cast<std::size_t>(i)]) /
           (static_cast<double>(total) * width());
  }
};

Histogram make_histogram(const std::vector<double>& values, const HistogramSpec& spec);

// Terminal states of dX = [b(X) + c Bern] dt + sigma dW from X_0 = 0, with
// Bern = +-sqrt(2 lambda) drawn once per path. c = sigma for
// MarginalForm::BranchSum (the literal coupled system) and sigma^2 / 2 for
// MarginalForm::CoshProduct.
SampleSet simulate_coupled_samples(const DiffusionSpec& spec, RiskParam lambda,
                                   const SimConfig& cfg,
                                   MarginalForm form = MarginalForm::BranchSum,
                                   unsigned workers = 0);

Histogram simulate_coupled(const DiffusionSpec& spec, RiskParam lambda,
                           const SimConfig& cfg, const HistogramSpec& bins = {},
                           MarginalForm form = MarginalForm::BranchSum,
                           unsigned workers = 0);

// L1 distance between the histogram's density and a normalised density,
// both integrated over bins; mass outside the histogram range counts too.
double l1_distance(const Histogram& hist, const StationaryDensity& density);

// Local maxima of the bin counts (equal runs merged) whose prominence exceeds
// min_prominence_sigmas Poisson standard deviations of the peak count.
int histogram_mode_count(const Histogram& hist, double min_prominence_sigmas = 4.0);

// sup_x |F_n(x) - cdf(x)|.
double ks_distance(const SampleSet& samples, const RealFn& cdf);
double ks_distance(std::vector<double> values, const RealFn& cdf);

// sup_x |F_n(x) - G_m(x)|.
double ks_two_sample(std::vector<double> a, std::vector<double> b);

}  // namespace dmps
