// Rollout error metrics and qualitative diagnostics.
#pragma once

#include "fsfm/core.hpp"

#include <vector>

namespace fsfm {

// Euclidean norm of pred - ref at every step.
Vec pointwise_error(const std::vector<Vec>& pred, const std::vector<Vec>& ref);

// Arithmetic mean across trajectories, per step. All error vectors must have
// equal length.
Vec mean_error(const std::vector<Vec>& per_trajectory_errors);

struct Histogram {
  Vec centers;
  Vec density;  // normalized so sum(density) * bin_width = in-range fraction
  double lo = 0, hi = 0;
  double bin_width() const { return (hi - lo) / centers.size(); }
};

// Density histogram over [lo, hi] with uniform bins. Values outside the range
// are counted toward the normalization but fall in no bin.
Histogram histogram(const Vec& series, int bins, double lo, double hi);
// Range taken from the series itself.
Histogram histogram(const Vec& series, int bins);

// Overlap sum(min(a, b)) * bin_width; 1 for identical full-coverage
// histograms. Both must share binning.
double histogram_intersection(const Histogram& a, const Histogram& b);

// r(tau) = sum (x_t - mean)(x_{t+tau} - mean) / sum (x_t - mean)^2,
// tau = 0..max_lag. Throws on zero-variance series.
Vec autocorrelation(const Vec& series, int max_lag);

}  // namespace fsfm
