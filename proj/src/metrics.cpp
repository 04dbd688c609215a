#include "fsfm/metrics.hpp"

#include <cmath>

namespace fsfm {

Vec pointwise_error(const std::vector<Vec>& pred, const std::vector<Vec>& ref) {
  if (pred.size() != ref.size())
    throw ShapeError("pointwise_error: trajectory lengths differ (" +
                     std::to_string(pred.size()) + " vs " + std::to_string(ref.size()) + ")");
  Vec err(pred.size());
  for (std::size_t k = 0; k < pred.size(); ++k) {
    if (pred[k].size() != ref[k].size()) throw ShapeError("pointwise_error: state dim mismatch");
    err[static_cast<Eigen::Index>(k)] = (pred[k] - ref[k]).norm();
  }
  return err;
}

Vec mean_error(const std::vector<Vec>& per_trajectory_errors) {
  if (per_trajectory_errors.empty()) throw ShapeError("mean_error: no trajectories");
  const Eigen::Index n = per_trajectory_errors.front().size();
  Vec mean = Vec::Zero(n);
  for (const Vec& e : per_trajectory_errors) {
    if (e.size() != n) throw ShapeError("mean_error: error vectors have unequal lengths");
    mean += e;
  }
  return mean / static_cast<double>(per_trajectory_errors.size());
}

Histogram histogram(const Vec& series, int bins, double lo, double hi) {
  if (bins < 1) throw ShapeError("histogram: need at least one bin");
  if (!(hi > lo)) throw ShapeError("histogram: empty range");
  if (series.size() == 0) throw ShapeError("histogram: empty series");
  Histogram h;
  h.lo = lo;
  h.hi = hi;
  const double width = (hi - lo) / bins;
  h.centers.resize(bins);
  for (int i = 0; i < bins; ++i) h.centers[i] = lo + (i + 0.5) * width;
  Eigen::VectorXi counts = Eigen::VectorXi::Zero(bins);
  for (Eigen::Index t = 0; t < series.size(); ++t) {
    const double x = series[t];
    if (x < lo || x > hi) continue;
    const int bin = std::min(bins - 1, static_cast<int>((x - lo) / width));
    counts[bin] += 1;
  }
  h.density = counts.cast<double>() / (static_cast<double>(series.size()) * width);
  return h;
}

Histogram histogram(const Vec& series, int bins) {
  const double lo = series.minCoeff();
  const double hi = series.maxCoeff();
  if (hi == lo)  // degenerate constant series: give it one representative bin width
    return histogram(series, bins, lo - 0.5, hi + 0.5);
  return histogram(series, bins, lo, hi);
}

double histogram_intersection(const Histogram& a, const Histogram& b) {
  if (a.centers.size() != b.centers.size() || a.lo != b.lo || a.hi != b.hi)
    throw ShapeError("histogram_intersection: histograms must share binning");
  return a.density.cwiseMin(b.density).sum() * a.bin_width();
}

Vec autocorrelation(const Vec& series, int max_lag) {
  const Eigen::Index n = series.size();
  if (max_lag < 0 || n <= max_lag)
    throw ShapeError("autocorrelation: series length must exceed max_lag");
  const double mean = series.mean();
  const Vec centered = series.array() - mean;
  const double denom = centered.squaredNorm();
  if (denom == 0) throw NumericError("autocorrelation: degenerate zero-variance series");
  Vec r(max_lag + 1);
  for (int lag = 0; lag <= max_lag; ++lag)
    r[lag] = centered.head(n - lag).dot(centered.tail(n - lag)) / denom;
  return r;
}

}  // namespace fsfm
