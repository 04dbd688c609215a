// Autoregressive fine-scale prediction and comparison against oracle
// trajectories.
#pragma once

#include "fsfm/metrics.hpp"
#include "fsfm/resnet.hpp"

namespace fsfm {

// States x0, step(x0), step^2(x0), ..., n_steps applications. Throws
// NumericError with the step index if a state goes non-finite.
template <FlowModel Model>
std::vector<Vec> rollout(const Model& model, const Vec& x0, int n_steps) {
  if (n_steps < 0) throw ShapeError("rollout: negative step count");
  std::vector<Vec> traj;
  traj.reserve(static_cast<std::size_t>(n_steps) + 1);
  traj.push_back(x0);
  Mat x = x0;
  for (int k = 1; k <= n_steps; ++k) {
    x = flow_step(model, x);
    if (!x.allFinite())
      throw NumericError("rollout: non-finite state at step " + std::to_string(k));
    traj.push_back(x.col(0));
  }
  return traj;
}

struct RolloutResult {
  double fine_dt = 0.0;           // time between consecutive states
  std::vector<Vec> predicted;
  std::vector<Vec> reference;
  Vec errors;                     // per-step Euclidean norms

  double time(std::size_t k) const { return fine_dt * static_cast<double>(k); }
};

// Rolls the model out and aligns it with a reference trajectory produced by
// ref_fn(x0, n_steps) (the oracle sampled at the fine step).
template <FlowModel Model, class RefFn>
RolloutResult rollout_with_reference(const Model& model, const Vec& x0, int n_steps,
                                     double fine_dt, const RefFn& ref_fn) {
  RolloutResult result;
  result.fine_dt = fine_dt;
  result.predicted = rollout(model, x0, n_steps);
  result.reference = ref_fn(x0, n_steps);
  result.errors = pointwise_error(result.predicted, result.reference);
  return result;
}

}  // namespace fsfm
