// Recurrent training loss: one fine-scale rollout per sequence, penalized at
// the observation times only.
#pragma once

#include "fsfm/resnet.hpp"

namespace fsfm {

// A mini-batch of observed sequences in column form. x0 holds the first
// snapshot of each sequence; targets[r-1] the snapshot r coarse steps later.
struct Batch {
  Mat x0;                    // dim x batch
  std::vector<Mat> targets;  // outer_steps entries, each dim x batch

  int outer_steps() const { return static_cast<int>(targets.size()); }
  Eigen::Index size() const { return x0.cols(); }
};

namespace detail {

template <class Model>
void check_batch(const Model& model, const Batch& batch, int inner_steps) {
  if (inner_steps < 1) throw ShapeError("recurrent loss: inner_steps must be >= 1");
  if (batch.targets.empty()) throw ShapeError("recurrent loss: batch has no target snapshots");
  if (batch.x0.rows() != flow_dim(model))
    throw ShapeError("recurrent loss: batch dim " + std::to_string(batch.x0.rows()) +
                     " does not match model dim " + std::to_string(flow_dim(model)));
  for (const auto& t : batch.targets)
    if (t.rows() != batch.x0.rows() || t.cols() != batch.x0.cols())
      throw ShapeError("recurrent loss: ragged batch, all snapshots must share shape");
}

}  // namespace detail

// Mean over the batch of the summed squared residuals at the observation
// times. The rollout from x0 runs once for outer_steps * inner_steps fine
// steps and is sampled every inner_steps of them; it is never restarted from
// data at intermediate observations.
template <FlowModel Model>
double recurrent_loss(const Model& model, const Batch& batch, int inner_steps) {
  detail::check_batch(model, batch, inner_steps);
  Mat x = batch.x0;
  double total = 0;
  const int k = batch.outer_steps() * inner_steps;
  for (int step = 1; step <= k; ++step) {
    x = flow_step(model, x);
    if (step % inner_steps == 0) total += (x - batch.targets[step / inner_steps - 1]).squaredNorm();
  }
  return total / static_cast<double>(batch.size());
}

// Loss and its exact gradient, one tape per batch covering all
// outer_steps * inner_steps residual steps with cotangent injections at the
// observation times. Returns the loss value.
template <FlowModel Model>
double loss_gradient(const Model& model, const Batch& batch, int inner_steps, Model& grads) {
  detail::check_batch(model, batch, inner_steps);
  const int r_out = batch.outer_steps();
  const int k = r_out * inner_steps;
  const double inv_batch = 1.0 / static_cast<double>(batch.size());
  for (auto& block : grads.param_blocks()) block.setZero();

  CompositionTape<Model> tape;
  tape.steps.resize(k);
  std::vector<Mat> residuals(r_out);
  Mat x = batch.x0;
  double total = 0;
  for (int step = 1; step <= k; ++step) {
    x = flow_step_cached(model, x, tape.steps[step - 1]);
    if (step % inner_steps == 0) {
      Mat& res = residuals[step / inner_steps - 1];
      res = x - batch.targets[step / inner_steps - 1];
      total += res.squaredNorm();
    }
  }

  Mat g = Mat::Zero(x.rows(), x.cols());
  for (int step = k; step >= 1; --step) {
    if (step % inner_steps == 0) g += 2.0 * residuals[step / inner_steps - 1];
    g = flow_step_backward(model, tape.steps[step - 1], g, grads);
  }
  param_scale(grads, inv_batch);
  return total * inv_batch;
}

}  // namespace fsfm
