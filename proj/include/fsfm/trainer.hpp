// Mini-batch training loop: seeded shuffling, Adam updates, loss history.
#pragma once

#include "fsfm/adam.hpp"
#include "fsfm/dataset.hpp"

namespace fsfm {

struct TrainConfig {
  int inner_steps = 1;   // model compositions between consecutive observations
  int outer_steps = 1;   // observed steps per sequence; must match the dataset
  double learning_rate = 1e-3;
  long long epochs = 10000;
  int batch_size = 50;
  double adam_beta1 = 0.9;
  double adam_beta2 = 0.999;
  double adam_eps = 1e-8;
  std::uint64_t seed = 0;
  long long checkpoint_every = 0;  // epochs between checkpoint callbacks; 0 = off

  AdamConfig adam() const { return {learning_rate, adam_beta1, adam_beta2, adam_eps}; }
};

struct TrainCallbacks {
  std::function<void(long long epoch, double mean_loss)> on_epoch;
  std::function<void(long long epoch)> on_checkpoint;
};

// Raised when a batch loss goes non-finite; carries the failing location.
struct TrainingDiverged : NumericError {
  TrainingDiverged(long long epoch, std::size_t batch, double loss)
      : NumericError("training diverged: non-finite loss " + std::to_string(loss) +
                     " at epoch " + std::to_string(epoch) + ", batch " + std::to_string(batch)),
        epoch(epoch),
        batch(batch),
        loss(loss) {}
  long long epoch;
  std::size_t batch;
  double loss;
};

namespace detail {

// Fisher-Yates with our own index draws; bit-reproducible everywhere.
inline void shuffle_indices(std::vector<std::size_t>& idx, Rng& rng) {
  for (std::size_t i = idx.size(); i > 1; --i) std::swap(idx[i - 1], idx[rng.index(i)]);
}

}  // namespace detail

// Trains in place and returns the per-epoch mean loss history. Each epoch
// reshuffles the sample order (seeded), partitions it into batches keeping
// the last partial one, and applies one Adam update per batch. Deterministic
// given the seed.
template <FlowModel Model>
std::vector<double> train(Model& model, const ObservationDataset& ds, const TrainConfig& cfg,
                          const TrainCallbacks& callbacks = {}) {
  ds.validate();
  const std::size_t m_total = ds.num_sequences();
  if (m_total == 0) throw ShapeError("train: empty dataset");
  if (cfg.outer_steps != ds.outer_steps)
    throw ShapeError("train: config outer_steps " + std::to_string(cfg.outer_steps) +
                     " does not match dataset " + std::to_string(ds.outer_steps));
  if (cfg.inner_steps < 1) throw ShapeError("train: inner_steps must be >= 1");
  if (cfg.batch_size < 1 || static_cast<std::size_t>(cfg.batch_size) > m_total)
    throw ShapeError("train: batch_size must be in [1, num_sequences]");
  if (ds.dim != flow_dim(model)) throw ShapeError("train: dataset/model dim mismatch");

  Rng rng(cfg.seed);
  auto adam_state = AdamState<Model>::for_model(model);
  Model grads = zeros_like(model);
  const AdamConfig adam_cfg = cfg.adam();

  std::vector<std::size_t> order(m_total);
  for (std::size_t i = 0; i < m_total; ++i) order[i] = i;

  std::vector<double> history;
  history.reserve(static_cast<std::size_t>(std::max<long long>(cfg.epochs, 0)));
  for (long long epoch = 0; epoch < cfg.epochs; ++epoch) {
    detail::shuffle_indices(order, rng);
    double loss_sum = 0;
    std::size_t batch_index = 0;
    for (std::size_t start = 0; start < m_total; start += cfg.batch_size, ++batch_index) {
      const std::size_t count = std::min<std::size_t>(cfg.batch_size, m_total - start);
      const std::vector<std::size_t> batch_ids(order.begin() + start,
                                               order.begin() + start + count);
      const Batch batch = make_batch(ds, batch_ids);
      const double loss = loss_gradient(model, batch, cfg.inner_steps, grads);
      if (!std::isfinite(loss)) throw TrainingDiverged(epoch, batch_index, loss);
      adam_step(model, grads, adam_state, adam_cfg);
      loss_sum += loss * static_cast<double>(count);
    }
    const double mean_loss = loss_sum / static_cast<double>(m_total);
    history.push_back(mean_loss);
    if (callbacks.on_epoch) callbacks.on_epoch(epoch, mean_loss);
    if (cfg.checkpoint_every > 0 && (epoch + 1) % cfg.checkpoint_every == 0 &&
        callbacks.on_checkpoint)
      callbacks.on_checkpoint(epoch);
  }
  return history;
}

}  // namespace fsfm
