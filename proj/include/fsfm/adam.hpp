// Adam with bias correction, operating on the flat parameter blocks any flow
// model exposes.
#pragma once

#include "fsfm/resnet.hpp"

namespace fsfm {

struct AdamConfig {
  double learning_rate = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// First/second moment accumulators, shaped like the model they update.
template <FlowModel Model>
struct AdamState {
  Model first_moment;
  Model second_moment;
  long long step_count = 0;

  static AdamState for_model(const Model& m) {
    return AdamState{zeros_like(m), zeros_like(m), 0};
  }
};

template <FlowModel Model>
void adam_step(Model& params, const Model& grads, AdamState<Model>& state,
               const AdamConfig& cfg) {
  state.step_count += 1;
  const double c1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(state.step_count));
  const double c2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(state.step_count));
  auto pb = params.param_blocks();
  auto gb = grads.param_blocks();
  auto mb = state.first_moment.param_blocks();
  auto vb = state.second_moment.param_blocks();
  for (std::size_t i = 0; i < pb.size(); ++i) {
    auto g = gb[i].array();
    mb[i].array() = cfg.beta1 * mb[i].array() + (1.0 - cfg.beta1) * g;
    vb[i].array() = cfg.beta2 * vb[i].array() + (1.0 - cfg.beta2) * g.square();
    pb[i].array() -=
        cfg.learning_rate * (mb[i].array() / c1) / ((vb[i].array() / c2).sqrt() + cfg.eps);
  }
}

}  // namespace fsfm
