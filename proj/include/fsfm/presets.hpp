// The six built-in experiment configurations and factories that wire systems,
// samplers, models and datasets together.
#pragma once

#include "fsfm/dataset.hpp"
#include "fsfm/model_io.hpp"
#include "fsfm/trainer.hpp"

#include <array>

namespace fsfm {

enum class PresetKind { OdeBox, LorenzChunks, Pde1d, Pde2d };

struct ExperimentPreset {
  std::string name;
  PresetKind kind = PresetKind::OdeBox;
  int dim = 0;                // model state length
  double obs_dt = 0.0;        // observation spacing
  double total_time = 0.0;    // generated trajectory length
  std::size_t num_sequences = 0;
  int inner_steps = 1;        // model compositions per observation gap
  int outer_steps = 1;        // observed steps per training sequence
  std::vector<int> hidden;    // residual net hidden widths (ODE presets)
  int pde_channels = 0;
  int pde_channel_hidden = 0;
  int pde_assembly_hidden = 0;
  double learning_rate = 1e-3;
  long long epochs = 10000;
  int batch_size = 50;
  std::vector<std::array<double, 2>> domain;  // IC sampling box (ODE presets)
  double predict_time = 0.0;  // default prediction horizon
  Grid1D grid1d{};
  Grid2D grid2d{};
  int components = 1;

  double fine_dt() const { return obs_dt / inner_steps; }
  bool is_pde() const { return kind == PresetKind::Pde1d || kind == PresetKind::Pde2d; }

  TrainConfig train_config(std::uint64_t seed) const {
    TrainConfig cfg;
    cfg.inner_steps = inner_steps;
    cfg.outer_steps = outer_steps;
    cfg.learning_rate = learning_rate;
    cfg.epochs = epochs;
    cfg.batch_size = batch_size;
    cfg.seed = seed;
    return cfg;
  }
};

const ExperimentPreset& preset(const std::string& name);  // throws ShapeError if unknown
const std::vector<std::string>& preset_names();

// scale in (0, 1] multiplies sequence count and epochs, nothing else.
ExperimentPreset scaled(const ExperimentPreset& p, double scale);

OdeSystem make_ode_system(const ExperimentPreset& p);
std::function<Vec(Rng&)> make_ic_sampler(const ExperimentPreset& p);

Mlp<double> make_ode_model(const ExperimentPreset& p, std::uint64_t seed);
PdeFlowMap<double> make_pde_model(const ExperimentPreset& p, std::uint64_t seed);
PdeModelMeta pde_meta(const ExperimentPreset& p);

ObservationDataset generate_preset_dataset(const ExperimentPreset& p, std::uint64_t seed,
                                           int workers = 1);

// Named example initial condition for prediction demos.
Vec demo_initial_condition(const ExperimentPreset& p);

// Oracle trajectory sampled at fine_dt, aligned with model rollouts.
std::vector<Vec> oracle_reference(const ExperimentPreset& p, const Vec& x0, int n_steps,
                                  double fine_dt);

}  // namespace fsfm
