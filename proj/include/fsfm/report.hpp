// Two-seed training comparison: same data and configuration, different seeds.
// Reports both loss histories and how far apart the two learned fine-scale
// trajectories drift; whether they diverge is an observation, not an
// assertion.
#pragma once

#include "fsfm/presets.hpp"

namespace fsfm {

struct TwoSeedReport {
  std::uint64_t seed_a = 0, seed_b = 0;
  std::vector<double> loss_history_a;
  std::vector<double> loss_history_b;
  double final_loss_a = 0, final_loss_b = 0;
  double fine_dt = 0;
  Vec distance;  // per fine-step Euclidean distance between the two rollouts
  double max_distance = 0;
  Vec test_ic;
};

TwoSeedReport two_seed_divergence_report(const ExperimentPreset& p,
                                         std::array<std::uint64_t, 2> train_seeds,
                                         std::uint64_t data_seed, const Vec& test_ic,
                                         double horizon, int workers = 1);

// loss_a.csv, loss_b.csv, distance.csv and report.txt under dir.
void write_two_seed_report(const std::string& dir, const TwoSeedReport& report);

}  // namespace fsfm
