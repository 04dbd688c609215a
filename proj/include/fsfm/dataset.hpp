// Observation datasets: M sequences of outer_steps+1 snapshots spaced obs_dt
// apart, generated by the reference solvers, stored in a binary format with
// bit-exact round trips.
#pragma once

#include "fsfm/integrators.hpp"
#include "fsfm/loss.hpp"
#include "fsfm/pde_systems.hpp"

#include <string>

namespace fsfm {

struct ObservationDataset {
  std::string system;        // generating system or preset name
  int dim = 0;               // snapshot length
  int outer_steps = 0;       // snapshots per sequence = outer_steps + 1
  double obs_dt = 0.0;       // coarse observation spacing
  std::uint64_t seed = 0;
  std::string descriptor;    // free-form domain / sampler description
  Mat data;                  // dim x (M * (outer_steps+1)), sequence-major

  std::size_t num_sequences() const {
    return data.cols() == 0 ? 0 : static_cast<std::size_t>(data.cols() / snaps());
  }
  int snaps() const { return outer_steps + 1; }

  Eigen::Ref<const Mat> sequence(std::size_t m) const {
    return data.middleCols(static_cast<Eigen::Index>(m) * snaps(), snaps());
  }
  Vec snapshot(std::size_t m, int r) const {
    return data.col(static_cast<Eigen::Index>(m) * snaps() + r);
  }

  void validate() const;
};

// Gathers the sequences at the given indices into column-batch form.
Batch make_batch(const ObservationDataset& ds, const std::vector<std::size_t>& indices);

// Integrates each seeded initial condition and keeps one window of
// outer_steps+1 snapshots starting at a seeded aligned offset in
// [0, total_time/obs_dt - outer_steps]. Deterministic for any worker count.
ObservationDataset generate_ode_dataset(const OdeSystem& sys,
                                        const std::function<Vec(Rng&)>& ic_sampler,
                                        std::size_t num_sequences, double obs_dt,
                                        double total_time, int outer_steps, std::uint64_t seed,
                                        const IntegratorConfig& cfg = {}, int workers = 1,
                                        const std::string& descriptor = "");

// One long trajectory from (1,1,1), then M windows drawn uniformly from it.
ObservationDataset generate_lorenz_chunks(double obs_dt, double total_time,
                                          std::size_t num_sequences, int outer_steps,
                                          std::uint64_t seed, const IntegratorConfig& cfg = {});

// Method-of-lines counterpart of generate_ode_dataset for flat nodal states.
ObservationDataset generate_pde_dataset(const std::function<void(const Vec&, Vec&)>& rhs,
                                        double stable_substep,
                                        const std::function<Vec(Rng&)>& ic_sampler,
                                        int state_len, std::size_t num_sequences, double obs_dt,
                                        double total_time, int outer_steps, std::uint64_t seed,
                                        int workers = 1, const std::string& name = "pde",
                                        const std::string& descriptor = "");

// FSDS1 container, little-endian doubles; save -> load -> save is
// byte-identical and truncated or oversized payloads are rejected.
void save_dataset(const std::string& path, const ObservationDataset& ds);
ObservationDataset load_dataset(const std::string& path);

// One row per snapshot: m, r, t, x1..xd.
void export_dataset_csv(const std::string& path, const ObservationDataset& ds);

}  // namespace fsfm
