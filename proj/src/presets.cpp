#include "fsfm/presets.hpp"

#include <cmath>

namespace fsfm {

namespace {

std::vector<ExperimentPreset> build_presets() {
  std::vector<ExperimentPreset> all;

  {
    ExperimentPreset p;
    p.name = "vdp";
    p.kind = PresetKind::OdeBox;
    p.dim = 2;
    p.obs_dt = 2.0;
    p.total_time = 20.0;
    p.num_sequences = 10000;
    p.inner_steps = 10;
    p.outer_steps = 1;
    p.hidden = {20, 20, 20};
    p.domain = {{-2.0, 2.0}, {-1.5, 1.5}};
    p.predict_time = 200.0;
    all.push_back(p);
  }
  {
    ExperimentPreset p;
    p.name = "pendulum";
    p.kind = PresetKind::OdeBox;
    p.dim = 2;
    p.obs_dt = 1.0;
    p.total_time = 10.0;
    p.num_sequences = 10000;
    p.inner_steps = 10;
    p.outer_steps = 1;
    p.hidden = {20, 20, 20};
    p.domain = {{-M_PI / 2, M_PI / 2}, {-M_PI, M_PI}};
    p.predict_time = 10.0;
    all.push_back(p);
  }
  {
    ExperimentPreset p;
    p.name = "dae";
    p.kind = PresetKind::OdeBox;
    p.dim = 2;
    p.obs_dt = 5e-8;
    p.total_time = 1e-6;
    p.num_sequences = 10000;
    p.inner_steps = 10;
    p.outer_steps = 1;
    p.hidden = {20, 20, 20};
    p.domain = {{-2.0, 2.0}, {-0.2, 0.2}};
    p.predict_time = 1e-6;
    all.push_back(p);
  }
  {
    ExperimentPreset p;
    p.name = "lorenz";
    p.kind = PresetKind::LorenzChunks;
    p.dim = 3;
    p.obs_dt = 0.1;
    p.total_time = 10000.0;
    p.num_sequences = 10000;
    p.inner_steps = 10;
    p.outer_steps = 1;
    p.hidden = {20, 20, 20};
    p.predict_time = 100.0;
    all.push_back(p);
  }
  {
    ExperimentPreset p;
    p.name = "fhn";
    p.kind = PresetKind::Pde1d;
    p.grid1d = {50, 0.0, 5.0};
    p.components = 2;
    p.dim = 100;
    p.obs_dt = 0.25;
    p.total_time = 50.0;
    p.num_sequences = 10000;
    p.inner_steps = 5;
    p.outer_steps = 3;
    p.pde_channels = 5;
    p.pde_channel_hidden = 100;
    p.pde_assembly_hidden = 5;
    p.predict_time = 50.0;
    all.push_back(p);
  }
  {
    ExperimentPreset p;
    p.name = "advdiff2d";
    p.kind = PresetKind::Pde2d;
    p.grid2d = {16, 16, -1.0, 1.0, -1.0, 1.0};
    p.components = 1;
    p.dim = 256;
    p.obs_dt = 0.01;
    p.total_time = 0.1;
    p.num_sequences = 100000;
    p.inner_steps = 5;
    p.outer_steps = 1;
    p.pde_channels = 3;
    p.pde_channel_hidden = 256;
    p.pde_assembly_hidden = 3;
    p.predict_time = 4.0;
    all.push_back(p);
  }
  return all;
}

const std::vector<ExperimentPreset>& all_presets() {
  static const std::vector<ExperimentPreset> presets = build_presets();
  return presets;
}

FhnSystem fhn_for(const ExperimentPreset& p) {
  FhnSystem sys;
  sys.grid = p.grid1d;
  return sys;
}

AdvDiff2dSystem advdiff_for(const ExperimentPreset& p) {
  AdvDiff2dSystem sys;
  sys.grid = p.grid2d;
  return sys;
}

std::string box_descriptor(const std::vector<std::array<double, 2>>& box) {
  std::string d = "uniform box";
  for (const auto& [lo, hi] : box)
    d += " [" + std::to_string(lo) + "," + std::to_string(hi) + "]";
  return d;
}

}  // namespace

const ExperimentPreset& preset(const std::string& name) {
  for (const auto& p : all_presets())
    if (p.name == name) return p;
  std::string known;
  for (const auto& p : all_presets()) known += (known.empty() ? "" : ", ") + p.name;
  throw ShapeError("unknown preset '" + name + "' (known: " + known + ")");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> n;
    for (const auto& p : all_presets()) n.push_back(p.name);
    return n;
  }();
  return names;
}

ExperimentPreset scaled(const ExperimentPreset& p, double scale) {
  if (!(scale > 0.0) || scale > 1.0) throw ShapeError("scale must be in (0, 1]");
  ExperimentPreset s = p;
  s.num_sequences = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(static_cast<double>(p.num_sequences) * scale)));
  s.epochs = std::max<long long>(
      1, std::llround(static_cast<double>(p.epochs) * scale));
  return s;
}

OdeSystem make_ode_system(const ExperimentPreset& p) {
  if (p.name == "vdp") return vdp_system();
  if (p.name == "pendulum") return pendulum_system();
  if (p.name == "dae") return dae_circuit_system();
  if (p.name == "lorenz") return lorenz_system();
  throw ShapeError("preset '" + p.name + "' has no ODE system");
}

std::function<Vec(Rng&)> make_ic_sampler(const ExperimentPreset& p) {
  switch (p.kind) {
    case PresetKind::OdeBox: {
      auto box = p.domain;
      return [box](Rng& rng) {
        Vec x(static_cast<Eigen::Index>(box.size()));
        for (std::size_t i = 0; i < box.size(); ++i)
          x[static_cast<Eigen::Index>(i)] = rng.uniform(box[i][0], box[i][1]);
        return x;
      };
    }
    case PresetKind::Pde1d: {
      const Grid1D grid = p.grid1d;
      return [grid](Rng& rng) { return sample_fhn_ic(grid, rng).values; };
    }
    case PresetKind::Pde2d: {
      const Grid2D grid = p.grid2d;
      return [grid](Rng& rng) { return sample_fourier_ic_2d(grid, 7, rng).values; };
    }
    case PresetKind::LorenzChunks:
      throw ShapeError("lorenz data comes from trajectory chunks, not sampled ICs");
  }
  throw ShapeError("unreachable preset kind");
}

Mlp<double> make_ode_model(const ExperimentPreset& p, std::uint64_t seed) {
  if (p.is_pde()) throw ShapeError("preset '" + p.name + "' uses a PDE flow map");
  std::vector<int> sizes;
  sizes.push_back(p.dim);
  sizes.insert(sizes.end(), p.hidden.begin(), p.hidden.end());
  sizes.push_back(p.dim);
  return Mlp<double>::glorot(std::move(sizes), seed);
}

PdeFlowMap<double> make_pde_model(const ExperimentPreset& p, std::uint64_t seed) {
  if (!p.is_pde()) throw ShapeError("preset '" + p.name + "' uses a plain residual model");
  return PdeFlowMap<double>::glorot(p.dim, p.pde_channels, p.pde_channel_hidden,
                                    p.pde_assembly_hidden, seed);
}

PdeModelMeta pde_meta(const ExperimentPreset& p) {
  PdeModelMeta meta;
  meta.components = p.components;
  if (p.kind == PresetKind::Pde1d)
    meta.grid = "periodic1d n=" + std::to_string(p.grid1d.nodes) + " x=[" +
                std::to_string(p.grid1d.x0) + "," + std::to_string(p.grid1d.x1) + "]";
  else if (p.kind == PresetKind::Pde2d)
    meta.grid = "dirichlet2d nx=" + std::to_string(p.grid2d.nx) +
                " ny=" + std::to_string(p.grid2d.ny);
  return meta;
}

ObservationDataset generate_preset_dataset(const ExperimentPreset& p, std::uint64_t seed,
                                           int workers) {
  switch (p.kind) {
    case PresetKind::OdeBox: {
      ObservationDataset ds =
          generate_ode_dataset(make_ode_system(p), make_ic_sampler(p), p.num_sequences,
                               p.obs_dt, p.total_time, p.outer_steps, seed, {}, workers,
                               box_descriptor(p.domain));
      ds.system = p.name;
      return ds;
    }
    case PresetKind::LorenzChunks:
      return generate_lorenz_chunks(p.obs_dt, p.total_time, p.num_sequences, p.outer_steps,
                                    seed);
    case PresetKind::Pde1d: {
      const FhnSystem sys = fhn_for(p);
      return generate_pde_dataset([sys](const Vec& u, Vec& out) { sys.rhs(u, out); },
                                  sys.stable_substep(), make_ic_sampler(p), p.dim,
                                  p.num_sequences, p.obs_dt, p.total_time, p.outer_steps, seed,
                                  workers, p.name, "piecewise-random excitation profiles");
    }
    case PresetKind::Pde2d: {
      const AdvDiff2dSystem sys = advdiff_for(p);
      return generate_pde_dataset([sys](const Vec& u, Vec& out) { sys.rhs(u, out); },
                                  sys.stable_substep(), make_ic_sampler(p), p.dim,
                                  p.num_sequences, p.obs_dt, p.total_time, p.outer_steps, seed,
                                  workers, p.name, "sine-mode expansions, 7x7 modes");
    }
  }
  throw ShapeError("unreachable preset kind");
}

Vec demo_initial_condition(const ExperimentPreset& p) {
  if (p.name == "lorenz") {
    Vec x(3);
    x << 10.0, 10.0, 20.0;
    return x;
  }
  if (p.kind == PresetKind::Pde1d) return fhn_demo_ic(p.grid1d).values;
  if (p.kind == PresetKind::Pde2d)
    return gaussian_ic_2d(p.grid2d, 0.2, 0.2, 0.2, 0.18, 0.18).values;
  if (p.kind == PresetKind::OdeBox) {
    // center-of-domain-ish point, nudged off any equilibrium
    Vec x(static_cast<Eigen::Index>(p.domain.size()));
    for (std::size_t i = 0; i < p.domain.size(); ++i)
      x[static_cast<Eigen::Index>(i)] =
          p.domain[i][0] + 0.6 * (p.domain[i][1] - p.domain[i][0]);
    return x;
  }
  throw ShapeError("preset '" + p.name + "' has no demo initial condition");
}

std::vector<Vec> oracle_reference(const ExperimentPreset& p, const Vec& x0, int n_steps,
                                  double fine_dt) {
  if (n_steps == 0) return {x0};
  const double t_end = fine_dt * n_steps;
  switch (p.kind) {
    case PresetKind::OdeBox:
    case PresetKind::LorenzChunks: {
      const OdeSystem sys = make_ode_system(p);
      return integrate(sys, x0, t_end, fine_dt).states;
    }
    case PresetKind::Pde1d: {
      const FhnSystem sys = fhn_for(p);
      return integrate_pde(sys, x0, t_end, fine_dt);
    }
    case PresetKind::Pde2d: {
      const AdvDiff2dSystem sys = advdiff_for(p);
      return integrate_pde(sys, x0, t_end, fine_dt);
    }
  }
  throw ShapeError("unreachable preset kind");
}

}  // namespace fsfm
