// Fixed-step RK4 and adaptive Dormand-Prince RK45 reference integrators.
#pragma once

#include "fsfm/ode_systems.hpp"

namespace fsfm {

enum class Method { Rk4, Rk45 };

struct IntegratorConfig {
  Method method = Method::Rk45;
  double fixed_step = 0.0;  // RK4 substep; must divide the output interval. 0 = one substep.
  double abs_tol = 1e-10;
  double rel_tol = 1e-10;
};

struct Trajectory {
  double dt = 0.0;  // spacing between stored states
  std::vector<Vec> states;

  double time(std::size_t k) const { return dt * static_cast<double>(k); }
  std::size_t steps() const { return states.empty() ? 0 : states.size() - 1; }
};

// One classical RK4 step of size h.
Vec rk4_step(const OdeSystem& sys, const Vec& x, double h);

// States at 0, output_dt, ..., t_end. The adaptive method steps to each
// output boundary exactly; output_dt must divide t_end (slack 1e-12 relative).
Trajectory integrate(const OdeSystem& sys, const Vec& x0, double t_end, double output_dt,
                     const IntegratorConfig& cfg = {});

// Single-interval flow map shorthand: state after time dt from x.
Vec flow_oracle(const OdeSystem& sys, const Vec& x, double dt, const IntegratorConfig& cfg = {});

// One row per state: t, x1, ..., xd.
void export_trajectory_csv(const std::string& path, const Trajectory& traj);

}  // namespace fsfm
