// Reference ODE/DAE right-hand sides. Known dynamics are used only to
// synthesize observation data and oracle trajectories.
#pragma once

#include "fsfm/core.hpp"

namespace fsfm {

struct OdeSystem {
  std::string name;
  int dim = 0;
  std::function<void(const Vec&, Vec&)> rhs;

  Vec operator()(const Vec& x) const {
    Vec dx(dim);
    rhs(x, dx);
    return dx;
  }
};

// van der Pol oscillator as a first-order system:
// y1' = y2, y2' = (1 - y1^2) y2 - y1
Vec vdp_rhs(const Vec& y);

inline constexpr double kPendulumBeta = 9.80665;

// y1' = y2, y2' = -beta sin(y1)
Vec pendulum_rhs(const Vec& y);

// total energy, conserved by the true dynamics
double pendulum_energy(const Vec& y);

struct DaeCircuitParams {
  double capacitance = 1e-9;   // C
  double inductance = 1e-6;    // L
  double voltage_scale = 1.0;  // U0
  double g0 = -0.1;
  double g_inf = 0.25;
};

// The two algebraic constraints are explicit and solved in closed form:
// v1 = (G0 - Ginf) U0 tanh(u1/U0) + Ginf u1,  v2 = -(u2 + v1).
// Returns (v1, v2) for the differential state (u1, u2).
Vec dae_circuit_algebraic(const Vec& u, const DaeCircuitParams& p = {});

// u1' = v2/C, u2' = u1/L with the algebraic variables substituted.
Vec dae_circuit_rhs(const Vec& u, const DaeCircuitParams& p = {});

// Lorenz 63: x' = 10(y-x), y' = x(28-z) - y, z' = xy - (8/3)z
Vec lorenz_rhs(const Vec& x);

OdeSystem vdp_system();
OdeSystem pendulum_system();
OdeSystem dae_circuit_system(const DaeCircuitParams& p = {});
OdeSystem lorenz_system();

}  // namespace fsfm
