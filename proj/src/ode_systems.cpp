#include "fsfm/ode_systems.hpp"

#include <cmath>

namespace fsfm {

Vec vdp_rhs(const Vec& y) {
  Vec dy(2);
  dy[0] = y[1];
  dy[1] = (1.0 - y[0] * y[0]) * y[1] - y[0];
  return dy;
}

Vec pendulum_rhs(const Vec& y) {
  Vec dy(2);
  dy[0] = y[1];
  dy[1] = -kPendulumBeta * std::sin(y[0]);
  return dy;
}

double pendulum_energy(const Vec& y) {
  return 0.5 * y[1] * y[1] - kPendulumBeta * std::cos(y[0]);
}

Vec dae_circuit_algebraic(const Vec& u, const DaeCircuitParams& p) {
  Vec v(2);
  v[0] = (p.g0 - p.g_inf) * p.voltage_scale * std::tanh(u[0] / p.voltage_scale) +
         p.g_inf * u[0];
  v[1] = -(u[1] + v[0]);
  return v;
}

Vec dae_circuit_rhs(const Vec& u, const DaeCircuitParams& p) {
  const Vec v = dae_circuit_algebraic(u, p);
  Vec du(2);
  du[0] = v[1] / p.capacitance;
  du[1] = u[0] / p.inductance;
  return du;
}

Vec lorenz_rhs(const Vec& x) {
  Vec dx(3);
  dx[0] = 10.0 * (x[1] - x[0]);
  dx[1] = x[0] * (28.0 - x[2]) - x[1];
  dx[2] = x[0] * x[1] - (8.0 / 3.0) * x[2];
  return dx;
}

OdeSystem vdp_system() {
  return {"vdp", 2, [](const Vec& y, Vec& dy) { dy = vdp_rhs(y); }};
}

OdeSystem pendulum_system() {
  return {"pendulum", 2, [](const Vec& y, Vec& dy) { dy = pendulum_rhs(y); }};
}

OdeSystem dae_circuit_system(const DaeCircuitParams& p) {
  return {"dae", 2, [p](const Vec& u, Vec& du) { du = dae_circuit_rhs(u, p); }};
}

OdeSystem lorenz_system() {
  return {"lorenz", 3, [](const Vec& x, Vec& dx) { dx = lorenz_rhs(x); }};
}

}  // namespace fsfm
