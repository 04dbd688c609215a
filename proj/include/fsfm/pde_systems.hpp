// Reference PDE solvers (method of lines) and initial-condition samplers.
#pragma once

#include "fsfm/grid.hpp"

#include <vector>

namespace fsfm {

// FitzHugh-Nagumo with voltage diffusion on a periodic 1-D grid:
//   dv/dt = v - v^3/3 - w + D Lap(v)
//   dw/dt = eps (v + b - c w)
// State is (v, w) flattened component-major: v at nodes 0..n-1, then w.
struct FhnSystem {
  Grid1D grid{50, 0.0, 5.0};
  double diffusion = 0.01;  // D
  double eps = 0.08;
  double b = 0.7;
  double c = 0.8;

  int state_len() const { return 2 * grid.nodes; }
  void rhs(const Vec& state, Vec& out) const;

  // largest explicit substep the stability rule allows
  double stable_substep() const;
};

// 2-D advection-diffusion du/dt = -div(alpha u) + kappa Lap(u) with
// alpha(x, y) = rotation * (y, -x), zero Dirichlet ring. Second-order central
// differences; boundary nodes are never updated.
struct AdvDiff2dSystem {
  Grid2D grid{16, 16};
  double kappa = 5e-3;
  double rotation = 1.0;  // scales the velocity field; 0 disables transport

  int state_len() const { return grid.nodes(); }
  void rhs(const Vec& u, Vec& out) const;
  double stable_substep() const;
};

// Piecewise-random excitation profile: v is drawn from U[0.9, 1.1] on
// [m1, m2] and U[-1.2, -1] elsewhere, w from U[-0.1, 0.1] for x <= m1 and
// U[-0.6, -0.4] beyond, with m1 ~ U[0, 1.25], m2 ~ m1 + U[0.25, 1.5].
GridField sample_fhn_ic(const Grid1D& grid, Rng& rng);

// Demonstrative pulse: v = 1 on [0.75, 1] else -1.1; w = 0 for x <= 0.75
// else -0.5.
GridField fhn_demo_ic(const Grid1D& grid);

// coeff(k-1, l-1) ~ U[-1,1]/(k+l), k outer, l inner draw order
Mat sample_fourier_coefficients(int max_mode, Rng& rng);

// Sine-mode expansion sum_{k,l} coeff_kl sin(k pi (x+1)/2) sin(l pi (y+1)/2);
// vanishes on the boundary ring by construction.
GridField fourier_modes_field(const Grid2D& grid, const Mat& coeff);

GridField sample_fourier_ic_2d(const Grid2D& grid, int max_mode, Rng& rng);

// Gaussian bump scaled by amplitude/(2 pi sx sy), boundary ring forced to 0.
GridField gaussian_ic_2d(const Grid2D& grid, double amplitude, double mu_x, double mu_y,
                         double sigma_x, double sigma_y);

// RK4 method of lines. The substep divides output_dt exactly and respects
// sys.stable_substep() unless overridden. Throws NumericError when the sup
// norm grows by 1e6 over the initial field.
template <class System>
std::vector<Vec> integrate_pde(const System& sys, const Vec& ic, double t_end, double output_dt,
                               double substep_override = 0.0);

// implementation ------------------------------------------------------------

template <class System>
std::vector<Vec> integrate_pde(const System& sys, const Vec& ic, double t_end, double output_dt,
                               double substep_override) {
  if (ic.size() != sys.state_len()) throw ShapeError("integrate_pde: state length mismatch");
  if (!(output_dt > 0)) throw ShapeError("integrate_pde: output_dt must be positive");
  const long long n_out = std::llround(t_end / output_dt);
  if (n_out < 0 || std::abs(static_cast<double>(n_out) * output_dt - t_end) >
                       1e-12 * std::max(1.0, std::abs(t_end)))
    throw ShapeError("integrate_pde: output_dt does not divide t_end");

  const double bound = (substep_override > 0) ? substep_override : sys.stable_substep();
  const int n_sub = std::max(1, static_cast<int>(std::ceil(output_dt / bound - 1e-12)));
  const double h = output_dt / n_sub;

  const double limit = 1e6 * std::max(1.0, ic.lpNorm<Eigen::Infinity>());
  std::vector<Vec> snaps;
  snaps.reserve(static_cast<std::size_t>(n_out) + 1);
  snaps.push_back(ic);

  Vec u = ic;
  Vec k1(u.size()), k2(u.size()), k3(u.size()), k4(u.size()), stage(u.size());
  for (long long k = 0; k < n_out; ++k) {
    for (int s = 0; s < n_sub; ++s) {
      sys.rhs(u, k1);
      stage = u + 0.5 * h * k1;
      sys.rhs(stage, k2);
      stage = u + 0.5 * h * k2;
      sys.rhs(stage, k3);
      stage = u + h * k3;
      sys.rhs(stage, k4);
      u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (!u.allFinite() || u.lpNorm<Eigen::Infinity>() > limit)
      throw NumericError("integrate_pde: unstable at t = " +
                         std::to_string(output_dt * static_cast<double>(k + 1)) +
                         "; retry with substep <= " + std::to_string(h / 2));
    snaps.push_back(u);
  }
  return snaps;
}

}  // namespace fsfm
