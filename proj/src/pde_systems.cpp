#include "fsfm/pde_systems.hpp"

#include <cmath>

namespace fsfm {

void FhnSystem::rhs(const Vec& state, Vec& out) const {
  const int n = grid.nodes;
  if (state.size() != 2 * n) throw ShapeError("FhnSystem::rhs: state length mismatch");
  out.resize(2 * n);
  const auto v = state.head(n);
  const auto w = state.tail(n);
  const Vec lap_v = periodic_laplacian(grid, v);
  out.head(n) = v.array() - v.array().cube() / 3.0 - w.array() + diffusion * lap_v.array();
  out.tail(n) = eps * (v.array() + b - c * w.array());
}

double FhnSystem::stable_substep() const {
  const double h = grid.spacing();
  return 0.2 * (h * h / diffusion) * 0.25;
}

void AdvDiff2dSystem::rhs(const Vec& u, Vec& out) const {
  const int nx = grid.nx, ny = grid.ny;
  if (u.size() != nx * ny) throw ShapeError("AdvDiff2dSystem::rhs: state length mismatch");
  out.setZero(nx * ny);  // boundary ring stays at zero rate
  const double ihx2 = 1.0 / (2.0 * grid.hx());
  const double ihy2 = 1.0 / (2.0 * grid.hy());
  const double ihxx = 1.0 / (grid.hx() * grid.hx());
  const double ihyy = 1.0 / (grid.hy() * grid.hy());
  for (int j = 1; j + 1 < ny; ++j) {
    for (int i = 1; i + 1 < nx; ++i) {
      const int c = grid.index(i, j);
      const double ue = u[grid.index(i + 1, j)];
      const double uw = u[grid.index(i - 1, j)];
      const double un = u[grid.index(i, j + 1)];
      const double us = u[grid.index(i, j - 1)];
      // alpha = rotation * (y, -x); centered differences of the fluxes
      const double flux_x = (rotation * grid.y(j) * ue - rotation * grid.y(j) * uw) * ihx2;
      const double flux_y =
          (-rotation * grid.x(i) * un - (-rotation * grid.x(i)) * us) * ihy2;
      const double lap = (ue - 2.0 * u[c] + uw) * ihxx + (un - 2.0 * u[c] + us) * ihyy;
      out[c] = -(flux_x + flux_y) + kappa * lap;
    }
  }
}

double AdvDiff2dSystem::stable_substep() const {
  const double h = std::min(grid.hx(), grid.hy());
  double max_speed = 0;
  for (int j = 0; j < grid.ny; ++j)
    for (int i = 0; i < grid.nx; ++i)
      max_speed = std::max(max_speed,
                           std::abs(rotation) * std::hypot(grid.x(i), grid.y(j)));
  const double diffusive = (kappa > 0) ? 0.2 * (h * h / kappa) * 0.25
                                       : std::numeric_limits<double>::infinity();
  const double advective = (max_speed > 0) ? 0.2 * h / max_speed
                                           : std::numeric_limits<double>::infinity();
  const double bound = std::min(diffusive, advective);
  return std::isfinite(bound) ? bound : 1.0;
}

GridField sample_fhn_ic(const Grid1D& grid, Rng& rng) {
  const double m1 = rng.uniform(0.0, 1.25);
  const double m2 = m1 + rng.uniform(0.25, 1.5);
  GridField f = GridField::zero(2, grid.nodes);
  for (int i = 0; i < grid.nodes; ++i) {
    const double x = grid.node(i);
    f.at(0, i) = (x >= m1 && x <= m2) ? rng.uniform(0.9, 1.1) : rng.uniform(-1.2, -1.0);
  }
  for (int i = 0; i < grid.nodes; ++i) {
    const double x = grid.node(i);
    f.at(1, i) = (x <= m1) ? rng.uniform(-0.1, 0.1) : rng.uniform(-0.6, -0.4);
  }
  return f;
}

GridField fhn_demo_ic(const Grid1D& grid) {
  GridField f = GridField::zero(2, grid.nodes);
  for (int i = 0; i < grid.nodes; ++i) {
    const double x = grid.node(i);
    f.at(0, i) = (x >= 0.75 && x <= 1.0) ? 1.0 : -1.1;
    f.at(1, i) = (x <= 0.75) ? 0.0 : -0.5;
  }
  return f;
}

Mat sample_fourier_coefficients(int max_mode, Rng& rng) {
  Mat coeff(max_mode, max_mode);
  for (int k = 1; k <= max_mode; ++k)
    for (int l = 1; l <= max_mode; ++l)
      coeff(k - 1, l - 1) = rng.uniform(-1.0, 1.0) / static_cast<double>(k + l);
  return coeff;
}

GridField fourier_modes_field(const Grid2D& grid, const Mat& coeff) {
  GridField f = GridField::zero(1, grid.nodes());
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      double val = 0;
      for (Eigen::Index k = 1; k <= coeff.rows(); ++k)
        for (Eigen::Index l = 1; l <= coeff.cols(); ++l)
          val += coeff(k - 1, l - 1) * std::sin(0.5 * static_cast<double>(k) * M_PI * (grid.x(i) + 1.0)) *
                 std::sin(0.5 * static_cast<double>(l) * M_PI * (grid.y(j) + 1.0));
      f.values[grid.index(i, j)] = val;
    }
  }
  return f;
}

GridField sample_fourier_ic_2d(const Grid2D& grid, int max_mode, Rng& rng) {
  return fourier_modes_field(grid, sample_fourier_coefficients(max_mode, rng));
}

GridField gaussian_ic_2d(const Grid2D& grid, double amplitude, double mu_x, double mu_y,
                         double sigma_x, double sigma_y) {
  GridField f = GridField::zero(1, grid.nodes());
  const double scale = amplitude / (2.0 * M_PI * sigma_x * sigma_y);
  for (int j = 0; j < grid.ny; ++j) {
    for (int i = 0; i < grid.nx; ++i) {
      if (grid.on_boundary(i, j)) continue;
      const double dx = (grid.x(i) - mu_x) / sigma_x;
      const double dy = (grid.y(j) - mu_y) / sigma_y;
      f.values[grid.index(i, j)] = scale * std::exp(-0.5 * dx * dx - 0.5 * dy * dy);
    }
  }
  return f;
}

}  // namespace fsfm
