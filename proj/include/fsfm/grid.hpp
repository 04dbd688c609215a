// Uniform grids and flat nodal fields.
#pragma once

#include "fsfm/core.hpp"

namespace fsfm {

// Periodic 1-D grid: nodes at x0 + i*h, i = 0..n-1, node n wraps to node 0,
// so h = length / n.
struct Grid1D {
  int nodes = 0;
  double x0 = 0.0;
  double x1 = 1.0;

  double spacing() const { return (x1 - x0) / nodes; }
  double node(int i) const { return x0 + i * spacing(); }
};

// 2-D grid including its boundary ring: x_i = x0 + i*hx, i = 0..nx-1.
struct Grid2D {
  int nx = 0, ny = 0;
  double x0 = -1.0, x1 = 1.0;
  double y0 = -1.0, y1 = 1.0;

  double hx() const { return (x1 - x0) / (nx - 1); }
  double hy() const { return (y1 - y0) / (ny - 1); }
  double x(int i) const { return x0 + i * hx(); }
  double y(int j) const { return y0 + j * hy(); }
  int nodes() const { return nx * ny; }
  int index(int i, int j) const { return j * nx + i; }
  bool on_boundary(int i, int j) const {
    return i == 0 || j == 0 || i == nx - 1 || j == ny - 1;
  }
};

// Multi-component nodal field, flattened component-major:
// values[c * nodes + i] is component c at node i.
struct GridField {
  int components = 1;
  int nodes = 0;
  Vec values;

  static GridField zero(int components, int nodes) {
    return {components, nodes, Vec::Zero(static_cast<Eigen::Index>(components) * nodes)};
  }

  double& at(int c, int i) { return values[static_cast<Eigen::Index>(c) * nodes + i]; }
  double at(int c, int i) const { return values[static_cast<Eigen::Index>(c) * nodes + i]; }

  Eigen::Ref<Vec> component(int c) {
    return values.segment(static_cast<Eigen::Index>(c) * nodes, nodes);
  }
  Eigen::Ref<const Vec> component(int c) const {
    return values.segment(static_cast<Eigen::Index>(c) * nodes, nodes);
  }
};

// Second-order periodic central-difference Laplacian; row sums are exactly
// zero, so constant fields are in its null space.
Vec periodic_laplacian(const Grid1D& grid, Eigen::Ref<const Vec> field);

}  // namespace fsfm
