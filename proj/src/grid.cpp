#include "fsfm/grid.hpp"

namespace fsfm {

Vec periodic_laplacian(const Grid1D& grid, Eigen::Ref<const Vec> field) {
  const int n = grid.nodes;
  if (field.size() != n) throw ShapeError("periodic_laplacian: field size != grid nodes");
  const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
  Vec out(n);
  for (int i = 0; i < n; ++i) {
    const int left = (i == 0) ? n - 1 : i - 1;
    const int right = (i == n - 1) ? 0 : i + 1;
    out[i] = (field[left] - 2.0 * field[i] + field[right]) * inv_h2;
  }
  return out;
}

}  // namespace fsfm
