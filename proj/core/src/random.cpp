#include "fhnvs/random.hpp"

#include <cmath>

namespace fhnvs {

Field gaussian_bump(const Grid& grid, const Point& center, double width, double clip) {
  return Field::sample(grid, [&](const Point& x) {
    double r2 = 0.0;
    for (int k = 0; k < grid.dim(); ++k) r2 += (x[k] - center[k]) * (x[k] - center[k]);
    const double v = std::exp(-r2 / (2.0 * width * width));
    return v < clip ? 0.0 : v;
  });
}

Field random_smooth_field(const Grid& grid, Rng& rng, int bumps, bool nonnegative) {
  const double L = grid.half_width();
  Field out(grid);
  for (int b = 0; b < bumps; ++b) {
    Point c{0.0, 0.0, 0.0};
    for (int k = 0; k < grid.dim(); ++k) c[k] = rng.uniform(-0.6 * L, 0.6 * L);
    const double width = rng.uniform(0.15 * L, 0.35 * L);
    const double amp = nonnegative ? rng.uniform(0.0, 1.0) : rng.uniform(-1.0, 1.0);
    out.axpy(amp, gaussian_bump(grid, c, width, 0.0));
  }
  return out;
}

Field random_nodal_field(const Grid& grid, Rng& rng, double lo, double hi) {
  Field out(grid);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = rng.uniform(lo, hi);
  return out;
}

}  // namespace fhnvs
