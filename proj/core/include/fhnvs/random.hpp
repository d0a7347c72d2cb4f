#pragma once

#include <cstdint>
#include <random>

#include "fhnvs/grid.hpp"

namespace fhnvs {

/// Seeded generator with platform-independent uniform draws (the standard
/// distributions are implementation-defined, which would break bitwise
/// reproducibility across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  int uniform_int(int lo, int hi_inclusive) {
    return lo + static_cast<int>(engine_() % static_cast<std::uint64_t>(hi_inclusive - lo + 1));
  }

 private:
  std::mt19937_64 engine_;
};

/// exp(-|x - c|^2 / (2 w^2)), set to zero where it falls below `clip`.
Field gaussian_bump(const Grid& grid, const Point& center, double width, double clip = 1e-12);

/// Sum of a few randomly placed Gaussian bumps with random amplitudes; smooth
/// and vanishing near the boundary. Amplitudes are in [0, 1] when
/// `nonnegative`, else in [-1, 1].
Field random_smooth_field(const Grid& grid, Rng& rng, int bumps = 6, bool nonnegative = false);

/// Independent uniform nodal values in [lo, hi).
Field random_nodal_field(const Grid& grid, Rng& rng, double lo = -1.0, double hi = 1.0);

}  // namespace fhnvs
