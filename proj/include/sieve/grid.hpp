#pragma once

#include <cstdint>

#include "sieve/errors.hpp"

namespace sieve {

/// Uniform Cartesian sampling of a plane region. All lengths in meters.
/// Index (i, j) maps to the physical point
///   x = origin_x + (i - nx/2) * pitch_x,   i = 0 .. nx-1  (fast axis)
///   y = origin_y + (j - ny/2) * pitch_y,   j = 0 .. ny-1
/// so the grid center (origin) is the beam axis for all azimuthal operations.
/// The covered extent is the union of the sample cells:
///   [origin_x - nx/2 * pitch_x, origin_x + (nx - nx/2) * pitch_x] and same in y.
struct GridSpec {
  int nx = 0;
  int ny = 0;
  double pitch_x = 0;
  double pitch_y = 0;
  double origin_x = 0;
  double origin_y = 0;

  void validate() const {
    if (nx < 2 || ny < 2) throw PreconditionError("grid", "grid needs at least 2x2 samples");
    if (!(pitch_x > 0) || !(pitch_y > 0)) throw PreconditionError("grid", "grid pitch must be positive");
  }

  double x_at(int i) const { return origin_x + (i - nx / 2) * pitch_x; }
  double y_at(int j) const { return origin_y + (j - ny / 2) * pitch_y; }

  /// Continuous (fractional) index of a physical point.
  double fi_of(double x) const { return (x - origin_x) / pitch_x + nx / 2; }
  double fj_of(double y) const { return (y - origin_y) / pitch_y + ny / 2; }

  std::int64_t count() const { return static_cast<std::int64_t>(nx) * ny; }
  double cell_area() const { return pitch_x * pitch_y; }

  // covered-extent half widths relative to the origin
  double half_extent_x() const { return (nx / 2) * pitch_x; }
  double half_extent_y() const { return (ny / 2) * pitch_y; }

  bool same_layout(const GridSpec& o) const {
    return nx == o.nx && ny == o.ny && pitch_x == o.pitch_x && pitch_y == o.pitch_y &&
           origin_x == o.origin_x && origin_y == o.origin_y;
  }
};

}  // namespace sieve
