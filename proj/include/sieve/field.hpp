#pragma once

#include <complex>
#include <vector>

#include "sieve/grid.hpp"

namespace sieve {

using cplx = std::complex<double>;

/// Scalar complex field sampled on a GridSpec. Samples are stored row-major,
/// j (y) outer, i (x) inner. z_label tags the plane the field lives in
/// (defocus or propagation distance, purely informational).
struct ComplexField {
  GridSpec grid;
  std::vector<cplx> samples;
  double z_label = 0;

  ComplexField() = default;
  explicit ComplexField(const GridSpec& g, double z = 0)
      : grid(g), samples(static_cast<size_t>(g.count())), z_label(z) {
    g.validate();
  }

  cplx& at(int i, int j) { return samples[static_cast<size_t>(j) * grid.nx + i]; }
  const cplx& at(int i, int j) const { return samples[static_cast<size_t>(j) * grid.nx + i]; }
};

/// Bilinear interpolation at a physical point; points outside the sample hull
/// evaluate to zero.
cplx bilinear_at(const ComplexField& f, double x, double y);

/// Resample the field so the output at polar point (rho, theta) equals the
/// input at (rho, theta + angle), both measured about the grid origin.
/// Right-angle rotations on square grids reduce to exact index permutations;
/// everything else uses bilinear interpolation with out-of-domain zero fill.
ComplexField rotate_field(const ComplexField& f, double angle);

/// Sum of rotated copies sum_{s=0..m-1} rotate(f, 2*pi*s/m). The s = 0 term is
/// the untouched input.
ComplexField superpose_rotations(const ComplexField& f, int m);

struct WindingResult {
  int winding = 0;
  double residual = 0;  // |accumulated/2pi - winding|, < 0.25 by contract
};

/// Net phase winding along the counterclockwise circle of given radius about
/// the grid origin. Throws AmplitudeTooLowError if the field nearly vanishes
/// somewhere on the circle (min |f| <= 1e-6 * max |f|), UndersampledError if
/// any adjacent phase step exceeds pi/2 or the rounding residual is >= 0.25.
WindingResult phase_winding(const ComplexField& f, double radius, int n_samples);

/// Count of strict local maxima of |f|^2 around the circle (periodic,
/// plateaus of exactly equal values merge into one candidate). A constant
/// circle has no strict maxima and returns 0. Throws UndersampledError when
/// the count exceeds n_samples/4 (too few samples per peak to trust it).
int angular_peak_count(const ComplexField& f, double radius, int n_samples);

/// sum |f|^2 * cell_area.
double field_power(const ComplexField& f);

struct RadialProfile {
  std::vector<double> mean_intensity;  // azimuthal mean of |f|^2 per annulus
  double bin_width = 0;
  double radius_of(int bin) const { return (bin + 0.5) * bin_width; }
};

/// Azimuthal average of |f|^2 over n_bins equal-width annuli between 0 and the
/// inscribed half extent. Samples beyond the inscribed circle are ignored.
RadialProfile radial_profile(const ComplexField& f, int n_bins);

}  // namespace sieve
