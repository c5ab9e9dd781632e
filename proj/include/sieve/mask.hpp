#pragma once

#include <array>
#include <string>
#include <vector>

#include "sieve/field.hpp"
#include "sieve/grid.hpp"

namespace sieve {

struct Pinhole {
  double x = 0;  // center, meters
  double y = 0;
  double radius = 0;
};

enum class MotifKind { explicit_points, logarithmic, archimedean, fermat };

/// Construction parameters of one chiral curve of pinholes. Only the fields
/// relevant to `kind` are meaningful. handedness = +1 places point n at
/// +theta_n, -1 mirrors the curve about the x axis.
struct MotifSpec {
  MotifKind kind = MotifKind::explicit_points;
  int n_points = 0;
  double pinhole_radius = 0;
  int handedness = +1;

  double r0 = 0;          // logarithmic start radius / archimedean offset "a"
  double b = 0;           // logarithmic growth rate / archimedean slope (m per rad)
  double theta_span = 0;  // total angular extent for log/archimedean curves

  int ell_design = 0;  // fermat: target winding number of the design
  double lambda = 0;   // fermat: wavelength
  double z_design = 0; // fermat: design propagation distance

  std::vector<std::array<double, 2>> points;  // explicit centers
};

struct Motif {
  MotifSpec spec;
  std::vector<Pinhole> pinholes;
};

/// Pinhole set plus the symmetry metadata the selection analysis relies on.
/// symmetry_m = m means the center set is invariant under rotation by 2*pi/m.
/// provenance records the (motif, replication) pairs the mask was built from;
/// masks read back from CSV have none.
struct PinholeMask {
  std::vector<Pinhole> pinholes;
  int symmetry_m = 1;
  std::vector<std::pair<MotifSpec, int>> provenance;
};

Motif explicit_motif(const std::vector<std::array<double, 2>>& points_m, double pinhole_radius);

/// r(theta) = r0 * exp(b * |theta|), theta_n = handedness * n * span/(N-1)
/// (theta_0 = 0 when N = 1). theta_span must be positive.
Motif log_spiral_motif(int n_points, double r0, double b, double theta_span,
                       double pinhole_radius, int handedness);

/// r(theta) = a + b * |theta|.
Motif archimedean_motif(int n_points, double a, double b, double theta_span,
                        double pinhole_radius, int handedness);

/// Fermat sieve curve: alpha_n = 2*pi*n/N, r_n = sqrt(r0^2 + ell*z*lambda*alpha_n/pi),
/// placed at theta_n = handedness * alpha_n. Throws NegativeRadicandError when
/// the radicand is not positive for some n.
Motif fermat_motif(int n_points, double r0, int ell_design, double lambda, double z_design,
                   double pinhole_radius, int handedness);

/// m rotated copies of the motif at angular offsets 2*pi*s/m. Validates
/// pairwise non-overlap of the full set.
PinholeMask replicate(const Motif& motif, int m);

/// Union of parts; symmetry_m becomes the gcd of the parts' symmetries.
PinholeMask compound_mask(const std::vector<PinholeMask>& parts);

/// (x, y) -> (x, -y); symmetry metadata is preserved.
PinholeMask mirror_mask(const PinholeMask& mask);

/// Binary transmission sampled at cell centers (1 inside any pinhole).
/// Preconditions: max pitch <= min pinhole radius / 4 (ResolutionError) and
/// every disc fully inside the covered extent (ExtentError). An empty mask
/// rasterizes to a zero field.
ComplexField rasterize(const PinholeMask& mask, const GridSpec& grid);

/// CSV with header "x_m,y_m,radius_m" and 17 significant digits.
void write_pinhole_csv(const std::string& path, const PinholeMask& mask);
PinholeMask read_pinhole_csv(const std::string& path);

/// Throws OverlapError if any two pinholes overlap (center distance strictly
/// less than the radius sum); tangency is allowed. Called by all constructors.
void validate_no_overlap(const PinholeMask& mask);

}  // namespace sieve
