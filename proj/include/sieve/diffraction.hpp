#pragma once

#include <optional>
#include <variant>
#include <vector>

#include "sieve/field.hpp"
#include "sieve/mask.hpp"

namespace sieve {

struct FreeSpaceModel {
  double z = 0;  // propagation distance, > 0
};

/// Thin lens of focal length f with the mask in its aperture; the observation
/// plane sits at defocus delta_f from the back focal plane. delta_f = 0 (the
/// focal plane itself) is rejected.
struct LensModel {
  double f = 0;
  double delta_f = 0;
};

/// Anisotropic defocus. For the lens model delta_f_x/delta_f_y replace
/// delta_f along the two principal axes (same sign required); for free space
/// they are added to z per axis. orientation rotates the principal axes
/// counterclockwise from the grid axes.
struct AstigParams {
  double delta_f_x = 0;
  double delta_f_y = 0;
  double orientation = 0;
};

struct OpticalSetup {
  double lambda = 0;
  std::variant<FreeSpaceModel, LensModel> model = FreeSpaceModel{};
  std::optional<AstigParams> astig;
};

/// Reduction of the lens model to free space: z_eff = f^2/|delta_f|,
/// mag = -f/delta_f (observation coordinate u maps to u * mag in the
/// effective plane), chirp_sign = sign(delta_f). Observation past the focus
/// (delta_f > 0) conjugates the effective-plane field, which flips measured
/// winding signs. The residual radial phase common to the whole plane is
/// dropped; it affects neither intensity nor winding numbers.
struct EffectiveGeometry {
  double z_eff = 0;
  double mag = 1;
  int chirp_sign = +1;
};

EffectiveGeometry effective_geometry(const OpticalSetup& setup);

/// Analytic per-pinhole Fresnel sum over the mask:
///   field(u) = sum_j pi a_j^2 / (i lambda z) * exp(i k |u' - c_j|^2 / (2 z))
///              * jinc(k a_j |u' - c_j| / z)
/// valid while every pinhole Fresnel number a^2/(lambda z_eff) stays below 0.1
/// (FresnelNumberError otherwise). Ignores setup.astig; pinholes are summed in
/// mask order so results are bitwise reproducible.
ComplexField propagate_sieve(const PinholeMask& mask, const OpticalSetup& setup,
                             const GridSpec& obs);

/// Brute-force reference: each pinhole disc integrated by concentric-ring
/// quadrature (rings r = 0..q_radial-1 carrying 1, 7, 13, ... = 6r+1 nodes,
/// ring weights are the exact annulus areas, so they sum to pi a^2; outer
/// rings sit at the annulus midpoint in rho^2, ring 0 is the center node).
/// q = 1 degenerates to a single center node of weight pi a^2. No jinc factor
/// and no Fresnel-number gate: this is the model the fast path is checked
/// against.
ComplexField propagate_oracle(const PinholeMask& mask, const OpticalSetup& setup,
                              const GridSpec& obs, int q_radial);

/// Same mask sum with separable per-axis defocus taken from setup.astig
/// (required). Exactly equal per-axis parameters delegate to propagate_sieve.
ComplexField astigmatic_propagate(const PinholeMask& mask, const OpticalSetup& setup,
                                  const GridSpec& obs);

/// Direct-quadrature separable Fresnel step for an already sampled field:
/// anisotropic distances z_x, z_y implement an astigmatic transformation of
/// synthesized beams. O(nx_out*nx_in*ny_in + ny_out*ny_in*nx_out).
ComplexField fresnel_propagate_field(const ComplexField& in, double lambda, double z_x,
                                     double z_y, const GridSpec& obs);

/// Strict local minima of intensity along the line through the intensity
/// centroid in direction `orientation`, counted between qualifying flanking
/// maxima (a minimum qualifies when its value is below 20% of the smaller
/// flank). Throws NoPatternError when the profile has no usable maximum.
int count_dark_stripes(const ComplexField& f, double orientation);

struct ZStackResult {
  std::vector<double> delta_f;        // slice labels, meters
  std::vector<double> ring_rms;       // observation-plane rms radius per slice
  std::vector<ComplexField> slices;   // observation-plane fields
  std::vector<double> yz;             // |f|^2 on the central column, ny * n_slices
  int ny = 0;
};

/// Lens-model defocus scan. ring_rms is the intensity-weighted rms radius over
/// the fixed observation-plane disc r <= rms_cap_radius (meters; <= 0 means
/// the whole inscribed circle). At this plane the slice family reduces to a
/// pure pupil-defocus family at a fixed transverse mapping, so the rms is
/// symmetric about the design focus and bottoms out at the waist.
ZStackResult z_stack(const PinholeMask& mask, double lambda, double f,
                     const std::vector<double>& delta_fs, const GridSpec& obs,
                     double rms_cap_radius);

}  // namespace sieve
