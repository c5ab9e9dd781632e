#pragma once

#include <complex>
#include <string>
#include <vector>

#include "sieve/field.hpp"

namespace sieve {

/// Laguerre-Gauss basis truncation: radial orders 0..p_max, winding numbers
/// ell_min..ell_max, waist w0 at the sampled plane. `window` is the side of
/// the square expansion area, centered on the beam axis; windows below 4*w0
/// truncate noticeable mode power (callers may warn).
struct LGBasisSpec {
  double w0 = 0;
  int p_max = 0;
  int ell_min = 0;
  int ell_max = 0;
  double window = 0;

  void validate() const;
  int n_ell() const { return ell_max - ell_min + 1; }
  int count() const { return n_ell() * (p_max + 1); }
  int index(int p, int ell) const { return (ell - ell_min) * (p_max + 1) + p; }
  bool has_ell(int ell) const { return ell >= ell_min && ell <= ell_max; }
};

/// Waist-plane mode, continuous normalization (integral of |phi|^2 over the
/// plane is 1):
///   phi = sqrt(2 p! / (pi (p+|l|)!)) / w0 * (sqrt(2) rho / w0)^|l|
///         * L_p^{|l|}(2 rho^2 / w0^2) * exp(-rho^2/w0^2) * exp(i l theta).
/// (x, y) is relative to the beam axis. Factorial ratios go through lgamma so
/// large |l| cannot overflow.
cplx lg_eval(double x, double y, double w0, int p, int ell);

/// Dense coefficient table over an LGBasisSpec; exactly one entry per (p, ell).
struct CoeffTable {
  LGBasisSpec basis;
  std::vector<cplx> c;

  CoeffTable() = default;
  explicit CoeffTable(const LGBasisSpec& b) : basis(b), c(b.count()) { b.validate(); }
  cplx& at(int p, int ell) { return c[basis.index(p, ell)]; }
  const cplx& at(int p, int ell) const { return c[basis.index(p, ell)]; }
};

/// Overlap integrals c_{p,l} = integral of f * conj(phi_{p,l}) over the basis
/// window, midpoint quadrature on the field's own grid. Preconditions:
/// pitch <= w0/16 on both axes (ResolutionError) and the window inside the
/// covered extent (WindowError).
CoeffTable decompose(const ComplexField& f, const LGBasisSpec& basis);

/// Coherent sum of basis modes with the given coefficients. Same resolution
/// precondition as decompose.
ComplexField synthesize(const CoeffTable& coeffs, const GridSpec& grid);

struct OAMSpectrum {
  std::vector<double> power;  // index ell - ell_min, normalized to sum 1
  int ell_min = 0;
  int ell_max = 0;
  double total_power = 0;  // pre-normalization sum

  double at(int ell) const { return power[ell - ell_min]; }
};

/// P(l) = sum_p |c_{p,l}|^2, normalized over the basis range. Throws
/// ZeroPowerError on an all-zero table.
OAMSpectrum oam_spectrum(const CoeffTable& coeffs);

/// Closed form of the m-fold rotational selection sum: m when m divides ell,
/// otherwise 0.
int selection_factor(int ell, int m);

/// The sum itself, sum_{s=0..m-1} exp(i 2 pi ell s / m), for cross-checking.
cplx selection_sum(int ell, int m);

/// Coefficient filter induced by an m-fold superposition: entries with
/// m | ell are scaled by m, all others vanish.
CoeffTable symmetric_filter_coeffs(const CoeffTable& coeffs, int m);

/// CSV "p,ell,re,im", ell ascending outer, p inner, 17 significant digits.
void write_coeff_csv(const std::string& path, const CoeffTable& coeffs);
/// CSV "ell,power", ell ascending over the basis range.
void write_spectrum_csv(const std::string& path, const OAMSpectrum& spectrum);

/// Batch evaluator: all basis values at one point in one pass. Shares the
/// radial recurrences across (p, ell), which is what makes decompose /
/// synthesize tractable on large grids.
class LgEvaluator {
public:
  explicit LgEvaluator(const LGBasisSpec& basis);
  const LGBasisSpec& basis() const { return basis_; }
  /// out must hold basis().count() values, indexed by basis().index().
  /// (x, y) is relative to the beam axis.
  void eval(double x, double y, cplx* out) const;

private:
  LGBasisSpec basis_;
  std::vector<double> norm_;  // [(p_max+1) * (max |ell| + 1)], norm for (p, |ell|)
};

}  // namespace sieve
