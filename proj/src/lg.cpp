#include "sieve/lg.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "sieve/errors.hpp"
#include "sieve/parallel.hpp"

namespace sieve {

namespace {
// caps keep the evaluator's radial recurrence on the stack
constexpr int kMaxP = 15;
constexpr int kMaxEllAbs = 256;

double lg_norm(double w0, int p, int a) {
  double logratio = std::lgamma(p + 1.0) - std::lgamma(p + a + 1.0);
  return std::sqrt(2.0 / std::numbers::pi * std::exp(logratio)) / w0;
}
}  // namespace

void LGBasisSpec::validate() const {
  if (!(w0 > 0)) throw PreconditionError("basis", "waist must be positive");
  if (p_max < 0 || p_max > kMaxP)
    throw PreconditionError("basis", "radial order out of range 0.." + std::to_string(kMaxP));
  if (ell_min > ell_max) throw PreconditionError("basis", "ell_min must not exceed ell_max");
  if (ell_min < -kMaxEllAbs || ell_max > kMaxEllAbs)
    throw PreconditionError("basis", "winding range limited to |ell| <= " + std::to_string(kMaxEllAbs));
  if (!(window > 0)) throw PreconditionError("basis", "expansion window must be positive");
}

cplx lg_eval(double x, double y, double w0, int p, int ell) {
  if (!(w0 > 0)) throw PreconditionError("basis", "waist must be positive");
  if (p < 0) throw PreconditionError("basis", "radial order must be non-negative");
  int a = std::abs(ell);
  double rho2 = x * x + y * y;
  double xl = 2.0 * rho2 / (w0 * w0);
  double t = std::sqrt(xl);  // sqrt(2) rho / w0
  double radial = lg_norm(w0, p, a) * std::pow(t, a) *
                  std::assoc_laguerre(static_cast<unsigned>(p), static_cast<unsigned>(a), xl) *
                  std::exp(-rho2 / (w0 * w0));
  double theta = std::atan2(y, x);
  return std::polar(radial, ell * theta);
}

LgEvaluator::LgEvaluator(const LGBasisSpec& basis) : basis_(basis) {
  basis.validate();
  int amax = std::max(std::abs(basis.ell_min), std::abs(basis.ell_max));
  norm_.resize(static_cast<size_t>(amax + 1) * (basis.p_max + 1));
  for (int a = 0; a <= amax; ++a)
    for (int p = 0; p <= basis.p_max; ++p)
      norm_[static_cast<size_t>(a) * (basis.p_max + 1) + p] = lg_norm(basis.w0, p, a);
}

void LgEvaluator::eval(double x, double y, cplx* out) const {
  const int pm = basis_.p_max;
  const int amax = std::max(std::abs(basis_.ell_min), std::abs(basis_.ell_max));
  double rho2 = x * x + y * y;
  double w2 = basis_.w0 * basis_.w0;
  double xl = 2.0 * rho2 / w2;
  double t = std::sqrt(xl);
  double g = std::exp(-rho2 / w2);
  double rho = std::sqrt(rho2);
  double ct = rho > 0 ? x / rho : 1.0;
  double st = rho > 0 ? y / rho : 0.0;

  cplx e1(ct, st);   // exp(i theta)
  cplx ep(1.0, 0);   // exp(i a theta), advanced per |ell|
  double tp = 1.0;   // t^a

  std::array<double, kMaxP + 1> lag;
  for (int a = 0; a <= amax; ++a) {
    lag[0] = 1.0;
    if (pm >= 1) lag[1] = 1.0 + a - xl;
    for (int p = 1; p < pm; ++p)
      lag[p + 1] = ((2.0 * p + 1.0 + a - xl) * lag[p] - (p + a) * lag[p - 1]) / (p + 1.0);
    const double* nrm = &norm_[static_cast<size_t>(a) * (pm + 1)];
    bool pos = basis_.has_ell(a);
    bool neg = a > 0 && basis_.has_ell(-a);
    if (pos || neg) {
      for (int p = 0; p <= pm; ++p) {
        double amp = nrm[p] * tp * lag[p] * g;
        if (pos) out[basis_.index(p, a)] = amp * ep;
        if (neg) out[basis_.index(p, -a)] = amp * std::conj(ep);
      }
    }
    tp *= t;
    ep *= e1;
  }
}

CoeffTable decompose(const ComplexField& f, const LGBasisSpec& basis) {
  basis.validate();
  f.grid.validate();
  const GridSpec& g = f.grid;
  if (std::max(g.pitch_x, g.pitch_y) > basis.w0 / 16.0)
    throw ResolutionError("grid pitch must be at most w0/16 for modal overlaps");
  double hw = basis.window / 2.0;
  if (hw > g.half_extent_x() || hw > g.half_extent_y())
    throw WindowError("expansion window exceeds the grid extent");

  std::vector<int> cols, rows;
  for (int i = 0; i < g.nx; ++i)
    if (std::fabs(g.x_at(i) - g.origin_x) <= hw) cols.push_back(i);
  for (int j = 0; j < g.ny; ++j)
    if (std::fabs(g.y_at(j) - g.origin_y) <= hw) rows.push_back(j);

  LgEvaluator ev(basis);
  const int nc = basis.count();
  const int nr = static_cast<int>(rows.size());
  std::vector<cplx> partials(static_cast<size_t>(nr) * nc);

  parallel_for_rows(nr, [&](int lo, int hi) {
    std::vector<cplx> bas(nc);
    for (int rr = lo; rr < hi; ++rr) {
      int j = rows[rr];
      double y = g.y_at(j) - g.origin_y;
      cplx* acc = &partials[static_cast<size_t>(rr) * nc];
      for (int i : cols) {
        double x = g.x_at(i) - g.origin_x;
        ev.eval(x, y, bas.data());
        cplx v = f.at(i, j);
        for (int k = 0; k < nc; ++k) acc[k] += v * std::conj(bas[k]);
      }
    }
  });

  // reduce row partials in fixed row order so the result does not depend on
  // the thread count
  CoeffTable out(basis);
  for (int rr = 0; rr < nr; ++rr) {
    const cplx* acc = &partials[static_cast<size_t>(rr) * nc];
    for (int k = 0; k < nc; ++k) out.c[k] += acc[k];
  }
  double dA = g.cell_area();
  for (cplx& v : out.c) v *= dA;
  return out;
}

ComplexField synthesize(const CoeffTable& coeffs, const GridSpec& grid) {
  coeffs.basis.validate();
  grid.validate();
  if (std::max(grid.pitch_x, grid.pitch_y) > coeffs.basis.w0 / 16.0)
    throw ResolutionError("grid pitch must be at most w0/16 to resolve the basis");
  LgEvaluator ev(coeffs.basis);
  const int nc = coeffs.basis.count();
  ComplexField f(grid);
  parallel_for_rows(grid.ny, [&](int jlo, int jhi) {
    std::vector<cplx> bas(nc);
    for (int j = jlo; j < jhi; ++j) {
      double y = grid.y_at(j) - grid.origin_y;
      for (int i = 0; i < grid.nx; ++i) {
        ev.eval(grid.x_at(i) - grid.origin_x, y, bas.data());
        cplx acc = 0;
        for (int k = 0; k < nc; ++k) acc += coeffs.c[k] * bas[k];
        f.at(i, j) = acc;
      }
    }
  });
  return f;
}

OAMSpectrum oam_spectrum(const CoeffTable& coeffs) {
  OAMSpectrum s;
  s.ell_min = coeffs.basis.ell_min;
  s.ell_max = coeffs.basis.ell_max;
  s.power.assign(coeffs.basis.n_ell(), 0.0);
  for (int ell = s.ell_min; ell <= s.ell_max; ++ell) {
    double pw = 0;
    for (int p = 0; p <= coeffs.basis.p_max; ++p) pw += std::norm(coeffs.at(p, ell));
    s.power[ell - s.ell_min] = pw;
    s.total_power += pw;
  }
  if (!(s.total_power > 0)) throw ZeroPowerError("all modal coefficients vanish");
  for (double& v : s.power) v /= s.total_power;
  return s;
}

int selection_factor(int ell, int m) {
  if (m < 1) throw PreconditionError("symmetry_order", "selection needs m >= 1");
  return ell % m == 0 ? m : 0;
}

cplx selection_sum(int ell, int m) {
  if (m < 1) throw PreconditionError("symmetry_order", "selection needs m >= 1");
  cplx acc = 0;
  for (int s = 0; s < m; ++s)
    acc += std::polar(1.0, 2.0 * std::numbers::pi * ell * s / m);
  return acc;
}

CoeffTable symmetric_filter_coeffs(const CoeffTable& coeffs, int m) {
  if (m < 1) throw PreconditionError("symmetry_order", "selection needs m >= 1");
  CoeffTable out(coeffs.basis);
  for (int ell = coeffs.basis.ell_min; ell <= coeffs.basis.ell_max; ++ell) {
    bool keep = ell % m == 0;
    for (int p = 0; p <= coeffs.basis.p_max; ++p)
      out.at(p, ell) = keep ? coeffs.at(p, ell) * static_cast<double>(m) : cplx{};
  }
  return out;
}

void write_coeff_csv(const std::string& path, const CoeffTable& coeffs) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "p,ell,re,im\n";
  char line[160];
  for (int ell = coeffs.basis.ell_min; ell <= coeffs.basis.ell_max; ++ell)
    for (int p = 0; p <= coeffs.basis.p_max; ++p) {
      const cplx& v = coeffs.at(p, ell);
      std::snprintf(line, sizeof line, "%d,%d,%.17g,%.17g\n", p, ell, v.real(), v.imag());
      os << line;
    }
  if (!os) throw IoError("short write: " + path);
}

void write_spectrum_csv(const std::string& path, const OAMSpectrum& spectrum) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "ell,power\n";
  char line[96];
  for (int ell = spectrum.ell_min; ell <= spectrum.ell_max; ++ell) {
    std::snprintf(line, sizeof line, "%d,%.17g\n", ell, spectrum.at(ell));
    os << line;
  }
  if (!os) throw IoError("short write: " + path);
}

}  // namespace sieve
