#include "sieve/field.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sieve/errors.hpp"
#include "sieve/parallel.hpp"

namespace sieve {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

cplx bilinear_at(const ComplexField& f, double x, double y) {
  const GridSpec& g = f.grid;
  double fi = g.fi_of(x);
  double fj = g.fj_of(y);
  // negated comparisons also reject NaN
  if (!(fi >= 0.0) || !(fj >= 0.0) || !(fi <= g.nx - 1) || !(fj <= g.ny - 1)) return {};
  int i0 = std::min(static_cast<int>(fi), g.nx - 2);
  int j0 = std::min(static_cast<int>(fj), g.ny - 2);
  double tx = fi - i0;
  double ty = fj - j0;
  const cplx* r0 = &f.samples[static_cast<size_t>(j0) * g.nx + i0];
  const cplx* r1 = r0 + g.nx;
  return (1.0 - ty) * ((1.0 - tx) * r0[0] + tx * r0[1]) +
         ty * ((1.0 - tx) * r1[0] + tx * r1[1]);
}

namespace {

// Right-angle rotations of square grids are pure index permutations; doing
// them exactly keeps covariance tests and m=4 superpositions noise-free.
bool snap_quarter_turns(const ComplexField& f, double angle, ComplexField& out) {
  const GridSpec& g = f.grid;
  if (g.nx != g.ny || g.pitch_x != g.pitch_y) return false;
  double q = angle / (0.5 * std::numbers::pi);
  double k = std::round(q);
  if (std::fabs(q - k) * (0.5 * std::numbers::pi) > 1e-12) return false;
  int r = static_cast<int>(std::fmod(k, 4.0));
  if (r < 0) r += 4;
  int cx = g.nx / 2, cy = g.ny / 2;
  for (int j = 0; j < g.ny; ++j) {
    int dj = j - cy;
    for (int i = 0; i < g.nx; ++i) {
      int di = i - cx;
      int si, sj;
      switch (r) {
        case 0: si = i; sj = j; break;
        case 1: si = cx - dj; sj = cy + di; break;  // source = R(+pi/2) * d
        case 2: si = cx - di; sj = cy - dj; break;
        default: si = cx + dj; sj = cy - di; break;
      }
      out.at(i, j) = (si >= 0 && si < g.nx && sj >= 0 && sj < g.ny) ? f.at(si, sj) : cplx{};
    }
  }
  return true;
}

}  // namespace

ComplexField rotate_field(const ComplexField& f, double angle) {
  f.grid.validate();
  ComplexField out(f.grid, f.z_label);
  if (snap_quarter_turns(f, angle, out)) return out;

  const GridSpec& g = f.grid;
  double c = std::cos(angle), s = std::sin(angle);
  int cx = g.nx / 2, cy = g.ny / 2;
  parallel_for_rows(g.ny, [&](int jlo, int jhi) {
    for (int j = jlo; j < jhi; ++j) {
      double dy = (j - cy) * g.pitch_y;
      for (int i = 0; i < g.nx; ++i) {
        double dx = (i - cx) * g.pitch_x;
        double sx = g.origin_x + c * dx - s * dy;
        double sy = g.origin_y + s * dx + c * dy;
        out.at(i, j) = bilinear_at(f, sx, sy);
      }
    }
  });
  return out;
}

ComplexField superpose_rotations(const ComplexField& f, int m) {
  if (m < 1) throw PreconditionError("symmetry_order", "superpose_rotations needs m >= 1");
  ComplexField acc = f;  // s = 0 term, untouched
  for (int s = 1; s < m; ++s) {
    ComplexField r = rotate_field(f, kTwoPi * s / m);
    for (size_t k = 0; k < acc.samples.size(); ++k) acc.samples[k] += r.samples[k];
  }
  return acc;
}

namespace {

std::vector<cplx> circle_samples(const ComplexField& f, double radius, int n_samples) {
  if (!(radius > 0)) throw PreconditionError("radius", "circle radius must be positive");
  if (n_samples < 8) throw PreconditionError("samples", "need at least 8 circle samples");
  std::vector<cplx> z(n_samples);
  for (int k = 0; k < n_samples; ++k) {
    double th = kTwoPi * k / n_samples;
    z[k] = bilinear_at(f, f.grid.origin_x + radius * std::cos(th),
                       f.grid.origin_y + radius * std::sin(th));
  }
  return z;
}

}  // namespace

WindingResult phase_winding(const ComplexField& f, double radius, int n_samples) {
  std::vector<cplx> z = circle_samples(f, radius, n_samples);
  double amax = 0, amin = std::numeric_limits<double>::infinity();
  for (const cplx& v : z) {
    double a = std::abs(v);
    amax = std::max(amax, a);
    amin = std::min(amin, a);
  }
  if (!(amax > 0) || amin <= 1e-6 * amax)
    throw AmplitudeTooLowError("field nearly vanishes on the winding circle");

  double total = 0;
  for (int k = 0; k < n_samples; ++k) {
    cplx w = z[(k + 1) % n_samples] * std::conj(z[k]);
    double step = std::atan2(w.imag(), w.real());
    if (std::fabs(step) > 0.5 * std::numbers::pi)
      throw UndersampledError("adjacent phase step exceeds pi/2; raise n_samples");
    total += step;
  }
  double turns = total / kTwoPi;
  WindingResult r;
  r.winding = static_cast<int>(std::llround(turns));
  r.residual = std::fabs(turns - r.winding);
  if (r.residual >= 0.25)
    throw UndersampledError("winding rounding residual >= 0.25; raise n_samples");
  return r;
}

int angular_peak_count(const ComplexField& f, double radius, int n_samples) {
  std::vector<cplx> z = circle_samples(f, radius, n_samples);
  std::vector<double> in(n_samples);
  for (int k = 0; k < n_samples; ++k) in[k] = std::norm(z[k]);

  bool constant = std::all_of(in.begin(), in.end(), [&](double v) { return v == in[0]; });
  if (constant) return 0;

  // run-length encode around the circle so plateaus count once
  int start = 0;
  while (in[start] == in[(start + n_samples - 1) % n_samples]) ++start;  // terminates: not constant
  std::vector<double> runs;
  double cur = in[start];
  runs.push_back(cur);
  for (int t = 1; t < n_samples; ++t) {
    double v = in[(start + t) % n_samples];
    if (v != cur) {
      runs.push_back(v);
      cur = v;
    }
  }
  int nr = static_cast<int>(runs.size());
  int peaks = 0;
  for (int k = 0; k < nr; ++k) {
    double prev = runs[(k + nr - 1) % nr];
    double next = runs[(k + 1) % nr];
    if (runs[k] > prev && runs[k] > next) ++peaks;
  }
  // fewer than 4 samples per peak cannot support the count it produced
  if (peaks > n_samples / 4)
    throw UndersampledError("peak count needs at least 4 samples per peak");
  return peaks;
}

double field_power(const ComplexField& f) {
  double s = 0;
  for (const cplx& v : f.samples) s += std::norm(v);
  return s * f.grid.cell_area();
}

RadialProfile radial_profile(const ComplexField& f, int n_bins) {
  if (n_bins < 1) throw PreconditionError("bins", "radial_profile needs n_bins >= 1");
  const GridSpec& g = f.grid;
  double rmax = std::min(g.half_extent_x(), g.half_extent_y());
  RadialProfile prof;
  prof.bin_width = rmax / n_bins;
  prof.mean_intensity.assign(n_bins, 0.0);
  std::vector<long> counts(n_bins, 0);
  for (int j = 0; j < g.ny; ++j) {
    double dy = (j - g.ny / 2) * g.pitch_y;
    for (int i = 0; i < g.nx; ++i) {
      double dx = (i - g.nx / 2) * g.pitch_x;
      double r = std::hypot(dx, dy);
      if (r >= rmax) continue;
      int b = std::min(static_cast<int>(r / prof.bin_width), n_bins - 1);
      prof.mean_intensity[b] += std::norm(f.at(i, j));
      ++counts[b];
    }
  }
  for (int b = 0; b < n_bins; ++b)
    if (counts[b] > 0) prof.mean_intensity[b] /= counts[b];
  return prof;
}

}  // namespace sieve
