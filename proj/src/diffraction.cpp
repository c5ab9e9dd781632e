#include "sieve/diffraction.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "sieve/errors.hpp"
#include "sieve/parallel.hpp"
#include "sieve/special.hpp"

namespace sieve {

namespace {

constexpr double kPi = std::numbers::pi;

struct AxisGeom {
  double z = 0;    // effective free-space distance along this axis
  double mag = 1;  // observation -> effective coordinate scale
};

struct Resolved {
  AxisGeom x, y;
  bool conjugate = false;  // negative physical chirp: conjugate the summed field
  double orientation = 0;  // principal-axes rotation, counterclockwise
  double z_label = 0;
};

void check_common(const OpticalSetup& setup, const PinholeMask& mask) {
  if (!(setup.lambda > 0))
    throw PreconditionError("wavelength", "wavelength must be positive");
  if (mask.pinholes.empty())
    throw PreconditionError("mask", "propagation needs at least one pinhole");
}

AxisGeom lens_axis(double f, double delta_f) {
  if (!(f > 0)) throw PreconditionError("focal_length", "focal length must be positive");
  if (delta_f == 0)
    throw PreconditionError("focal_plane", "observation exactly in the focal plane is excluded");
  return {f * f / std::fabs(delta_f), -f / delta_f};
}

Resolved resolve_isotropic(const OpticalSetup& setup) {
  Resolved r;
  if (const auto* fs = std::get_if<FreeSpaceModel>(&setup.model)) {
    if (!(fs->z > 0)) throw PreconditionError("distance", "propagation distance must be positive");
    r.x = r.y = {fs->z, 1.0};
    r.z_label = fs->z;
  } else {
    const auto& lm = std::get<LensModel>(setup.model);
    r.x = r.y = lens_axis(lm.f, lm.delta_f);
    r.conjugate = lm.delta_f > 0;
    r.z_label = lm.delta_f;
  }
  return r;
}

Resolved resolve_astigmatic(const OpticalSetup& setup) {
  if (!setup.astig)
    throw PreconditionError("astig", "astigmatic propagation needs astig parameters");
  const AstigParams& ap = *setup.astig;
  if (!(ap.orientation >= 0) || ap.orientation >= kPi)
    throw PreconditionError("astig", "astig orientation must lie in [0, pi)");
  Resolved r;
  r.orientation = ap.orientation;
  if (const auto* fs = std::get_if<FreeSpaceModel>(&setup.model)) {
    double zx = fs->z + ap.delta_f_x;
    double zy = fs->z + ap.delta_f_y;
    if (!(zx > 0) || !(zy > 0))
      throw PreconditionError("distance", "per-axis distance must stay positive");
    r.x = {zx, 1.0};
    r.y = {zy, 1.0};
    r.z_label = fs->z;
  } else {
    const auto& lm = std::get<LensModel>(setup.model);
    if (ap.delta_f_x * ap.delta_f_y <= 0)
      throw PreconditionError("astig", "per-axis defocus must share one sign");
    r.x = lens_axis(lm.f, ap.delta_f_x);
    r.y = lens_axis(lm.f, ap.delta_f_y);
    r.conjugate = ap.delta_f_x > 0;
    r.z_label = 0.5 * (ap.delta_f_x + ap.delta_f_y);
  }
  return r;
}

void check_fresnel_gate(const PinholeMask& mask, double lambda, double z_min) {
  for (const Pinhole& p : mask.pinholes) {
    if (!(p.radius * p.radius / (lambda * z_min) < 0.1))
      throw FresnelNumberError(
          "pinhole Fresnel number a^2/(lambda z) must stay below 0.1; use the quadrature oracle");
  }
}

/// Shared per-pinhole summation. The kernel is the forward (diverging)
/// quadratic phase; `conjugate` flips the whole field afterwards, which is how
/// observation past the lens focus enters. Pinholes are summed in mask order,
/// so results are bitwise reproducible for any thread count.
ComplexField sum_pinholes(const PinholeMask& mask, const OpticalSetup& setup,
                          const GridSpec& obs, const Resolved& geo, bool with_jinc) {
  obs.validate();
  const double lambda = setup.lambda;
  const double k = 2.0 * kPi / lambda;
  const size_t n = mask.pinholes.size();

  // principal frame: rotate observation and mask coordinates by -orientation
  const double co = std::cos(geo.orientation);
  const double so = std::sin(geo.orientation);

  std::vector<double> cx(n), cy(n), amp(n), ca(n);
  const double zgeo = std::sqrt(geo.x.z * geo.y.z);
  for (size_t p = 0; p < n; ++p) {
    const Pinhole& h = mask.pinholes[p];
    cx[p] = co * h.x + so * h.y;
    cy[p] = -so * h.x + co * h.y;
    amp[p] = kPi * h.radius * h.radius / (lambda * zgeo);
    ca[p] = k * h.radius;
  }
  const double hx = 0.5 * k / geo.x.z;
  const double hy = 0.5 * k / geo.y.z;
  const double izx = 1.0 / geo.x.z;
  const double izy = 1.0 / geo.y.z;

  ComplexField out(obs, geo.z_label);
  parallel_for_rows(obs.ny, [&](int jlo, int jhi) {
    for (int j = jlo; j < jhi; ++j) {
      double uy = obs.y_at(j);
      for (int i = 0; i < obs.nx; ++i) {
        double ux = obs.x_at(i);
        // observation point in principal-frame effective coordinates
        double ex = geo.x.mag * (co * ux + so * uy);
        double ey = geo.y.mag * (-so * ux + co * uy);
        double re = 0, im = 0;
        for (size_t p = 0; p < n; ++p) {
          double dx = ex - cx[p];
          double dy = ey - cy[p];
          double ph = hx * dx * dx + hy * dy * dy;
          double w = amp[p];
          if (with_jinc) {
            double qx = dx * izx, qy = dy * izy;
            w *= jinc(ca[p] * std::sqrt(qx * qx + qy * qy));
          }
          double s = std::sin(ph), c = std::cos(ph);
          re += w * s;  // exp(i ph)/i = sin(ph) - i cos(ph)
          im -= w * c;
        }
        out.at(i, j) = geo.conjugate ? cplx(re, -im) : cplx(re, im);
      }
    }
  });
  return out;
}

}  // namespace

EffectiveGeometry effective_geometry(const OpticalSetup& setup) {
  if (!(setup.lambda > 0))
    throw PreconditionError("wavelength", "wavelength must be positive");
  EffectiveGeometry g;
  if (const auto* fs = std::get_if<FreeSpaceModel>(&setup.model)) {
    if (!(fs->z > 0)) throw PreconditionError("distance", "propagation distance must be positive");
    g.z_eff = fs->z;
    g.mag = 1.0;
    g.chirp_sign = +1;
  } else {
    const auto& lm = std::get<LensModel>(setup.model);
    AxisGeom ax = lens_axis(lm.f, lm.delta_f);
    g.z_eff = ax.z;
    g.mag = ax.mag;
    g.chirp_sign = lm.delta_f > 0 ? +1 : -1;
  }
  return g;
}

ComplexField propagate_sieve(const PinholeMask& mask, const OpticalSetup& setup,
                             const GridSpec& obs) {
  check_common(setup, mask);
  Resolved geo = resolve_isotropic(setup);
  check_fresnel_gate(mask, setup.lambda, geo.x.z);
  return sum_pinholes(mask, setup, obs, geo, true);
}

ComplexField propagate_oracle(const PinholeMask& mask, const OpticalSetup& setup,
                              const GridSpec& obs, int q_radial) {
  check_common(setup, mask);
  if (q_radial < 1) throw PreconditionError("quadrature", "q_radial must be >= 1");
  Resolved geo = resolve_isotropic(setup);
  obs.validate();

  // flatten every pinhole into quadrature nodes: ring r = 0..q-1 carries
  // 6r+1 nodes sharing the exact annulus area between boundaries
  // a*(2r+1)/(2q-1), so weights sum to pi a^2 per pinhole. Outer rings sit at
  // the annulus midpoint in rho^2 (exact for integrands linear in rho^2);
  // ring 0 is the single center node.
  std::vector<double> nx_, ny_, nw_;
  for (const Pinhole& p : mask.pinholes) {
    double denom = 2.0 * q_radial - 1.0;
    double beta_prev = 0;
    for (int r = 0; r < q_radial; ++r) {
      double beta = p.radius * (2.0 * r + 1.0) / denom;
      double area = kPi * (beta * beta - beta_prev * beta_prev);
      int nn = 6 * r + 1;
      double rho = r == 0 ? 0.0 : std::sqrt(0.5 * (beta_prev * beta_prev + beta * beta));
      beta_prev = beta;
      double w = area / nn;
      double off = (r % 2 == 1) ? kPi / nn : 0.0;  // stagger odd rings
      for (int t = 0; t < nn; ++t) {
        double th = 2.0 * kPi * t / nn + off;
        nx_.push_back(p.x + rho * std::cos(th));
        ny_.push_back(p.y + rho * std::sin(th));
        nw_.push_back(w / (setup.lambda * geo.x.z));
      }
    }
  }

  const double k = 2.0 * kPi / setup.lambda;
  const double h = 0.5 * k / geo.x.z;
  const size_t nn = nx_.size();
  ComplexField out(obs, geo.z_label);
  parallel_for_rows(obs.ny, [&](int jlo, int jhi) {
    for (int j = jlo; j < jhi; ++j) {
      double ey = geo.y.mag * obs.y_at(j);
      for (int i = 0; i < obs.nx; ++i) {
        double ex = geo.x.mag * obs.x_at(i);
        double re = 0, im = 0;
        for (size_t p = 0; p < nn; ++p) {
          double dx = ex - nx_[p];
          double dy = ey - ny_[p];
          double ph = h * (dx * dx + dy * dy);
          re += nw_[p] * std::sin(ph);
          im -= nw_[p] * std::cos(ph);
        }
        out.at(i, j) = geo.conjugate ? cplx(re, -im) : cplx(re, im);
      }
    }
  });
  return out;
}

ComplexField astigmatic_propagate(const PinholeMask& mask, const OpticalSetup& setup,
                                  const GridSpec& obs) {
  check_common(setup, mask);
  if (!setup.astig)
    throw PreconditionError("astig", "astigmatic propagation needs astig parameters");
  const AstigParams& ap = *setup.astig;
  if (ap.delta_f_x == ap.delta_f_y) {
    // isotropic limit: delegate so the result is bitwise identical to the
    // plain propagation
    OpticalSetup iso = setup;
    iso.astig.reset();
    if (const auto* fs = std::get_if<FreeSpaceModel>(&setup.model))
      iso.model = FreeSpaceModel{fs->z + ap.delta_f_x};
    else
      iso.model = LensModel{std::get<LensModel>(setup.model).f, ap.delta_f_x};
    return propagate_sieve(mask, iso, obs);
  }
  Resolved geo = resolve_astigmatic(setup);
  check_fresnel_gate(mask, setup.lambda, std::min(geo.x.z, geo.y.z));
  return sum_pinholes(mask, setup, obs, geo, true);
}

ComplexField fresnel_propagate_field(const ComplexField& in, double lambda, double z_x,
                                     double z_y, const GridSpec& obs) {
  in.grid.validate();
  obs.validate();
  if (!(lambda > 0)) throw PreconditionError("wavelength", "wavelength must be positive");
  if (!(z_x > 0) || !(z_y > 0))
    throw PreconditionError("distance", "propagation distances must be positive");

  const double k = 2.0 * kPi / lambda;
  const GridSpec& gi = in.grid;

  // separable kernels: out = pref * My . (Mx . in^T)^T with
  // M_axis[a][b] = exp(i k (U_a - x_b)^2 / (2 z)) * pitch
  std::vector<cplx> Mx(static_cast<size_t>(obs.nx) * gi.nx);
  for (int a = 0; a < obs.nx; ++a) {
    double u = obs.x_at(a);
    for (int b = 0; b < gi.nx; ++b) {
      double d = u - gi.x_at(b);
      Mx[static_cast<size_t>(a) * gi.nx + b] =
          std::polar(gi.pitch_x, 0.5 * k * d * d / z_x);
    }
  }
  std::vector<cplx> My(static_cast<size_t>(obs.ny) * gi.ny);
  for (int c = 0; c < obs.ny; ++c) {
    double u = obs.y_at(c);
    for (int b = 0; b < gi.ny; ++b) {
      double d = u - gi.y_at(b);
      My[static_cast<size_t>(c) * gi.ny + b] =
          std::polar(gi.pitch_y, 0.5 * k * d * d / z_y);
    }
  }

  // T[a][jy] = sum_b Mx[a][b] * in(b, jy)
  std::vector<cplx> T(static_cast<size_t>(obs.nx) * gi.ny);
  parallel_for_rows(obs.nx, [&](int alo, int ahi) {
    for (int a = alo; a < ahi; ++a) {
      const cplx* mrow = &Mx[static_cast<size_t>(a) * gi.nx];
      cplx* trow = &T[static_cast<size_t>(a) * gi.ny];
      for (int jy = 0; jy < gi.ny; ++jy) {
        cplx acc = 0;
        const cplx* frow = &in.samples[static_cast<size_t>(jy) * gi.nx];
        for (int b = 0; b < gi.nx; ++b) acc += mrow[b] * frow[b];
        trow[jy] = acc;
      }
    }
  });

  const cplx pref = cplx(0, -1) / (lambda * std::sqrt(z_x * z_y));  // 1/(i lambda sqrt(zx zy))
  ComplexField out(obs, in.z_label + 0.5 * (z_x + z_y));
  parallel_for_rows(obs.ny, [&](int clo, int chi) {
    for (int c = clo; c < chi; ++c) {
      const cplx* mrow = &My[static_cast<size_t>(c) * gi.ny];
      for (int a = 0; a < obs.nx; ++a) {
        const cplx* trow = &T[static_cast<size_t>(a) * gi.ny];
        cplx acc = 0;
        for (int b = 0; b < gi.ny; ++b) acc += mrow[b] * trow[b];
        out.at(a, c) = pref * acc;
      }
    }
  });
  return out;
}

int count_dark_stripes(const ComplexField& f, double orientation) {
  f.grid.validate();
  const GridSpec& g = f.grid;

  double wsum = 0, cx = 0, cy = 0;
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) {
      double w = std::norm(f.at(i, j));
      wsum += w;
      cx += w * g.x_at(i);
      cy += w * g.y_at(j);
    }
  if (!(wsum > 0)) throw NoPatternError("field carries no intensity");
  cx /= wsum;
  cy /= wsum;

  double dirx = std::cos(orientation), diry = std::sin(orientation);
  double half = std::hypot(g.half_extent_x(), g.half_extent_y());
  double step = 0.5 * std::min(g.pitch_x, g.pitch_y);
  int nhalf = static_cast<int>(std::ceil(half / step));
  std::vector<double> prof(2 * nhalf + 1);
  for (int t = -nhalf; t <= nhalf; ++t) {
    cplx v = bilinear_at(f, cx + t * step * dirx, cy + t * step * diry);
    prof[t + nhalf] = std::norm(v);
  }

  // merge exact plateaus, then find strict maxima above a noise floor
  std::vector<double> runs;
  std::vector<int> run_pos;
  for (size_t t = 0; t < prof.size(); ++t)
    if (runs.empty() || prof[t] != runs.back()) {
      runs.push_back(prof[t]);
      run_pos.push_back(static_cast<int>(t));
    }
  double pmax = *std::max_element(prof.begin(), prof.end());
  if (!(pmax > 0)) throw NoPatternError("line profile is identically zero");

  std::vector<int> maxima;  // indices into runs
  for (size_t r = 1; r + 1 < runs.size(); ++r)
    if (runs[r] > runs[r - 1] && runs[r] > runs[r + 1] && runs[r] > 1e-6 * pmax)
      maxima.push_back(static_cast<int>(r));
  if (maxima.empty()) throw NoPatternError("line profile has no usable maximum");

  int dark = 0;
  for (size_t m = 0; m + 1 < maxima.size(); ++m) {
    double vmin = runs[maxima[m]];
    for (int r = maxima[m] + 1; r < maxima[m + 1]; ++r) vmin = std::min(vmin, runs[r]);
    if (vmin < 0.2 * std::min(runs[maxima[m]], runs[maxima[m + 1]])) ++dark;
  }
  return dark;
}

ZStackResult z_stack(const PinholeMask& mask, double lambda, double f,
                     const std::vector<double>& delta_fs, const GridSpec& obs,
                     double rms_cap_radius) {
  if (delta_fs.empty()) throw PreconditionError("slices", "z_stack needs at least one slice");
  if (delta_fs.size() > 1) {
    double d0 = delta_fs[1] - delta_fs[0];
    for (size_t s = 1; s < delta_fs.size(); ++s) {
      double d = delta_fs[s] - delta_fs[s - 1];
      if (d == 0 || d * d0 < 0)
        throw PreconditionError("slices", "slice list must be strictly monotone");
    }
  }
  obs.validate();

  ZStackResult res;
  res.ny = obs.ny;
  res.delta_f = delta_fs;
  res.ring_rms.reserve(delta_fs.size());
  res.slices.reserve(delta_fs.size());
  res.yz.resize(delta_fs.size() * static_cast<size_t>(obs.ny));

  double cap = rms_cap_radius > 0
                   ? rms_cap_radius
                   : std::min(obs.half_extent_x(), obs.half_extent_y());

  for (size_t s = 0; s < delta_fs.size(); ++s) {
    OpticalSetup setup{lambda, LensModel{f, delta_fs[s]}, std::nullopt};
    ComplexField fld = propagate_sieve(mask, setup, obs);

    // At this plane the slice family reduces to a pure pupil-defocus family
    // at a fixed transverse mapping (mag/z = 1/f for every slice), so
    // observation-plane moments over a fixed disc are symmetric about the
    // design focus and bottom out at the waist.
    double num = 0, den = 0;
    for (int j = 0; j < obs.ny; ++j) {
      double y = obs.y_at(j);
      for (int i = 0; i < obs.nx; ++i) {
        double x = obs.x_at(i);
        double r2 = x * x + y * y;
        if (r2 > cap * cap) continue;
        double w = std::norm(fld.at(i, j));
        num += w * r2;
        den += w;
      }
    }
    res.ring_rms.push_back(den > 0 ? std::sqrt(num / den) : 0.0);

    int ic = obs.nx / 2;
    for (int j = 0; j < obs.ny; ++j)
      res.yz[s * static_cast<size_t>(obs.ny) + j] = std::norm(fld.at(ic, j));
    res.slices.push_back(std::move(fld));
  }
  return res;
}

}  // namespace sieve
