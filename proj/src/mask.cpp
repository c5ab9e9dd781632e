#include "sieve/mask.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <numeric>
#include <sstream>

#include "sieve/errors.hpp"

namespace sieve {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_basic(int n_points, double pinhole_radius, int handedness) {
  if (n_points < 1) throw BadMotifError("motif needs at least one point");
  if (!(pinhole_radius > 0)) throw BadMotifError("pinhole radius must be positive");
  if (handedness != 1 && handedness != -1) throw BadMotifError("handedness must be +1 or -1");
}

Pinhole polar_pinhole(double r, double theta, double radius) {
  return {r * std::cos(theta), r * std::sin(theta), radius};
}

}  // namespace

Motif explicit_motif(const std::vector<std::array<double, 2>>& points_m, double pinhole_radius) {
  if (points_m.empty()) throw BadMotifError("explicit motif needs at least one point");
  if (!(pinhole_radius > 0)) throw BadMotifError("pinhole radius must be positive");
  Motif m;
  m.spec.kind = MotifKind::explicit_points;
  m.spec.n_points = static_cast<int>(points_m.size());
  m.spec.pinhole_radius = pinhole_radius;
  m.spec.points = points_m;
  for (const auto& p : points_m) {
    if (!std::isfinite(p[0]) || !std::isfinite(p[1]))
      throw BadMotifError("explicit motif point is not finite");
    m.pinholes.push_back({p[0], p[1], pinhole_radius});
  }
  return m;
}

Motif log_spiral_motif(int n_points, double r0, double b, double theta_span,
                       double pinhole_radius, int handedness) {
  require_basic(n_points, pinhole_radius, handedness);
  if (!(r0 > 0)) throw BadMotifError("log spiral r0 must be positive");
  if (!(theta_span > 0)) throw BadMotifError("log spiral span must be positive");
  Motif m;
  m.spec.kind = MotifKind::logarithmic;
  m.spec.n_points = n_points;
  m.spec.pinhole_radius = pinhole_radius;
  m.spec.handedness = handedness;
  m.spec.r0 = r0;
  m.spec.b = b;
  m.spec.theta_span = theta_span;
  for (int n = 0; n < n_points; ++n) {
    double t = n_points > 1 ? n * theta_span / (n_points - 1) : 0.0;
    m.pinholes.push_back(polar_pinhole(r0 * std::exp(b * t), handedness * t, pinhole_radius));
  }
  return m;
}

Motif archimedean_motif(int n_points, double a, double b, double theta_span,
                        double pinhole_radius, int handedness) {
  require_basic(n_points, pinhole_radius, handedness);
  if (!(theta_span > 0)) throw BadMotifError("archimedean spiral span must be positive");
  Motif m;
  m.spec.kind = MotifKind::archimedean;
  m.spec.n_points = n_points;
  m.spec.pinhole_radius = pinhole_radius;
  m.spec.handedness = handedness;
  m.spec.r0 = a;
  m.spec.b = b;
  m.spec.theta_span = theta_span;
  for (int n = 0; n < n_points; ++n) {
    double t = n_points > 1 ? n * theta_span / (n_points - 1) : 0.0;
    double r = a + b * t;
    if (!(r > 0)) throw BadMotifError("archimedean radius must stay positive over the span");
    m.pinholes.push_back(polar_pinhole(r, handedness * t, pinhole_radius));
  }
  return m;
}

Motif fermat_motif(int n_points, double r0, int ell_design, double lambda, double z_design,
                   double pinhole_radius, int handedness) {
  require_basic(n_points, pinhole_radius, handedness);
  if (!(r0 > 0)) throw BadMotifError("fermat r0 must be positive");
  if (!(lambda > 0)) throw BadMotifError("fermat wavelength must be positive");
  if (!(z_design > 0)) throw BadMotifError("fermat design distance must be positive");
  Motif m;
  m.spec.kind = MotifKind::fermat;
  m.spec.n_points = n_points;
  m.spec.pinhole_radius = pinhole_radius;
  m.spec.handedness = handedness;
  m.spec.r0 = r0;
  m.spec.ell_design = ell_design;
  m.spec.lambda = lambda;
  m.spec.z_design = z_design;
  for (int n = 0; n < n_points; ++n) {
    double alpha = kTwoPi * n / n_points;
    double radicand =
        r0 * r0 + static_cast<double>(ell_design) * z_design * lambda * alpha / std::numbers::pi;
    if (!(radicand > 0))
      throw NegativeRadicandError("fermat radicand not positive at point " + std::to_string(n));
    m.pinholes.push_back(polar_pinhole(std::sqrt(radicand), handedness * alpha, pinhole_radius));
  }
  return m;
}

PinholeMask replicate(const Motif& motif, int m) {
  if (m < 1) throw BadMotifError("replication count must be >= 1");
  PinholeMask mask;
  mask.symmetry_m = m;
  mask.provenance.emplace_back(motif.spec, m);
  mask.pinholes.reserve(motif.pinholes.size() * m);
  for (int s = 0; s < m; ++s) {
    double c = std::cos(kTwoPi * s / m);
    double sn = std::sin(kTwoPi * s / m);
    for (const Pinhole& p : motif.pinholes) {
      if (s == 0)
        mask.pinholes.push_back(p);
      else
        mask.pinholes.push_back({c * p.x - sn * p.y, sn * p.x + c * p.y, p.radius});
    }
  }
  validate_no_overlap(mask);
  return mask;
}

PinholeMask compound_mask(const std::vector<PinholeMask>& parts) {
  if (parts.empty()) throw BadMotifError("compound mask needs at least one part");
  PinholeMask mask;
  mask.symmetry_m = 0;
  for (const PinholeMask& p : parts) {
    mask.symmetry_m = std::gcd(mask.symmetry_m, p.symmetry_m);
    mask.pinholes.insert(mask.pinholes.end(), p.pinholes.begin(), p.pinholes.end());
    mask.provenance.insert(mask.provenance.end(), p.provenance.begin(), p.provenance.end());
  }
  validate_no_overlap(mask);
  return mask;
}

PinholeMask mirror_mask(const PinholeMask& mask) {
  PinholeMask out = mask;
  for (Pinhole& p : out.pinholes) p.y = -p.y;
  return out;  // pairwise distances unchanged, no revalidation needed
}

ComplexField rasterize(const PinholeMask& mask, const GridSpec& grid) {
  grid.validate();
  if (mask.pinholes.empty()) return ComplexField(grid);
  double rmin = mask.pinholes[0].radius;
  for (const Pinhole& p : mask.pinholes) rmin = std::min(rmin, p.radius);
  if (std::max(grid.pitch_x, grid.pitch_y) > rmin / 4.0)
    throw ResolutionError("grid pitch must be at most a quarter of the smallest pinhole radius");

  double lo_x = grid.origin_x - grid.half_extent_x();
  double hi_x = grid.origin_x + (grid.nx - grid.nx / 2) * grid.pitch_x;
  double lo_y = grid.origin_y - grid.half_extent_y();
  double hi_y = grid.origin_y + (grid.ny - grid.ny / 2) * grid.pitch_y;
  for (const Pinhole& p : mask.pinholes) {
    if (p.x - p.radius < lo_x || p.x + p.radius > hi_x ||
        p.y - p.radius < lo_y || p.y + p.radius > hi_y)
      throw ExtentError("pinhole disc extends beyond the grid extent");
  }

  ComplexField f(grid);
  for (const Pinhole& p : mask.pinholes) {
    int i0 = std::max(0, static_cast<int>(std::ceil(grid.fi_of(p.x - p.radius))));
    int i1 = std::min(grid.nx - 1, static_cast<int>(std::floor(grid.fi_of(p.x + p.radius))));
    int j0 = std::max(0, static_cast<int>(std::ceil(grid.fj_of(p.y - p.radius))));
    int j1 = std::min(grid.ny - 1, static_cast<int>(std::floor(grid.fj_of(p.y + p.radius))));
    double r2 = p.radius * p.radius;
    for (int j = j0; j <= j1; ++j) {
      double dy = grid.y_at(j) - p.y;
      for (int i = i0; i <= i1; ++i) {
        double dx = grid.x_at(i) - p.x;
        if (dx * dx + dy * dy <= r2) f.at(i, j) = 1.0;
      }
    }
  }
  return f;
}

void write_pinhole_csv(const std::string& path, const PinholeMask& mask) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "x_m,y_m,radius_m\n";
  char line[128];
  for (const Pinhole& p : mask.pinholes) {
    std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", p.x, p.y, p.radius);
    os << line;
  }
  if (!os) throw IoError("short write: " + path);
}

PinholeMask read_pinhole_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open for reading: " + path);
  std::string line;
  if (!std::getline(is, line) || line != "x_m,y_m,radius_m")
    throw IoError("bad pinhole CSV header: " + path);
  PinholeMask mask;  // symmetry metadata is not stored; readers get symmetry_m = 1
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    Pinhole p;
    std::istringstream ss(line);
    char c1 = 0, c2 = 0;
    if (!(ss >> p.x >> c1 >> p.y >> c2 >> p.radius) || c1 != ',' || c2 != ',')
      throw IoError("bad pinhole CSV row: " + line);
    mask.pinholes.push_back(p);
  }
  return mask;
}

void validate_no_overlap(const PinholeMask& mask) {
  size_t n = mask.pinholes.size();
  for (size_t a = 0; a < n; ++a) {
    const Pinhole& pa = mask.pinholes[a];
    for (size_t b = a + 1; b < n; ++b) {
      const Pinhole& pb = mask.pinholes[b];
      double dx = pa.x - pb.x, dy = pa.y - pb.y;
      double lim = pa.radius + pb.radius;
      if (dx * dx + dy * dy < lim * lim)
        throw OverlapError("pinholes " + std::to_string(a) + " and " + std::to_string(b) +
                           " overlap");
    }
  }
}

}  // namespace sieve
