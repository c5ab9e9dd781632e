#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numbers>

#include <doctest.h>

#include "sieve/errors.hpp"
#include "sieve/mask.hpp"

#include "helpers.hpp"

using namespace sieve;
using sieve::test::square_grid;

namespace {
constexpr double kPi = std::numbers::pi;

double radius(const Pinhole& p) { return std::hypot(p.x, p.y); }

bool sets_match(const std::vector<Pinhole>& a, const std::vector<Pinhole>& b, double tol) {
  if (a.size() != b.size()) return false;
  for (const Pinhole& p : a) {
    bool found = false;
    for (const Pinhole& q : b)
      if (std::hypot(p.x - q.x, p.y - q.y) <= tol) {
        found = true;
        break;
      }
    if (!found) return false;
  }
  return true;
}

std::vector<Pinhole> rotated(const std::vector<Pinhole>& ps, double ang) {
  std::vector<Pinhole> out = ps;
  double c = std::cos(ang), s = std::sin(ang);
  for (Pinhole& p : out) {
    double x = c * p.x - s * p.y, y = s * p.x + c * p.y;
    p.x = x;
    p.y = y;
  }
  return out;
}
}  // namespace

TEST_CASE("fermat motif radii follow the design formula") {
  // ell * z * lambda / pi = 1 um^2, so r1 = sqrt(1 + pi/2) um at alpha = pi/2
  Motif m = fermat_motif(4, 1e-6, 1, 1e-6, kPi * 1e-6, 1e-8, +1);
  REQUIRE(m.pinholes.size() == 4);
  CHECK(m.pinholes[0].x == doctest::Approx(1e-6).epsilon(1e-14));
  CHECK(m.pinholes[0].y == 0.0);
  double r1 = std::sqrt(1.0 + kPi / 2.0) * 1e-6;
  CHECK(radius(m.pinholes[1]) == doctest::Approx(r1).epsilon(1e-12));
  // handedness +1 puts point 1 at +pi/2
  CHECK(m.pinholes[1].y > 0);
  CHECK(std::fabs(m.pinholes[1].x) < 1e-18);
}

TEST_CASE("fermat radii strictly increase for positive ell * z") {
  Motif m = fermat_motif(20, 5e-6, 5, 2.5e-12, 6.696428571428571, 3e-7, -1);
  for (size_t n = 1; n < m.pinholes.size(); ++n)
    CHECK(radius(m.pinholes[n]) > radius(m.pinholes[n - 1]));
}

TEST_CASE("fermat rejects a negative radicand") {
  // ell < 0 shrinks the radicand with alpha; big z drives it negative
  CHECK_THROWS_AS(fermat_motif(8, 1e-6, -5, 1e-6, 1.0, 1e-8, +1), NegativeRadicandError);
}

TEST_CASE("log spiral radii") {
  Motif m = log_spiral_motif(3, 1e-6, 0.1, kPi, 1e-8, +1);
  CHECK(radius(m.pinholes[0]) == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(radius(m.pinholes[1]) == doctest::Approx(1e-6 * std::exp(0.05 * kPi)).epsilon(1e-12));
  CHECK(radius(m.pinholes[2]) == doctest::Approx(1e-6 * std::exp(0.1 * kPi)).epsilon(1e-12));
  // b = 0 degenerates to an arc
  Motif arc = log_spiral_motif(5, 2e-6, 0.0, kPi, 1e-8, +1);
  for (const Pinhole& p : arc.pinholes) CHECK(radius(p) == doctest::Approx(2e-6).epsilon(1e-12));
}

TEST_CASE("archimedean radii") {
  Motif m = archimedean_motif(3, 1e-6, 5e-7, kPi, 1e-8, +1);
  CHECK(radius(m.pinholes[0]) == doctest::Approx(1e-6).epsilon(1e-12));
  CHECK(radius(m.pinholes[1]) == doctest::Approx(1e-6 + 5e-7 * kPi / 2).epsilon(1e-12));
  CHECK(radius(m.pinholes[2]) == doctest::Approx(1e-6 + 5e-7 * kPi).epsilon(1e-12));
}

TEST_CASE("handedness mirrors the motif about the x axis") {
  Motif plus = log_spiral_motif(7, 1e-6, 0.2, 2.0, 1e-8, +1);
  Motif minus = log_spiral_motif(7, 1e-6, 0.2, 2.0, 1e-8, -1);
  for (size_t n = 0; n < plus.pinholes.size(); ++n) {
    CHECK(minus.pinholes[n].x == doctest::Approx(plus.pinholes[n].x).epsilon(1e-14));
    CHECK(minus.pinholes[n].y == doctest::Approx(-plus.pinholes[n].y).epsilon(1e-14));
  }
}

TEST_CASE("replicate places m rotated copies and records the symmetry") {
  Motif one = explicit_motif({{2e-6, 0.0}}, 1e-7);
  PinholeMask m4 = replicate(one, 4);
  REQUIRE(m4.pinholes.size() == 4);
  CHECK(m4.symmetry_m == 4);
  CHECK(sets_match(m4.pinholes, rotated(m4.pinholes, kPi / 2), 1e-12));

  PinholeMask m1 = replicate(one, 1);
  CHECK(m1.pinholes.size() == 1);
  CHECK(m1.symmetry_m == 1);
}

TEST_CASE("replicated fermat mask is rotation invariant to 1e-12") {
  Motif arm = fermat_motif(20, 5e-6, 5, 2.5e-12, 6.696428571428571, 3e-7, -1);
  PinholeMask mask = replicate(arm, 5);
  CHECK(mask.pinholes.size() == 100);
  for (int k = 1; k < 5; ++k)
    CHECK(sets_match(mask.pinholes, rotated(mask.pinholes, 2 * kPi * k / 5), 1e-12));
}

TEST_CASE("overlap is a construction error") {
  Motif two = explicit_motif({{0.0, 0.0}, {1e-8, 0.0}}, 1e-7);
  CHECK_THROWS_AS(replicate(two, 1), OverlapError);
  // on-axis pinhole collides with its own rotated copies
  Motif axis = explicit_motif({{1e-8, 0.0}}, 1e-7);
  CHECK_THROWS_AS(replicate(axis, 3), OverlapError);
}

TEST_CASE("explicit motif rejects an empty point list") {
  CHECK_THROWS_AS(explicit_motif({}, 1e-7), BadMotifError);
}

TEST_CASE("tangent pinholes are allowed") {
  Motif two = explicit_motif({{0.0, 0.0}, {2e-7, 0.0}}, 1e-7);
  CHECK_NOTHROW(replicate(two, 1));
}

TEST_CASE("compound mask takes the gcd of part symmetries") {
  PinholeMask p4 = replicate(explicit_motif({{2e-6, 0.0}}, 1e-8), 4);
  PinholeMask p6 = replicate(explicit_motif({{4e-6, 0.0}}, 1e-8), 6);
  PinholeMask c = compound_mask({p4, p6});
  CHECK(c.pinholes.size() == 10);
  CHECK(c.symmetry_m == 2);
  PinholeMask alone = compound_mask({p4});
  CHECK(alone.symmetry_m == 4);
  CHECK(alone.pinholes.size() == 4);
}

TEST_CASE("mirror_mask flips y and is an involution") {
  Motif arm = fermat_motif(6, 1e-6, 2, 1e-6, 1.0, 1e-8, +1);
  PinholeMask m = replicate(arm, 2);
  PinholeMask mm = mirror_mask(m);
  for (size_t k = 0; k < m.pinholes.size(); ++k) {
    CHECK(mm.pinholes[k].x == m.pinholes[k].x);
    CHECK(mm.pinholes[k].y == -m.pinholes[k].y);
  }
  PinholeMask back = mirror_mask(mm);
  for (size_t k = 0; k < m.pinholes.size(); ++k) {
    CHECK(back.pinholes[k].x == m.pinholes[k].x);
    CHECK(back.pinholes[k].y == m.pinholes[k].y);
  }
  CHECK(mm.symmetry_m == m.symmetry_m);
}

TEST_CASE("mirror commutes with replicate as a point set") {
  Motif arm = fermat_motif(5, 2e-6, 3, 1e-6, 1.0, 5e-8, +1);
  Motif marm = arm;
  for (Pinhole& p : marm.pinholes) p.y = -p.y;
  PinholeMask a = mirror_mask(replicate(arm, 5));
  PinholeMask b = replicate(marm, 5);
  CHECK(sets_match(a.pinholes, b.pinholes, 1e-12));
}

TEST_CASE("rasterize fills the disc area") {
  Motif one = explicit_motif({{0.0, 0.0}}, 3e-7);
  PinholeMask m = replicate(one, 1);
  double pitch = 3e-7 / 16;
  GridSpec g = square_grid(128, 128 * pitch);
  ComplexField f = rasterize(m, g);
  long filled = 0;
  for (const cplx& v : f.samples) {
    CHECK((v == cplx{0.0, 0.0} || v == cplx{1.0, 0.0}));
    if (v != cplx{}) ++filled;
  }
  double expect = kPi * 3e-7 * 3e-7 / (pitch * pitch);
  CHECK(std::fabs(filled - expect) < 0.02 * expect);
}

TEST_CASE("rasterize preconditions") {
  PinholeMask m = replicate(explicit_motif({{0.0, 0.0}}, 1e-7), 1);
  CHECK_THROWS_AS(rasterize(m, square_grid(16, 16 * 1e-7)), ResolutionError);  // pitch = 4a
  PinholeMask off = replicate(explicit_motif({{5e-6, 0.0}}, 1e-7), 1);
  CHECK_THROWS_AS(rasterize(off, square_grid(64, 64 * 2.5e-8)), ExtentError);
  ComplexField z = rasterize(PinholeMask{}, square_grid(16, 1.6e-6));
  for (const cplx& v : z.samples) CHECK(v == cplx{});
}

TEST_CASE("pinhole CSV round-trips exactly") {
  Motif arm = fermat_motif(9, 3e-6, 4, 2.5e-12, 2.0, 3e-7, -1);
  PinholeMask m = replicate(arm, 3);
  std::string path = (std::filesystem::temp_directory_path() / "mask_rt.csv").string();
  write_pinhole_csv(path, m);
  PinholeMask back = read_pinhole_csv(path);
  REQUIRE(back.pinholes.size() == m.pinholes.size());
  for (size_t k = 0; k < m.pinholes.size(); ++k) {
    CHECK(back.pinholes[k].x == m.pinholes[k].x);
    CHECK(back.pinholes[k].y == m.pinholes[k].y);
    CHECK(back.pinholes[k].radius == m.pinholes[k].radius);
  }
  CHECK(back.symmetry_m == 1);  // CSV carries no provenance
  std::remove(path.c_str());
}
