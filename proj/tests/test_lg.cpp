#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include <doctest.h>

#include "sieve/errors.hpp"
#include "sieve/lg.hpp"

#include "helpers.hpp"

using namespace sieve;
using sieve::test::mode_field;
using sieve::test::square_grid;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("fundamental mode value on axis") {
  double w0 = 2e-6;
  cplx v = lg_eval(0.0, 0.0, w0, 0, 0);
  CHECK(v.real() == doctest::Approx(std::sqrt(2.0 / kPi) / w0).epsilon(1e-13));
  CHECK(v.imag() == 0.0);
}

TEST_CASE("ring mode peaks at w0 * sqrt(|ell|/2)") {
  double w0 = 1e-6;
  double best_r = 0, best = -1;
  for (int k = 1; k < 4000; ++k) {
    double r = k * 1e-9;
    double a = std::abs(lg_eval(r, 0.0, w0, 0, 5));
    if (a > best) {
      best = a;
      best_r = r;
    }
  }
  CHECK(best_r == doctest::Approx(w0 * std::sqrt(2.5)).epsilon(1e-3));
}

TEST_CASE("modes are unit normalized under quadrature") {
  double w0 = 1e-6;
  GridSpec g = square_grid(1024, 8 * w0);
  ComplexField f = mode_field(g, w0, 2, 3);
  double power = 0;
  for (const cplx& v : f.samples) power += std::norm(v);
  power *= g.cell_area();
  CHECK(power == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("batch evaluator agrees with the direct form") {
  LGBasisSpec basis{1e-6, 3, -12, 12, 8e-6};
  LgEvaluator ev(basis);
  std::vector<cplx> vals(basis.count());
  for (double xy : {0.0, 2.7e-7, -1.3e-6, 3.1e-6}) {
    ev.eval(xy, 0.4e-6, vals.data());
    for (int p = 0; p <= basis.p_max; ++p)
      for (int ell = basis.ell_min; ell <= basis.ell_max; ++ell) {
        cplx direct = lg_eval(xy, 0.4e-6, basis.w0, p, ell);
        CHECK(std::abs(vals[basis.index(p, ell)] - direct) < 1e-8 * std::sqrt(2.0 / kPi) / 1e-6);
      }
  }
}

TEST_CASE("decompose recovers synthesize coefficients") {
  LGBasisSpec basis{1e-6, 1, -2, 2, 8e-6};
  GridSpec g = square_grid(256, 8e-6);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CoeffTable c(basis);
  for (cplx& v : c.c) v = {u(rng), u(rng)};
  ComplexField f = synthesize(c, g);
  CoeffTable back = decompose(f, basis);
  for (int k = 0; k < basis.count(); ++k) CHECK(std::abs(back.c[k] - c.c[k]) < 1e-3);
}

TEST_CASE("decompose preconditions") {
  LGBasisSpec basis{1e-6, 1, -2, 2, 8e-6};
  // pitch 8e-6/64 = 1.25e-7 > w0/16
  ComplexField coarse(square_grid(64, 8e-6));
  CHECK_THROWS_AS(decompose(coarse, basis), ResolutionError);
  // window larger than the covered extent
  ComplexField small(square_grid(256, 4e-6));
  CHECK_THROWS_AS(decompose(small, basis), WindowError);
}

TEST_CASE("selection factor closed form") {
  for (int m : {1, 2, 3, 5, 7, 11}) {
    for (int ell = -30; ell <= 30; ++ell) {
      int expect = (ell % m == 0) ? m : 0;
      CHECK(selection_factor(ell, m) == expect);
      CHECK(std::abs(selection_sum(ell, m) - static_cast<double>(expect)) < 1e-12);
    }
  }
  CHECK(selection_factor(55, 11) == 11);
  CHECK_THROWS_AS(selection_factor(3, 0), PreconditionError);
}

TEST_CASE("symmetric filter scales multiples and kills the rest") {
  LGBasisSpec basis{1e-6, 1, -6, 6, 8e-6};
  CoeffTable c(basis);
  for (int k = 0; k < basis.count(); ++k) c.c[k] = {1.0 + k, 0.5};
  CoeffTable g = symmetric_filter_coeffs(c, 3);
  for (int p = 0; p <= 1; ++p)
    for (int ell = -6; ell <= 6; ++ell) {
      if (ell % 3 == 0)
        CHECK(g.at(p, ell) == 3.0 * c.at(p, ell));
      else
        CHECK(g.at(p, ell) == cplx{});
    }
}

TEST_CASE("oam spectrum normalizes and rejects empty tables") {
  LGBasisSpec basis{1e-6, 1, -2, 2, 8e-6};
  CoeffTable c(basis);
  c.at(0, 1) = {2.0, 0.0};  // power 4
  c.at(1, 1) = {0.0, 1.0};  // power 1
  c.at(0, -2) = {1.0, 0.0};
  OAMSpectrum s = oam_spectrum(c);
  CHECK(s.total_power == doctest::Approx(6.0));
  CHECK(s.at(1) == doctest::Approx(5.0 / 6.0));
  CHECK(s.at(-2) == doctest::Approx(1.0 / 6.0));
  CHECK(s.at(0) == 0.0);
  double sum = 0;
  for (double v : s.power) sum += v;
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));

  CoeffTable zero(basis);
  CHECK_THROWS_AS(oam_spectrum(zero), ZeroPowerError);
}

TEST_CASE("spectrum and coefficient CSV formats") {
  LGBasisSpec basis{1e-6, 0, -1, 1, 8e-6};
  CoeffTable c(basis);
  c.at(0, -1) = {0.25, 0.0};
  c.at(0, 1) = {0.5, -0.125};
  auto tmp = std::filesystem::temp_directory_path();
  std::string spath = (tmp / "spec.csv").string(), cpath = (tmp / "coef.csv").string();
  write_spectrum_csv(spath, oam_spectrum(c));
  write_coeff_csv(cpath, c);

  std::ifstream sin(spath);
  std::string line;
  std::getline(sin, line);
  CHECK(line == "ell,power");
  int rows = 0;
  while (std::getline(sin, line)) ++rows;
  CHECK(rows == 3);

  std::ifstream cin(cpath);
  std::getline(cin, line);
  CHECK(line == "p,ell,re,im");
  std::getline(cin, line);  // p=0, ell=-1
  double re = 0, im = 0;
  int p = -1, ell = 99;
  CHECK(std::sscanf(line.c_str(), "%d,%d,%lf,%lf", &p, &ell, &re, &im) == 4);
  CHECK(p == 0);
  CHECK(ell == -1);
  CHECK(re == 0.25);  // 17 significant digits round-trip exactly
  std::remove(spath.c_str());
  std::remove(cpath.c_str());
}
