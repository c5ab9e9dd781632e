#include <cmath>
#include <initializer_list>

#include <doctest.h>

#include "sieve/special.hpp"

using namespace sieve;

TEST_CASE("fast_j1 matches the library Bessel J1 within its stated bound") {
  for (double x = -40.0; x <= 40.0; x += 0.37) {
    double ref = std::cyl_bessel_j(1, std::fabs(x));
    if (x < 0) ref = -ref;
    CHECK(std::fabs(fast_j1(x) - ref) < 2e-7);
  }
}

TEST_CASE("fast_j1 is odd") {
  for (double x : {0.3, 1.7, 7.99, 8.01, 25.0}) CHECK(fast_j1(-x) == -fast_j1(x));
}

TEST_CASE("jinc limit and small-argument series") {
  CHECK(jinc(0.0) == 1.0);
  // series and ratio branches agree around the switch point
  CHECK(jinc(9.9e-5) == doctest::Approx(jinc(1.01e-4)).epsilon(1e-8));
  CHECK(jinc(2.0) == doctest::Approx(2.0 * fast_j1(2.0) / 2.0));
  // first zero of J1 at 3.8317
  CHECK(std::fabs(jinc(3.8317059702075125)) < 1e-6);
}
