#include "sieve/special.hpp"

#include <cmath>

namespace sieve {

double fast_j1(double x) {
  double ax = std::fabs(x);
  double result;
  if (ax < 8.0) {
    double y = x * x;
    double num = x * (72362614232.0 +
                      y * (-7895059235.0 +
                           y * (242396853.1 +
                                y * (-2972611.439 + y * (15704.48260 + y * (-30.16036606))))));
    double den = 144725228442.0 +
                 y * (2300535178.0 +
                      y * (18583304.74 + y * (99447.43394 + y * (376.9991397 + y))));
    result = num / den;
  } else {
    double z = 8.0 / ax;
    double y = z * z;
    double xx = ax - 2.356194491;  // 3*pi/4
    double p1 = 1.0 + y * (0.183105e-2 +
                           y * (-0.3516396496e-4 +
                                y * (0.2457520174e-5 + y * (-0.240337019e-6))));
    double q1 = 0.04687499995 +
                y * (-0.2002690873e-3 +
                     y * (0.8449199096e-5 + y * (-0.88228987e-6 + y * 0.105787412e-6)));
    result = std::sqrt(0.636619772 / ax) * (std::cos(xx) * p1 - z * std::sin(xx) * q1);
    if (x < 0.0) result = -result;
  }
  return result;
}

double jinc(double x) {
  double ax = std::fabs(x);
  if (ax < 1e-4) {
    double y = x * x;
    return 1.0 - y / 8.0 + y * y / 192.0;
  }
  return 2.0 * fast_j1(x) / x;
}

}  // namespace sieve
