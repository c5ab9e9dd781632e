#pragma once

#include <cmath>

#include "sieve/field.hpp"
#include "sieve/lg.hpp"

namespace sieve::test {

inline GridSpec square_grid(int n, double window) {
  GridSpec g;
  g.nx = g.ny = n;
  g.pitch_x = g.pitch_y = window / n;
  return g;
}

/// Single LG mode sampled over the grid.
inline ComplexField mode_field(const GridSpec& g, double w0, int p, int ell) {
  ComplexField f(g);
  for (int j = 0; j < g.ny; ++j)
    for (int i = 0; i < g.nx; ++i) f.at(i, j) = lg_eval(g.x_at(i), g.y_at(j), w0, p, ell);
  return f;
}

inline double rel_rms(const ComplexField& a, const ComplexField& b) {
  double num = 0, den = 0;
  for (size_t k = 0; k < a.samples.size(); ++k) {
    num += std::norm(a.samples[k] - b.samples[k]);
    den += std::norm(b.samples[k]);
  }
  return std::sqrt(num / den);
}

}  // namespace sieve::test
