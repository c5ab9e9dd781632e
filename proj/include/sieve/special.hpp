#pragma once

namespace sieve {

/// Bessel J1 via the classic rational minimax fits (|error| < 2e-7 absolute).
/// The propagation kernels evaluate this billions of times; the library
/// implementation is ~10x slower and numerically indistinguishable at the
/// tolerances used anywhere downstream.
double fast_j1(double x);

/// jinc(x) = 2 J1(x) / x, jinc(0) = 1.
double jinc(double x);

}  // namespace sieve
