#pragma once

#include <string>

#include "sieve/field.hpp"

namespace sieve {

/// CVF1 container: bytes "CVF1", u32 nx, u32 ny, f64 pitch_x, pitch_y,
/// origin_x, origin_y, z_label, then nx*ny (re, im) f64 pairs row-major
/// (j outer, i inner). Little-endian throughout.
void write_cvf1(const std::string& path, const ComplexField& f);
ComplexField read_cvf1(const std::string& path);

/// 16-bit binary PGM (P5, maxval 65535, big-endian samples per the format).
/// Intensity maps |f|^2 linearly onto [0, 65535]; an all-zero field stays 0.
void write_pgm16_intensity(const std::string& path, const ComplexField& f);

/// Phase in (-pi, pi] maps linearly onto [0, 65535].
void write_pgm16_phase(const std::string& path, const ComplexField& f);

}  // namespace sieve
