#include "sieve/field_io.hpp"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <numbers>
#include <vector>

#include "sieve/errors.hpp"

namespace sieve {

namespace {

// this code assumes a little-endian host, like every target we build on
void put_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), 4);
}

void put_f64(std::ostream& os, double v) {
  os.write(reinterpret_cast<const char*>(&v), 8);
}

std::uint32_t get_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), 4);
  return v;
}

double get_f64(std::istream& is) {
  double v = 0;
  is.read(reinterpret_cast<char*>(&v), 8);
  return v;
}

}  // namespace

void write_cvf1(const std::string& path, const ComplexField& f) {
  f.grid.validate();
  if (f.samples.size() != static_cast<size_t>(f.grid.count()))
    throw PreconditionError("field", "sample count does not match grid");
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os.write("CVF1", 4);
  put_u32(os, static_cast<std::uint32_t>(f.grid.nx));
  put_u32(os, static_cast<std::uint32_t>(f.grid.ny));
  put_f64(os, f.grid.pitch_x);
  put_f64(os, f.grid.pitch_y);
  put_f64(os, f.grid.origin_x);
  put_f64(os, f.grid.origin_y);
  put_f64(os, f.z_label);
  for (const cplx& v : f.samples) {
    put_f64(os, v.real());
    put_f64(os, v.imag());
  }
  if (!os) throw IoError("short write: " + path);
}

ComplexField read_cvf1(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open for reading: " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::memcmp(magic, "CVF1", 4) != 0)
    throw IoError("not a CVF1 file: " + path);
  GridSpec g;
  g.nx = static_cast<int>(get_u32(is));
  g.ny = static_cast<int>(get_u32(is));
  g.pitch_x = get_f64(is);
  g.pitch_y = get_f64(is);
  g.origin_x = get_f64(is);
  g.origin_y = get_f64(is);
  double z = get_f64(is);
  if (!is || g.nx < 2 || g.ny < 2 || !(g.pitch_x > 0) || !(g.pitch_y > 0))
    throw IoError("corrupt CVF1 header: " + path);
  ComplexField f(g, z);
  for (cplx& v : f.samples) {
    double re = get_f64(is);
    double im = get_f64(is);
    v = {re, im};
  }
  if (!is) throw IoError("truncated CVF1 payload: " + path);
  return f;
}

namespace {

void write_pgm16(const std::string& path, const ComplexField& f,
                 const std::vector<std::uint16_t>& pix) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open for writing: " + path);
  os << "P5\n" << f.grid.nx << " " << f.grid.ny << "\n65535\n";
  std::vector<unsigned char> bytes(pix.size() * 2);
  for (size_t k = 0; k < pix.size(); ++k) {
    bytes[2 * k] = static_cast<unsigned char>(pix[k] >> 8);  // big-endian per P5
    bytes[2 * k + 1] = static_cast<unsigned char>(pix[k] & 0xff);
  }
  os.write(reinterpret_cast<const char*>(bytes.data()),
           static_cast<std::streamsize>(bytes.size()));
  if (!os) throw IoError("short write: " + path);
}

}  // namespace

void write_pgm16_intensity(const std::string& path, const ComplexField& f) {
  f.grid.validate();
  double vmax = 0;
  for (const cplx& v : f.samples) vmax = std::max(vmax, std::norm(v));
  std::vector<std::uint16_t> pix(f.samples.size(), 0);
  if (vmax > 0) {
    for (size_t k = 0; k < f.samples.size(); ++k)
      pix[k] = static_cast<std::uint16_t>(std::lround(std::norm(f.samples[k]) / vmax * 65535.0));
  }
  write_pgm16(path, f, pix);
}

void write_pgm16_phase(const std::string& path, const ComplexField& f) {
  f.grid.validate();
  std::vector<std::uint16_t> pix(f.samples.size(), 0);
  constexpr double pi = std::numbers::pi;
  for (size_t k = 0; k < f.samples.size(); ++k) {
    double ph = std::arg(f.samples[k]);  // (-pi, pi]
    double t = (ph + pi) / (2.0 * pi);
    pix[k] = static_cast<std::uint16_t>(std::lround(t * 65535.0));
  }
  write_pgm16(path, f, pix);
}

}  // namespace sieve
