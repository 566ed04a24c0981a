#include "afnls/field_io.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "afnls/error.hpp"

namespace afnls {

namespace {

void put_u64(std::ostream& out, std::uint64_t v) {
  unsigned char b[8];
  for (int k = 0; k < 8; ++k) b[k] = static_cast<unsigned char>(v >> (8 * k));
  out.write(reinterpret_cast<const char*>(b), 8);
}

std::uint64_t get_u64(std::istream& in, const std::string& path) {
  unsigned char b[8];
  if (!in.read(reinterpret_cast<char*>(b), 8)) throw Error(path + ": truncated field file");
  std::uint64_t v = 0;
  for (int k = 7; k >= 0; --k) v = (v << 8) | b[k];
  return v;
}

void put_f64(std::ostream& out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

double get_f64(std::istream& in, const std::string& path) {
  return std::bit_cast<double>(get_u64(in, path));
}

}  // namespace

void write_field(const std::string& path, const Field& u) {
  require_physical(u, "write_field");
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  const GridSpec& g = u.grid();
  out.write(kFieldMagic, 16);
  put_u64(out, static_cast<std::uint64_t>(g.nx()));
  put_u64(out, static_cast<std::uint64_t>(g.ny()));
  put_f64(out, g.lx());
  put_f64(out, g.ly());
  for (const cplx& z : u.values()) {
    put_f64(out, z.real());
    put_f64(out, z.imag());
  }
  out.close();
  if (!out) throw Error("failed writing " + path);
}

Field read_field(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  char magic[16];
  if (!in.read(magic, 16) || std::memcmp(magic, kFieldMagic, 16) != 0)
    throw Error(path + ": not a field file (bad magic)");
  const auto nx = static_cast<std::int64_t>(get_u64(in, path));
  const auto ny = static_cast<std::int64_t>(get_u64(in, path));
  const double lx = get_f64(in, path), ly = get_f64(in, path);
  if (nx <= 0 || ny <= 0 || nx > (1 << 20) || ny > (1 << 20))
    throw Error(path + ": implausible grid size");
  const GridSpec g = build_grid(static_cast<int>(nx), static_cast<int>(ny), lx, ly);
  std::vector<cplx> v(g.size());
  for (auto& z : v) {
    const double re = get_f64(in, path);
    z = cplx(re, get_f64(in, path));
  }
  return Field(g, std::move(v));
}

}  // namespace afnls
