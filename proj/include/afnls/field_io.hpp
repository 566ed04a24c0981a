#pragma once

#include <string>

#include "afnls/grid.hpp"

namespace afnls {

// Binary layout: 16-byte magic "AFNLS-FIELD-v001", then nx, ny (int64) and
// lx, ly (float64), then (re, im) float64 pairs row-major over (x, y). All
// values little-endian.
inline constexpr char kFieldMagic[17] = "AFNLS-FIELD-v001";

void write_field(const std::string& path, const Field& u);
Field read_field(const std::string& path);

}  // namespace afnls
