#pragma once

// Independent reference computations: direct sums and naive transforms that
// share no code with the library.

#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "afnls/grid.hpp"

namespace oracle {

using cplx = std::complex<double>;

inline double direct_mass(const afnls::Field& u) {
  const auto& g = u.grid();
  long double s = 0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) s += std::norm(u(i, j));
  return static_cast<double>(s) * g.dx() * g.dy();
}

inline double direct_lpp(const afnls::Field& u, double p) {
  const auto& g = u.grid();
  long double s = 0;
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j) s += std::pow(std::abs(u(i, j)), p);
  return static_cast<double>(s) * g.dx() * g.dy();
}

// Frequency of storage slot k on an axis of n samples with spacing d.
inline double freq(int k, int n, double d) { return (k < n / 2 ? k : k - n) * d; }

// Naive continuous-transform Riemann sum
//   uh(xi_k, eta_l) = sum_{i,j} u(x_i, y_j) exp(-i(xi x + eta y)) dx dy.
inline std::vector<cplx> naive_spectrum(const afnls::Field& u) {
  const auto& g = u.grid();
  const int nx = g.nx(), ny = g.ny();
  std::vector<cplx> out(static_cast<std::size_t>(nx) * ny);
  for (int k = 0; k < nx; ++k)
    for (int l = 0; l < ny; ++l) {
      const double xi = freq(k, nx, M_PI / g.lx()), eta = freq(l, ny, M_PI / g.ly());
      cplx s = 0;
      for (int i = 0; i < nx; ++i)
        for (int j = 0; j < ny; ++j) s += u(i, j) * std::polar(1.0, -(xi * g.x(i) + eta * g.y(j)));
      out[static_cast<std::size_t>(k) * ny + l] = s * g.dx() * g.dy();
    }
  return out;
}

// (2 pi)^-2 sum w(xi, eta) |uh|^2 dxi deta from the naive spectrum.
template <class W>
double naive_weighted(const afnls::Field& u, W&& w) {
  const auto& g = u.grid();
  const auto uh = naive_spectrum(u);
  long double s = 0;
  for (int k = 0; k < g.nx(); ++k)
    for (int l = 0; l < g.ny(); ++l) {
      const double xi = freq(k, g.nx(), M_PI / g.lx()), eta = freq(l, g.ny(), M_PI / g.ly());
      s += w(xi, eta) * std::norm(uh[static_cast<std::size_t>(k) * g.ny() + l]);
    }
  return static_cast<double>(s) / g.area();
}

// Small deterministic generator for test data (not the library's scheme).
struct Lcg {
  std::uint64_t state;
  explicit Lcg(std::uint64_t seed) : state(seed * 2862933555777941757ULL + 3037000493ULL) {}
  double next() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return static_cast<double>(state >> 11) * 0x1.0p-53;
  }
};

inline afnls::Field noise_field(const afnls::GridSpec& g, std::uint64_t seed) {
  Lcg r(seed);
  afnls::Field u(g);
  for (auto& z : u.values()) z = cplx(r.next() - 0.5, r.next() - 0.5);
  return u;
}

inline double rel_l2(const afnls::Field& a, const afnls::Field& b) {
  double num = 0, den = 0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    num += std::norm(a[k] - b[k]);
    den += std::norm(b[k]);
  }
  return std::sqrt(num / den);
}

inline double max_abs_diff(const afnls::Field& a, const afnls::Field& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a[k] - b[k]));
  return m;
}

}  // namespace oracle
