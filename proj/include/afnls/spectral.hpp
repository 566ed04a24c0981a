#pragma once

#include <cmath>

#include "afnls/grid.hpp"
#include "afnls/kernels.hpp"

namespace afnls {

// Fourier multiplier on the lattice. Odd pieces (i*xi, i*eta, sgn(eta),
// -omega*eta) vanish at the Nyquist index.
struct Symbol {
  enum class Kind { dx, dxx, dys, dy, hilbert_y, linear_phase, half_wave_form };

  Kind kind;
  double s = 0.5;
  double dt = 0;
  double alpha = 0;
  double omega = 0;

  static Symbol dx() { return {Kind::dx}; }
  static Symbol dxx() { return {Kind::dxx}; }
  static Symbol dys(double s);
  static Symbol dy() { return {Kind::dy}; }
  static Symbol hilbert_y() { return {Kind::hilbert_y}; }
  // exp(-i dt (xi^2 + |eta|^{2s})), the linear propagator over time dt.
  static Symbol linear_phase(double dt, double s);
  // alpha + xi^2 + |eta|^{2s} - omega*eta.
  static Symbol half_wave_form(double alpha, double omega, double s);

  // Multiplier at an arbitrary frequency pair (no Nyquist rule).
  cplx multiplier(double xi, double eta) const;
  // Multiplier at lattice slot (i, j) with the Nyquist rule applied.
  cplx at(const GridSpec& g, int i, int j) const;
};

Field to_spectrum(const Field& u);
Field from_spectrum(const Field& uh);

// Multiply by the symbol in spectral space; the result keeps u's space tag.
Field apply_symbol(const Field& u, const Symbol& sym);

// Zero modes whose signed index exceeds n/3 in modulus on either axis.
Field dealias(const Field& uh);

// Multiply a spectral field in place by m(i, j).
template <class M>
void apply_multiplier(Field& uh, M&& m) {
  kernels::parallel::multiply(uh.values(), uh.grid().nx(), uh.grid().ny(),
                              std::forward<M>(m));
}

// Frequency-weighted sum  (1/area) sum w(i,j) |uh(i,j)|^2, i.e. the lattice
// version of (2 pi)^-2 \int w |uh|^2.
template <class W>
double spectral_integral(const Field& uh, W&& w) {
  const GridSpec& g = uh.grid();
  return kernels::parallel::weighted_abs2(uh.values(), g.nx(), g.ny(),
                                          std::forward<W>(w)) / g.area();
}

double spectral_norm2(const Field& uh);

// |eta|^{2s} on the lattice, with 0^{2s} = 0.
inline double abs_pow(double eta, double s) {
  return eta == 0.0 ? 0.0 : std::pow(std::abs(eta), 2 * s);
}

}  // namespace afnls
