#pragma once

// Pointwise, multiplier and reduction kernels over flat complex arrays.
// `serial` is the reference; `parallel` uses OpenMP. Parallel reductions
// accumulate fixed-size blocks and combine the partials in block order, so
// their result does not depend on the thread count.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace afnls::kernels {

using cplx = std::complex<double>;

inline constexpr std::size_t kBlock = 4096;

// |v|^{p-2} with the convention that moduli below 1e-300 give 0.
inline double modulus_power(double r, double q) {
  return r < 1e-300 ? 0.0 : std::pow(r, q);
}

namespace serial {

inline double sum_abs2(std::span<const cplx> v) {
  double s = 0;
  for (const cplx& z : v) s += std::norm(z);
  return s;
}

inline double sum_abs_pow(std::span<const cplx> v, double p) {
  double s = 0;
  for (const cplx& z : v) s += modulus_power(std::abs(z), p);
  return s;
}

inline cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  cplx s = 0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::conj(a[k]) * b[k];
  return s;
}

// Sum of w(i, j) * |v(i, j)|^2 on an nx x ny row-major array.
template <class W>
double weighted_abs2(std::span<const cplx> v, int nx, int ny, W&& w) {
  double s = 0;
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j)
      s += w(i, j) * std::norm(v[static_cast<std::size_t>(i) * ny + j]);
  return s;
}

// v(i, j) *= m(i, j).
template <class M>
void multiply(std::span<cplx> v, int nx, int ny, M&& m) {
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) v[static_cast<std::size_t>(i) * ny + j] *= m(i, j);
}

// out = |v|^{p-2} v.
inline void power_nonlinearity(std::span<const cplx> v, std::span<cplx> out, double p) {
  for (std::size_t k = 0; k < v.size(); ++k)
    out[k] = modulus_power(std::abs(v[k]), p - 2) * v[k];
}

// v *= exp(i a |v|^{p-2}).
inline void nonlinear_phase(std::span<cplx> v, double a, double p) {
  for (cplx& z : v) z *= std::polar(1.0, a * modulus_power(std::abs(z), p - 2));
}

inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  for (std::size_t k = 0; k < x.size(); ++k) y[k] += a * x[k];
}

}  // namespace serial

namespace parallel {

namespace detail {
template <class Partial>
double blocked_sum(std::size_t n, Partial&& partial) {
  const std::size_t nb = (n + kBlock - 1) / kBlock;
  std::vector<double> part(nb, 0.0);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t b = 0; b < static_cast<std::ptrdiff_t>(nb); ++b) {
    const std::size_t lo = static_cast<std::size_t>(b) * kBlock;
    const std::size_t hi = std::min(n, lo + kBlock);
    part[b] = partial(lo, hi);
  }
  double s = 0;
  for (double x : part) s += x;
  return s;
}
}  // namespace detail

inline double sum_abs2(std::span<const cplx> v) {
  return detail::blocked_sum(v.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0;
    for (std::size_t k = lo; k < hi; ++k) s += std::norm(v[k]);
    return s;
  });
}

inline double sum_abs_pow(std::span<const cplx> v, double p) {
  return detail::blocked_sum(v.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0;
    for (std::size_t k = lo; k < hi; ++k) s += modulus_power(std::abs(v[k]), p);
    return s;
  });
}

inline cplx inner(std::span<const cplx> a, std::span<const cplx> b) {
  double re = detail::blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0;
    for (std::size_t k = lo; k < hi; ++k) s += (std::conj(a[k]) * b[k]).real();
    return s;
  });
  double im = detail::blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0;
    for (std::size_t k = lo; k < hi; ++k) s += (std::conj(a[k]) * b[k]).imag();
    return s;
  });
  return {re, im};
}

template <class W>
double weighted_abs2(std::span<const cplx> v, int /*nx*/, int ny, W&& w) {
  return detail::blocked_sum(v.size(), [&](std::size_t lo, std::size_t hi) {
    double s = 0;
    for (std::size_t k = lo; k < hi; ++k) {
      const int i = static_cast<int>(k / ny), j = static_cast<int>(k % ny);
      s += w(i, j) * std::norm(v[k]);
    }
    return s;
  });
}

template <class M>
void multiply(std::span<cplx> v, int nx, int ny, M&& m) {
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i)
    for (int j = 0; j < ny; ++j) v[static_cast<std::size_t>(i) * ny + j] *= m(i, j);
}

inline void power_nonlinearity(std::span<const cplx> v, std::span<cplx> out, double p) {
  const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k)
    out[k] = modulus_power(std::abs(v[k]), p - 2) * v[k];
}

inline void nonlinear_phase(std::span<cplx> v, double a, double p) {
  const auto n = static_cast<std::ptrdiff_t>(v.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k)
    v[k] *= std::polar(1.0, a * modulus_power(std::abs(v[k]), p - 2));
}

inline void axpy(cplx a, std::span<const cplx> x, std::span<cplx> y) {
  const auto n = static_cast<std::ptrdiff_t>(x.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t k = 0; k < n; ++k) y[k] += a * x[k];
}

}  // namespace parallel

}  // namespace afnls::kernels
