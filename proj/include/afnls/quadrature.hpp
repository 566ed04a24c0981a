#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <queue>
#include <vector>

namespace afnls::quad {

template <class T>
struct Result {
  T value{};
  double abs_err = 0;
  int evaluations = 0;
  bool converged = false;
};

namespace detail {

// Gauss-Kronrod 7/15 nodes and weights on [-1, 1].
inline constexpr double xgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                                  0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                                  0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                                  0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
inline constexpr double wgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                                  0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                                  0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                                  0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
inline constexpr double wg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                                 0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

inline double magnitude(double v) { return std::abs(v); }
inline double magnitude(std::complex<double> v) { return std::abs(v); }

template <class T>
struct Panel {
  double a, b;
  T value;
  double err;
  double absval;  // \int |f| over the panel, for the round-off floor
  bool operator<(const Panel& o) const { return err < o.err; }
};

template <class T, class F>
Panel<T> gk15(F& f, double a, double b) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  const T fc = f(c);
  T kron = fc * wgk[7];
  T gauss = fc * wg[3];
  double absk = magnitude(fc) * wgk[7];
  for (int k = 0; k < 7; ++k) {
    const T f1 = f(c - h * xgk[k]), f2 = f(c + h * xgk[k]);
    kron += (f1 + f2) * wgk[k];
    absk += (magnitude(f1) + magnitude(f2)) * wgk[k];
    if (k % 2 == 1) gauss += (f1 + f2) * wg[k / 2];
  }
  return {a, b, kron * h, magnitude((kron - gauss) * h), absk * std::abs(h)};
}

}  // namespace detail

// Globally adaptive Gauss-Kronrod (7/15) on [a, b]: the panel with the
// largest error estimate is bisected until the summed estimate falls below
// max(abs_tol, rel_tol * |value|), or below the round-off floor
// 50 eps \int |f|.
template <class T, class F>
Result<T> integrate(F&& f, double a, double b, double abs_tol, double rel_tol,
                    int max_panels = 4000) {
  std::priority_queue<detail::Panel<T>> heap;
  Result<T> r;
  auto first = detail::gk15<T>(f, a, b);
  r.evaluations = 15;
  T total = first.value;
  double err = first.err;
  double absval = first.absval;
  constexpr double floor = 50 * std::numeric_limits<double>::epsilon();
  auto target = [&](T v, double av) {
    return std::max({abs_tol, rel_tol * detail::magnitude(v), floor * av});
  };
  heap.push(first);
  // The running totals drift through cancellation; re-sum before stopping.
  auto resum = [&] {
    auto copy = heap;
    total = T{};
    err = absval = 0;
    while (!copy.empty()) {
      total += copy.top().value;
      err += copy.top().err;
      absval += copy.top().absval;
      copy.pop();
    }
  };
  while (static_cast<int>(heap.size()) < max_panels) {
    if (err <= target(total, absval)) {
      resum();
      if (err <= target(total, absval)) break;
    }
    auto worst = heap.top();
    heap.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    auto left = detail::gk15<T>(f, worst.a, mid);
    auto right = detail::gk15<T>(f, mid, worst.b);
    r.evaluations += 30;
    total += left.value + right.value - worst.value;
    err += left.err + right.err - worst.err;
    absval += left.absval + right.absval - worst.absval;
    heap.push(left);
    heap.push(right);
  }
  resum();
  const T sum = total;
  const double esum = err, asum = absval;
  r.value = sum;
  r.abs_err = std::max(esum, floor * asum);
  r.converged = esum <= target(sum, asum);
  return r;
}

}  // namespace afnls::quad
