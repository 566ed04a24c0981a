#include "afnls/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "afnls/csv.hpp"
#include "afnls/error.hpp"
#include "afnls/quadrature.hpp"
#include "afnls/spectral.hpp"
#include "detail.hpp"

namespace afnls {

namespace {

constexpr double kCs = 0.25 / (M_PI * 1.7724538509055160273);  // 1 / (4 pi^{3/2})
constexpr double kCut = 46.0;                                    // exp(-46) ~ 1e-20

void check_s(double s) {
  if (!(s > 0 && s < 1)) throw DomainError("s must lie in (0, 1)");
}

// h(z) = 2 \int_0^inf exp(-eta^{2s}) cos(z eta) d eta, z >= 0.
quad::Result<double> reduced_profile(double z, double s, const KernelQuadrature& q) {
  if (z <= 2) {
    const double top = std::pow(kCut, 1 / (2 * s));
    auto f = [&](double eta) { return 2 * std::exp(-std::pow(eta, 2 * s)) * std::cos(z * eta); };
    auto a = quad::integrate<double>(f, 0.0, std::min(1.0, top), q.abs_tol, q.rel_tol);
    if (top > 1) {
      auto b = quad::integrate<double>(f, 1.0, top, q.abs_tol, q.rel_tol);
      a.value += b.value;
      a.abs_err += b.abs_err;
      a.evaluations += b.evaluations;
      a.converged = a.converged && b.converged;
    }
    return a;
  }
  // Rotate the contour to eta = r e^{i theta}; the integrand then decays like
  // exp(-z r sin theta) instead of oscillating.
  const double theta = std::min(M_PI / 2, M_PI / (4 * s));
  const cplx rot = std::polar(1.0, theta), rot2s = std::polar(1.0, 2 * s * theta);
  const cplx iz = cplx(0, z) * rot;
  auto f = [&](double r) {
    const double r2s = r == 0 ? 0.0 : std::pow(r, 2 * s);
    return rot * std::exp(-r2s * rot2s + iz * r);
  };
  const double top = kCut / (z * std::sin(theta));
  auto c = quad::integrate<cplx>(f, 0.0, top, 1e-3 * q.abs_tol, 1e-3 * q.rel_tol);
  return {2 * c.value.real(), 2 * c.abs_err, c.evaluations, c.converged};
}

double ratio_guard(double num, double den) {
  return den > 0 ? num / den : std::numeric_limits<double>::quiet_NaN();
}

}  // namespace

const char* bound_name(BoundId b) {
  switch (b) {
    case BoundId::est1: return "est-1";
    case BoundId::upper_1_1_3: return "1.1-3";
    case BoundId::lower_1_1_4: return "1.1-4";
    case BoundId::boosted: return "boosted";
  }
  return "?";
}

KernelSample hs_profile_sample(double y, double t, double s, const KernelQuadrature& q) {
  check_s(s);
  if (!(t > 0)) throw DomainError("hs_profile: t must be positive");
  const double a = std::pow(t, -1 / (2 * s));
  auto h = reduced_profile(a * std::abs(y), s, q);
  if (!h.converged)
    throw ConvergenceError("hs_profile: quadrature did not converge (y=" + format_double(y) +
                           ", t=" + format_double(t) + ")");
  return {0.0, y, a * h.value, a * h.abs_err};
}

double hs_profile(double y, double t, double s, const KernelQuadrature& q) {
  return hs_profile_sample(y, t, s, q).value;
}

KernelSample ks_kernel(double x, double y, double s, const KernelQuadrature& q) {
  check_s(s);
  if (x == 0 && y == 0) throw DomainError("ks_kernel is singular at the origin");
  double inner_err = 0;
  auto f = [&](double u) {
    const double t = std::exp(u);
    const double w = -t - x * x / (4 * t);
    if (w < -700) return 0.0;
    auto h = hs_profile_sample(y, t, s, q);
    const double scale = kCs * std::exp(w) * std::sqrt(t);
    inner_err = std::max(inner_err, std::abs(scale) * h.abs_err_estimate);
    return scale * h.value;
  };
  const double lo = std::log(x * x + y * y) - 35, hi = std::log(60.0);
  auto r = quad::integrate<double>(f, lo, hi, q.abs_tol, q.rel_tol);
  if (!r.converged) throw ConvergenceError("ks_kernel: quadrature did not converge");
  return {x, y, r.value, r.abs_err + (hi - lo) * inner_err};
}

double ks_mass(double s, double X, double Y, const KernelQuadrature& q) {
  check_s(s);
  // k(y) = \int_{-X}^{X} K_s(x, y) dx, with the x-integral done in closed form.
  auto k = [&](double y) {
    auto f = [&](double u) {
      const double t = std::exp(u);
      if (t > 60) return 0.0;
      const double xpart = std::sqrt(4 * M_PI * t) * std::erf(X / (2 * std::sqrt(t)));
      return kCs * std::exp(-t) * t * std::pow(t, -0.5) * xpart * hs_profile(y, t, s, q);
    };
    return quad::integrate<double>(f, std::log(y * y) - 35, std::log(60.0), q.abs_tol, q.rel_tol)
        .value;
  };
  // Graded in y through v = log y; the integrand k(y) y is integrable at 0.
  auto g = [&](double v) {
    const double y = std::exp(v);
    return k(y) * y;
  };
  const auto core = quad::integrate<double>(g, std::log(Y) - 40, std::log(Y), 1e-12, 1e-9);
  // Beyond Y, k decays like y^{-1-2s}.
  const double tail = k(Y) * Y / (2 * s);
  return 2 * (core.value + tail);
}

DecayReport decay_report(double s, BoundId bound, const Region& region,
                         const KernelQuadrature& q) {
  check_s(s);
  if (region.nx < 1 || region.ny < 1 || region.x_min > region.x_max ||
      region.y_min > region.y_max)
    throw DomainError("decay_report: empty region");
  if (bound == BoundId::boosted)
    throw DomainError("decay_report: the boosted bound is checked on waves");
  if (region.k < 0 || region.k > 1 || region.m < 0 || region.m > 1)
    throw DomainError("decay_report: derivative orders must be 0 or 1");
  if ((bound == BoundId::upper_1_1_3 || bound == BoundId::lower_1_1_4) && region.y_min < 1)
    throw DomainError("decay_report: bound requires |y| >= 1");
  if (bound == BoundId::lower_1_1_4 &&
      std::max(std::abs(region.x_min), std::abs(region.x_max)) > 1)
    throw DomainError("decay_report: lower bound requires |x| <= 1");

  const double h = 1e-3;
  auto kernel = [&](double x, double y) { return ks_kernel(x, y, s, q).value; };
  auto derivative = [&](double x, double y) {
    if (region.m == 0 && region.k == 0) return kernel(x, y);
    if (region.m == 1 && region.k == 0) return (kernel(x + h, y) - kernel(x - h, y)) / (2 * h);
    if (region.m == 0 && region.k == 1) return (kernel(x, y + h) - kernel(x, y - h)) / (2 * h);
    return (kernel(x + h, y + h) - kernel(x + h, y - h) - kernel(x - h, y + h) +
            kernel(x - h, y - h)) /
           (4 * h * h);
  };
  auto bound_value = [&](double x, double y) {
    const double ax = std::abs(x), ay = std::abs(y);
    const double xm = region.m == 1 ? ax : 1.0;
    switch (bound) {
      case BoundId::est1:
        return std::pow(ay, s - 1 - region.k - 2 * s * region.m) * xm * std::exp(-ax);
      case BoundId::upper_1_1_3:
        return xm * std::pow(ay, -1 - 2 * s - region.k - 2 * region.m * s) * std::exp(-ax / 4);
      default:
        return xm * std::pow(ay, -1 - 2 * s - region.k) * std::exp(-x * x / 4);
    }
  };

  DecayReport rep{bound, region, std::numeric_limits<double>::infinity(), 0.0};
  for (int a = 0; a < region.nx; ++a) {
    const double x = region.nx == 1 ? region.x_min
                                    : region.x_min + (region.x_max - region.x_min) * a / (region.nx - 1);
    for (int b = 0; b < region.ny; ++b) {
      double y = region.y_min;
      if (region.ny > 1) {
        const double f = static_cast<double>(b) / (region.ny - 1);
        y = region.y_min > 0 ? region.y_min * std::pow(region.y_max / region.y_min, f)
                             : region.y_min + (region.y_max - region.y_min) * f;
      }
      const double bv = bound_value(x, y);
      if (!(bv > 0) || !std::isfinite(bv)) continue;
      const double ratio = ratio_guard(std::abs(derivative(x, y)), bv);
      rep.ratio_min = std::min(rep.ratio_min, ratio);
      rep.ratio_max = std::max(rep.ratio_max, ratio);
    }
  }
  if (!std::isfinite(rep.ratio_min)) throw DomainError("decay_report: no admissible samples");
  return rep;
}

double convolution_residual(const Field& phi, const ModelParams& m) {
  if (m.alpha != 1.0) throw DomainError("convolution_residual requires alpha = 1");
  check_s(m.s);
  const double n0 = detail::norm(phi);
  if (!(n0 > 0)) throw DomainError("convolution_residual: zero field");
  const auto table = detail::linear_table(phi.grid(), m.s, 0.0);
  Field conv = detail::filter(power_nonlinearity(phi, m.p), table,
                              [](double t) { return 1.0 / (1.0 + t); });
  Field diff = phi;
  diff -= conv;
  return detail::norm(diff) / n0;
}

ComplexKernelSample g_kernel(double x, double y, const ModelParams& m, const KernelQuadrature& q) {
  const double s = m.s, w = m.omega;
  check_s(s);
  double floor = 0;  // sup over eta of (omega*eta - |eta|^{2s})
  if (s > 0.5) {
    floor = (2 * s - 1) * std::pow(std::abs(w / (2 * s)), 2 * s / (2 * s - 1));
  } else if (s == 0.5) {
    if (!(std::abs(w) < 1)) throw DomainError("g_kernel: symbol not positive (|omega| >= 1)");
  } else if (w != 0) {
    throw DomainError("g_kernel: symbol not positive for s < 1/2 and omega != 0");
  }
  if (!(m.alpha > floor)) throw DomainError("g_kernel: symbol not positive (alpha <= omega_0)");
  if (x == 0 && y == 0) throw DomainError("g_kernel is singular at the origin");

  // \int exp(-t|eta|^{2s} + t omega eta + i y eta) d eta.
  auto tilted = [&](double t) -> cplx {
    if (s == 0.5) {
      const cplx wy(y, -t * w);
      return 2 * t / (t * t + wy * wy);
    }
    if (w == 0) return hs_profile(y, t, s, q);
    double top = 1;
    while (t * (std::pow(top, 2 * s) - std::abs(w) * top) < kCut + t * floor || top < 1) top *= 2;
    auto envelope = [&](double eta) {
      const double e = eta == 0 ? 0.0 : std::pow(eta, 2 * s);
      return std::exp(-t * e + t * w * eta) + std::exp(-t * e - t * w * eta);
    };
    auto f = [&](double eta) {
      const double e = eta == 0 ? 0.0 : std::pow(eta, 2 * s);
      return std::exp(-t * e + t * w * eta) * std::polar(1.0, y * eta) +
             std::exp(-t * e - t * w * eta) * std::polar(1.0, -y * eta);
    };
    // Oscillation limits the attainable accuracy to rel_tol times the L1 mass.
    const double l1 = quad::integrate<double>(envelope, 0.0, top, 0.0, 1e-6).value;
    auto r = quad::integrate<cplx>(f, 0.0, top, q.rel_tol * l1, q.rel_tol, 20000);
    if (!r.converged) throw ConvergenceError("g_kernel: inner quadrature did not converge");
    return r.value;
  };
  auto f = [&](double u) -> cplx {
    const double t = std::exp(u);
    const double e = -m.alpha * t - x * x / (4 * t);
    if (e < -700) return 0.0;
    return kCs * std::exp(e) * std::sqrt(t) * tilted(t);
  };
  const double lo = std::log(x * x + y * y) - 35;
  const double hi = std::log(60.0 / (m.alpha - floor));
  auto r = quad::integrate<cplx>(f, lo, hi, q.abs_tol, q.rel_tol);
  if (!r.converged) throw ConvergenceError("g_kernel: quadrature did not converge");
  return {x, y, r.value, r.abs_err};
}

DecayRate decay_rate(const ModelParams& m, const GridSpec& g) {
  DecayRate d;
  if (m.s == 0.5 && std::abs(m.omega) > 0.5) d.omega2 = (1 - std::abs(m.omega)) / 2;
  // Smallest omega_1 with |eta|^{2s} - omega eta + omega_1 >= omega_2 |eta|^{2s}
  // on the lattice.
  double need = 0;
  for (int j = 0; j < g.ny(); ++j)
    need = std::max(need, m.omega * g.eta_odd()[j] - (1 - d.omega2) * abs_pow(g.eta()[j], m.s));
  d.omega1 = std::max(need, 1e-9 * m.alpha);
  if (!(d.omega1 < m.alpha)) throw DomainError("decay_rate: no omega_1 in (0, alpha)");
  d.alpha0 = m.alpha - d.omega1;
  return d;
}

void write_kernel_csv(const std::string& path, const std::vector<KernelSample>& samples) {
  CsvWriter w(path, {"x", "y", "value", "abs_err_estimate"});
  for (const auto& k : samples) w.row({k.x, k.y, k.value, k.abs_err_estimate});
  w.close();
}

}  // namespace afnls
