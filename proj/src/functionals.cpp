#include "afnls/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "afnls/error.hpp"
#include "afnls/kernels.hpp"
#include "afnls/spectral.hpp"

namespace afnls {

namespace kp = kernels::parallel;

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::subcritical: return "subcritical";
    case Regime::critical: return "critical";
    case Regime::supercritical: return "supercritical";
    case Regime::fixed_alpha: return "fixed_alpha";
  }
  return "?";
}

double critical_exponent(double s) { return 2 * (3 * s + 1) / (s + 1); }
double upper_exponent(double s) { return 2 * (1 + s) / (1 - s); }

bool is_critical(const ModelParams& m) {
  const double pc = critical_exponent(m.s);
  return std::abs(m.p - pc) <= 1e-12 * pc;
}

Regime classify_regime(const ModelParams& m) {
  if (!(m.s > 0 && m.s < 1)) throw DomainError("s must lie in (0, 1)");
  if (!(m.p > 2)) throw DomainError("p must exceed 2");
  if (!(m.p < upper_exponent(m.s)))
    throw DomainError("no nontrivial solution for p >= 2(s+1)/(1-s)");
  if (is_critical(m)) return Regime::critical;
  return m.p < critical_exponent(m.s) ? Regime::subcritical : Regime::supercritical;
}

double mass(const Field& u) {
  require_physical(u, "mass");
  require_finite(u, "mass");
  return kp::sum_abs2(u.values()) * u.grid().cell();
}

double lp_norm_p(const Field& u, double p) {
  require_physical(u, "lp_norm_p");
  const Field v = from_spectrum(dealias(to_spectrum(u)));
  return kp::sum_abs_pow(v.values(), p) * u.grid().cell();
}

Components components(const Field& u, const ModelParams& m) {
  require_physical(u, "components");
  require_finite(u, "components");
  const GridSpec& g = u.grid();
  const Field uh = to_spectrum(u);
  Components c;
  c.mass = kp::sum_abs2(u.values()) * g.cell();
  const auto& xi = g.xi();
  const auto& eta = g.eta();
  const auto& xo = g.xi_odd();
  const auto& eo = g.eta_odd();
  c.hx = spectral_integral(uh, [&](int i, int) { return xi[i] * xi[i]; });
  c.hy = spectral_integral(uh, [&](int, int j) { return abs_pow(eta[j], m.s); });
  c.eta_moment = spectral_integral(uh, [&](int, int j) { return eo[j]; });
  c.xi_moment = spectral_integral(uh, [&](int i, int) { return xo[i]; });
  c.sgn_moment = spectral_integral(uh, [&](int, int j) {
    return eo[j] > 0 ? 1.0 : (eo[j] < 0 ? -1.0 : 0.0);
  });
  const Field v = from_spectrum(dealias(uh));
  c.lpp = kp::sum_abs_pow(v.values(), m.p) * g.cell();
  return c;
}

double energy_of(const Components& c, const ModelParams& m) {
  return 0.5 * c.hdot() - c.lpp / m.p;
}

double q_of(const Components& c, const ModelParams& m) {
  return m.s * c.hdot() - (m.s + 1) * (m.p - 2) / (2 * m.p) * c.lpp;
}

double hdot(const Field& u, double s) {
  ModelParams m;
  m.s = s;
  const Components c = components(u, m);
  return c.hdot();
}

double energy(const Field& u, const ModelParams& m) { return energy_of(components(u, m), m); }

double q_pohozaev(const Field& u, const ModelParams& m) { return q_of(components(u, m), m); }

double momentum(const Field& u) {
  ModelParams m;
  const Components c = components(u, m);
  return c.eta_moment + c.xi_moment;
}

double energy_omega(const Field& u, const ModelParams& m) {
  const Components c = components(u, m);
  return energy_of(c, m) - 0.5 * m.omega * c.eta_moment;
}

double weinstein_quotient(const Field& u, const ModelParams& m) {
  const Components c = components(u, m);
  if (!(c.lpp > 0)) throw DomainError("weinstein_quotient: zero field");
  const double num = c.hdot() - m.omega * c.eta_moment + m.alpha * c.mass;
  return std::pow(num, m.p / 2) / c.lpp;
}

double quadratic_form_omega(const GridSpec& g, const ModelParams& m) {
  double best = std::numeric_limits<double>::infinity();
  for (double xi : g.xi())
    for (int j = 0; j < g.ny(); ++j)
      best = std::min(best, m.alpha + xi * xi + abs_pow(g.eta()[j], m.s) -
                                m.omega * g.eta_odd()[j]);
  return best;
}

Diagnostics diagnostics(const Field& u, const ModelParams& m, double t) {
  const Components c = components(u, m);
  Diagnostics d;
  d.t = t;
  d.mass = c.mass;
  d.energy = energy_of(c, m);
  d.q = q_of(c, m);
  d.momentum = c.eta_moment + c.xi_moment;
  d.hdot = c.hdot();
  d.lp = std::pow(c.lpp, 1.0 / m.p);
  return d;
}

Field power_nonlinearity(const Field& u, double p) {
  Field r = u.zeros_like();
  kp::power_nonlinearity(u.values(), r.values(), p);
  return r;
}

cplx inner(const Field& a, const Field& b) {
  return kp::inner(a.values(), b.values()) * a.grid().cell();
}

}  // namespace afnls
