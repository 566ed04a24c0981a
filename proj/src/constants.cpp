#include <cmath>

#include "afnls/error.hpp"
#include "afnls/ground_state.hpp"

namespace afnls {

namespace {

void check_q(double q, double s) {
  if (!(s > 0 && s < 1)) throw DomainError("s must lie in (0, 1)");
  if (!(q >= 2 && q < upper_exponent(s)))
    throw DomainError("exponent q must lie in [2, 2(1+s)/(1-s))");
}

double tail_factor(double q, double s) {
  return std::pow(2 * (1 + s) - q * (1 - s), (4 * s - (q - 2) * (1 + s)) / (4 * s));
}

}  // namespace

double sharp_gn_constant(double q, double s, double phi_mass) {
  check_q(q, s);
  const double inv = std::pow(q - 2, (q - 2) * (1 + s) / (4 * s)) * std::pow(s, (q - 2) / 4) *
                     tail_factor(q, s) * std::pow(phi_mass, (q - 2) / 2) / (2 * q * s);
  return 1 / inv;
}

double sharp_h_constant(double q, double s, double phi_mass) {
  check_q(q, s);
  const double inv = std::pow((q - 2) * (s + 1), (q - 2) * (1 + s) / (4 * s)) * tail_factor(q, s) *
                     std::pow(phi_mass, (q - 2) / 2) / (2 * q * s);
  return 1 / inv;
}

ThresholdReport sharp_constants(const Field& phi, const ModelParams& m) {
  check_q(m.p, m.s);
  const double mphi = m.p == 2 ? 1.0 : mass(phi);
  ThresholdReport r;
  r.c_qs = sharp_gn_constant(m.p, m.s, mphi);
  r.c_h = sharp_h_constant(m.p, m.s, mphi);
  return r;
}

double critical_mass(const Field& phi_crit, const ModelParams& m) {
  if (!(m.s > 0 && m.s < 1) || !is_critical(m))
    throw DomainError("critical_mass requires p = 2(3s+1)/(s+1)");
  const double ch = sharp_h_constant(m.p, m.s, mass(phi_crit));
  return std::pow((3 * m.s + 1) / (ch * (m.s + 1)), (m.s + 1) / (2 * m.s));
}

double threshold_g(double x, double c_ps, const ModelParams& m) {
  const double k = (m.p - 2) * (1 + m.s) / (2 * m.s);
  return 0.5 * x * x - c_ps / m.p * std::pow(x, k);
}

double threshold_g_prime(double x, double c_ps, const ModelParams& m) {
  const double k = (m.p - 2) * (1 + m.s) / (2 * m.s);
  return x - c_ps * k / m.p * std::pow(x, k - 1);
}

ThresholdReport blowup_thresholds(const Field& phi, const ModelParams& m) {
  if (classify_regime(m) != Regime::supercritical)
    throw DomainError("blowup_thresholds requires the supercritical regime");
  const double s = m.s, p = m.p;
  const double mphi = mass(phi);
  ThresholdReport r = sharp_constants(phi, m);
  const double delta = (p - 2) * (1 + s) - 4 * s;
  const double d = p * (s - 1) + 2 * (1 + s);
  r.rho = d / delta;
  r.x0_sq = (p - 2) * std::pow(s, s * (p - 2) / delta) /
            (d * std::pow(1 + s, 4 * s / delta)) * std::pow(mphi, 2 * s * (p - 2) / delta);
  r.g_x0 = threshold_g(std::sqrt(r.x0_sq), r.c_qs, m);
  r.ratio_bound =
      std::pow(std::pow(s, s) / std::pow(s + 1, s + 1), (p - 2) / delta) * std::pow(mphi, r.rho);
  r.omega0 = s > 0.5 ? (2 * s - 1) * std::pow(std::abs(m.omega / (2 * s)), 2 * s / (2 * s - 1))
                     : 0.0;
  return r;
}

}  // namespace afnls
