#pragma once

#include <optional>

#include "afnls/grid.hpp"

namespace afnls {

struct ModelParams {
  double s = 0.5;
  double p = 3.0;
  double alpha = 1.0;
  double omega = 0.0;
  double c = 1.0;
};

enum class Regime { subcritical, critical, supercritical, fixed_alpha };

const char* regime_name(Regime r);

// Mass-critical exponent 2(3s+1)/(s+1).
double critical_exponent(double s);
// Upper admissible exponent 2(1+s)/(1-s).
double upper_exponent(double s);
// Sub/critical/supercritical by p; throws DomainError outside 0<s<1, 2<p<upper.
Regime classify_regime(const ModelParams& m);
// Exact comparison with a relative slack of 1e-12.
bool is_critical(const ModelParams& m);

struct Diagnostics {
  double t = 0;
  double mass = 0;
  double energy = 0;
  double q = 0;
  double momentum = 0;
  double hdot = 0;
  double lp = 0;  // the L^p norm itself, not its p-th power
  std::optional<double> virial;
};

// Quadratic and L^p pieces of a field, computed with one transform.
struct Components {
  double mass = 0;
  double hx = 0;       // ||u_x||^2
  double hy = 0;       // ||D_y^s u||^2
  double lpp = 0;      // ||u||_p^p (after 2/3 dealiasing)
  double eta_moment = 0;  // (2 pi)^-2 \int eta |uh|^2
  double xi_moment = 0;   // (2 pi)^-2 \int xi |uh|^2
  double sgn_moment = 0;  // (2 pi)^-2 \int sgn(eta) |uh|^2
  double hdot() const { return hx + hy; }
};

Components components(const Field& u, const ModelParams& m);

double energy_of(const Components& c, const ModelParams& m);
double q_of(const Components& c, const ModelParams& m);

double mass(const Field& u);
double hdot(const Field& u, double s);
double lp_norm_p(const Field& u, double p);
double energy(const Field& u, const ModelParams& m);
double q_pohozaev(const Field& u, const ModelParams& m);
double momentum(const Field& u);
// E(u) - (omega/2) \int eta |uh|^2, the energy of the boosted problem with
// linear symbol xi^2 + |eta|^{2s} - omega*eta.
double energy_omega(const Field& u, const ModelParams& m);
// (hdot - omega \int eta |uh|^2 + alpha mass)^{p/2} / ||u||_p^p.
double weinstein_quotient(const Field& u, const ModelParams& m);
// Minimum of alpha + xi^2 + |eta|^{2s} - omega*eta over the lattice.
double quadratic_form_omega(const GridSpec& g, const ModelParams& m);

Diagnostics diagnostics(const Field& u, const ModelParams& m, double t = 0);

// |u|^{p-2} u pointwise, without dealiasing.
Field power_nonlinearity(const Field& u, double p);

// Inner product sum conj(a) b dx dy over physical samples.
cplx inner(const Field& a, const Field& b);

// u_t(x, y) = t^{(s+1)/2} u(t^s x, t y) by trigonometric interpolation.
// Samples whose preimage leaves the box are set to 0. Throws ResolutionError
// when more than band_tol of the mass (relative) is pushed out of the box or
// out of the resolved frequency band.
Field scale_field(const Field& u, double t, double s, double band_tol = 1e-8);

}  // namespace afnls
