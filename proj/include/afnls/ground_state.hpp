#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "afnls/functionals.hpp"
#include "afnls/grid.hpp"

namespace afnls {

struct GroundStateResult {
  Field field;
  double multiplier = 0;  // Lagrange alpha, or the prescribed alpha
  double energy = 0;
  double q_residual = 0;     // |Q| / hdot
  double grad_residual = 0;  // relative stationarity residual
  int iterations = 0;
  Regime regime = Regime::fixed_alpha;
};

struct SolverOptions {
  double tol = 1e-8;       // stationarity tolerance
  int max_iter = 50000;
  double q_tol = 1e-3;     // required |Q|/hdot on success
  std::optional<Field> seed;
  // Called once per accepted iterate with (iteration, energy).
  std::function<void(int, double)> on_iterate;
};

// Gaussian exp(-(x/ax)^2 - (y/ay)^2) with widths ax = lx/8, ay = ly/8.
Field gaussian_seed(const GridSpec& g);

// Shift the modulus peak to (0, 0) and rotate the phase so u(0,0) > 0.
void fix_gauge(Field& u);

// ||(alpha + L) u - |u|^{p-2} u|| / ||u||, L = -d_xx + D_y^{2s} - omega*(-i d_y).
double stationarity_residual(const Field& u, const ModelParams& m);

// Mass exponent of the alpha-family: M(phi_alpha) = alpha^gamma M(phi_1).
double mass_exponent(double s, double p);
// Box stretched for frequency alpha from a reference alpha = 1 box.
GridSpec scaled_grid(const GridSpec& base, double alpha, double s);
// Frequency alpha at which the alpha-family carries mass c.
double predicted_alpha(double c, double mass_at_alpha1, double s, double p);

GroundStateResult solve_fixed_alpha(const ModelParams& m, const GridSpec& g,
                                    const SolverOptions& opt = {});

// Returns (t_u, u_{t_u}); bisection on t -> Q(u_t) after bracketing.
std::pair<double, Field> project_pohozaev(const Field& u, const ModelParams& m,
                                          double tol = 1e-9);
// Closed-form t_u from the components of u.
double pohozaev_scale(const Field& u, const ModelParams& m);

// Normalized flow on S_c for E_omega (omega from m). Does not throw on
// non-convergence; the caller inspects `converged`.
struct FlowOutcome {
  Field field;
  double energy = 0;
  double multiplier = 0;
  double residual = 0;
  int iterations = 0;
  bool converged = false;
};
FlowOutcome normalized_flow(Field u0, double c, const ModelParams& m, const SolverOptions& opt);

// Backward-Euler imaginary-time flow on S_c with step tau:
// u <- (1 + tau L)^{-1} (u + tau |u|^{p-2} u), then rescaled to mass c.
// Unlike normalized_flow it moves at the speed of the heat flow, so a spreading
// iterate stays localized for many steps. on_step sees (step, E_omega).
FlowOutcome imaginary_time_flow(Field u0, double c, const ModelParams& m, double tau, int steps,
                                const std::function<void(int, double)>& on_step = {});

GroundStateResult solve_subcritical(double c, const ModelParams& m, const GridSpec& g,
                                    const SolverOptions& opt = {});
GroundStateResult solve_supercritical(double c, const ModelParams& m, const GridSpec& g,
                                      const SolverOptions& opt = {});

struct ThresholdReport {
  double c_qs = 0;
  double c_h = 0;
  double c_star = 0;
  double rho = 0;
  double x0_sq = 0;
  double g_x0 = 0;
  double ratio_bound = 0;
  double omega0 = 0;
};

// Sharp constants from the alpha = 1 ground state of exponent q = m.p. With
// q = 2 phi is not used.
ThresholdReport sharp_constants(const Field& phi, const ModelParams& m);
double sharp_gn_constant(double q, double s, double phi_mass);
double sharp_h_constant(double q, double s, double phi_mass);
double critical_mass(const Field& phi_crit, const ModelParams& m);
ThresholdReport blowup_thresholds(const Field& phi, const ModelParams& m);
// g(X) = X^2/2 - (C/p) X^{(p-2)(1+s)/(2s)} and its derivative.
double threshold_g(double x, double c_ps, const ModelParams& m);
double threshold_g_prime(double x, double c_ps, const ModelParams& m);

}  // namespace afnls
