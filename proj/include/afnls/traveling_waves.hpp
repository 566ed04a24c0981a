#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "afnls/functionals.hpp"
#include "afnls/grid.hpp"
#include "afnls/ground_state.hpp"
#include "afnls/kernel.hpp"

namespace afnls {

// (2s-1) |omega/(2s)|^{2s/(2s-1)} for 1/2 < s < 1.
double omega_floor(double s, double omega);

struct Coercivity {
  bool coercive = false;
  double minimum = 0;  // min over the lattice of alpha + xi^2 + |eta|^{2s} - omega*eta
};

Coercivity check_coercivity(const ModelParams& m, const GridSpec& g);

struct BoostedWave {
  Field field;
  ModelParams params;
  double quotient = 0;
  double el_residual = 0;
  std::optional<double> poho_ratio;  // s = 1/2 and omega != 0 only
  int iterations = 0;
};

struct BoostedOptions {
  double tol = 1e-9;
  int max_iter = 20000;
  std::optional<Field> seed;
  // Called once per accepted iterate with (iteration, quotient).
  std::function<void(int, double)> on_iterate;
};

// Minimizes the Weinstein quotient with ||u||_p = 1 per iterate, then rescales
// to solve (alpha + xi^2 + |eta|^{2s} - omega*eta) phi = |phi|^{p-2} phi.
BoostedWave solve_boosted(const ModelParams& m, const GridSpec& g, const BoostedOptions& opt = {});

// Symmetric-decreasing rearrangement of |uh(xi, .)| in eta, column by column.
Field steiner_symmetrize(const Field& u);

// (\int sgn(eta) |phi_hat|^2) / (omega ||phi||_2^2).
double half_wave_pohozaev(const Field& phi, double omega);

struct DecayWindow {
  double x_max = 3;
  double y_min = 3;
  double y_max = 0;  // 0 selects ly / 2
};

// Extremes of |y|^2 exp(sqrt(alpha_0)|x|) |phi| over the window.
DecayReport boosted_decay_check(const BoostedWave& wave, const DecayWindow& w = {});

struct ScalingStudy {
  std::vector<double> omegas;
  std::vector<double> masses;     // ||u_omega||_2
  std::vector<double> hdots;      // ||u_omega||_Hdot
  std::vector<double> quotients;
  double fitted_slope = 0;        // d log||u||_2 / d log(1 - |omega|)
  double hdot_slope = 0;
};

// Per omega, the box half-width in y is ly (1 - |omega|).
ScalingStudy mass_scaling_study(const std::vector<double>& omegas, const ModelParams& m,
                                const GridSpec& g, const BoostedOptions& opt = {});

void write_scaling_csv(const std::string& path, const ScalingStudy& st);

// Normalized flow for E_omega on S_c.
GroundStateResult normalized_boosted_min(double c, const ModelParams& m, const GridSpec& g,
                                         const SolverOptions& opt = {});

}  // namespace afnls
