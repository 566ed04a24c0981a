#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "afnls/functionals.hpp"
#include "afnls/grid.hpp"

namespace afnls {

enum class Scheme { strang, lie };

const char* scheme_name(Scheme s);

// theta_R(r) = R^2 theta(r/R) with theta(r) = r^2 on |r| <= 1, a C^4 blend
// on [1, 2] and the plateau 2 beyond. phi_R(x, y) = s theta_R(x) + theta_R(y).
struct Cutoff {
  double R = 0;
  double s = 0.5;
  // d[k][i] = theta_R^{(k)} at the grid abscissae, k = 0..4.
  std::array<std::vector<double>, 5> dx, dy;
  // sup |theta^{(k)}| of the unit profile; sup |theta_R^{(k)}| = C_k R^{2-k}.
  std::array<double, 5> c{};
};

// Unit profile theta^{(k)}(r), k = 0..4.
double cutoff_profile(double r, int k);

Cutoff build_cutoff(double R, const GridSpec& g, double s);

// 2 Im \int conj(u) (s theta_R'(x) u_x + theta_R'(y) u_y).
double virial_m(const Field& u, const Cutoff& cut);

struct Trajectory {
  std::vector<double> times;
  std::vector<Diagnostics> diagnostics;
  std::vector<double> snapshot_times;
  std::vector<Field> snapshots;
  double dt = 0;
  Scheme scheme = Scheme::strang;
  std::optional<double> abort_time;  // first time a non-finite sample appeared
  std::optional<Field> final_state;
};

struct EvolveOptions {
  Scheme scheme = Scheme::strang;
  int snapshot_every = 0;  // steps between stored fields; 0 stores none
  std::optional<Cutoff> cutoff;  // fills Diagnostics::virial
  // Shrink the step so that dt |u|_max^{p-2} <= phase_limit; 0 disables.
  double phase_limit = 0;
  // Stop once hdot exceeds this multiple of its initial value; 0 disables.
  double hdot_stop = 0;
};

// One step of the splitting; throws NonFiniteError on NaN or overflow.
Field step(const Field& u, double dt, const ModelParams& m, Scheme scheme = Scheme::strang);

Trajectory evolve(const Field& u0, double T, double dt, const ModelParams& m,
                  const EvolveOptions& opt = {});

void write_trajectory_csv(const std::string& path, const Trajectory& tr);

struct VirialReport {
  std::vector<double> times;
  std::vector<double> dmdt;
  std::vector<double> bound;  // 8Q + C(R^-2 + R^-2s) M + C ||u||_{L2(outer)}^{q0}
  std::vector<double> q;
  double margin = 0;          // min over times of bound - dmdt
  double constant = 1;
  double q0 = 0;
};

VirialReport virial_derivative_check(const Trajectory& tr, const Cutoff& cut,
                                     const ModelParams& m);

enum class Verdict { blowup_suspected, global_suspected, undetermined };

const char* verdict_name(Verdict v);

// Ground-state data entering the dichotomy conditions.
struct DichotomyReference {
  double energy = 0;      // E(phi)
  double hdot = 0;        // ||phi||_Hdot^2
  double ratio_bound = 0; // (s^s/(s+1)^{s+1})^{(p-2)/Delta} M(phi)^rho
};

struct BlowupVerdict {
  Verdict classification = Verdict::undetermined;
  double q_max = 0;
  double hdot_growth = 0;  // ||u(T)||_Hdot / ||u(0)||_Hdot
  std::vector<std::string> criteria_used;
  double t_end = 0;
  std::optional<double> abort_time;
  std::vector<Diagnostics> diagnostics;
  std::optional<Field> final_state;
};

struct BlowupOptions {
  double dt = 1e-3;
  double phase_limit = 0.05;
  double growth = 3.0;
  std::optional<DichotomyReference> reference;
};

BlowupVerdict classify_blowup(const Field& u0, const ModelParams& m, double horizon,
                              const BlowupOptions& opt = {});

// phi_lambda = scale_field(phi, lambda); checks E drops and hdot grows.
Field instability_data(const Field& phi, double lambda, const ModelParams& m);

}  // namespace afnls
