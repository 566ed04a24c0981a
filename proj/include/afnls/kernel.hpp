#pragma once

#include <string>
#include <vector>

#include "afnls/functionals.hpp"
#include "afnls/grid.hpp"

namespace afnls {

struct KernelSample {
  double x = 0, y = 0;
  double value = 0;
  double abs_err_estimate = 0;
};

// The boosted kernel is complex for omega != 0, with G(x, -y) = conj G(x, y).
struct ComplexKernelSample {
  double x = 0, y = 0;
  cplx value;
  double abs_err_estimate = 0;
};

enum class BoundId { est1, upper_1_1_3, lower_1_1_4, boosted };

const char* bound_name(BoundId b);

// Sample rectangle: x in [x_min, x_max] (nx points, linear), y in
// [y_min, y_max] (ny points, geometric when y_min > 0). k and m are the
// y- and x-derivative orders (0 or 1).
struct Region {
  double x_min = 0, x_max = 0;
  double y_min = 1, y_max = 1;
  int nx = 1, ny = 1;
  int k = 0, m = 0;
};

struct DecayReport {
  BoundId bound_id = BoundId::est1;
  Region region;
  double ratio_min = 0, ratio_max = 0;
};

// Quadrature accuracy knobs; `refine` divides both tolerances.
struct KernelQuadrature {
  double rel_tol = 1e-10;
  double abs_tol = 1e-15;
};

// H_s(y, t) = \int exp(-t |eta|^{2s}) exp(i y eta) d eta.
double hs_profile(double y, double t, double s, const KernelQuadrature& q = {});
// Same with its absolute error estimate.
KernelSample hs_profile_sample(double y, double t, double s, const KernelQuadrature& q = {});

// K_s(x, y), normalized so that \int K_s = 1. Undefined at the origin.
KernelSample ks_kernel(double x, double y, double s, const KernelQuadrature& q = {});

// \int K_s over [-X, X] x [-Y, Y] plus an estimate of the tail beyond Y.
double ks_mass(double s, double X, double Y, const KernelQuadrature& q = {});

DecayReport decay_report(double s, BoundId bound, const Region& region,
                         const KernelQuadrature& q = {});

// ||phi - K_s * (|phi|^{p-2} phi)|| / ||phi||, computed with the exact symbol.
double convolution_residual(const Field& phi, const ModelParams& m);

// Inverse transform of 1/(alpha + xi^2 + |eta|^{2s} - omega*eta).
ComplexKernelSample g_kernel(double x, double y, const ModelParams& m,
                             const KernelQuadrature& q = {});

// omega_1 from the lattice scan and alpha_0 = alpha - omega_1.
struct DecayRate {
  double omega1 = 0;
  double omega2 = 0.5;
  double alpha0 = 0;
};
DecayRate decay_rate(const ModelParams& m, const GridSpec& g);

void write_kernel_csv(const std::string& path, const std::vector<KernelSample>& samples);

}  // namespace afnls
