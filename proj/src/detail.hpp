#pragma once

#include <vector>

#include "afnls/functionals.hpp"
#include "afnls/ground_state.hpp"
#include "afnls/kernels.hpp"
#include "afnls/spectral.hpp"

namespace afnls::detail {

// xi^2 + |eta|^{2s} - omega*eta on the lattice, flat row-major.
inline std::vector<double> linear_table(const GridSpec& g, double s, double omega) {
  std::vector<double> t(g.size());
  for (int i = 0; i < g.nx(); ++i)
    for (int j = 0; j < g.ny(); ++j)
      t[static_cast<std::size_t>(i) * g.ny() + j] =
          g.xi()[i] * g.xi()[i] + abs_pow(g.eta()[j], s) - omega * g.eta_odd()[j];
  return t;
}

// Physical field -> physical field multiplied by f(table[k]) in spectral space.
template <class F>
Field filter(const Field& u, const std::vector<double>& table, F&& f) {
  Field uh = to_spectrum(u);
  const int ny = u.grid().ny();
  apply_multiplier(uh, [&](int i, int j) { return f(table[static_cast<std::size_t>(i) * ny + j]); });
  return from_spectrum(uh);
}

inline double re_inner(const Field& a, const Field& b) { return inner(a, b).real(); }

inline double norm(const Field& a) { return std::sqrt(re_inner(a, a)); }

// y += a x
inline void axpy(double a, const Field& x, Field& y) {
  kernels::parallel::axpy(a, x.values(), y.values());
}

// Turns a normalized-flow outcome into a solution on S_c, polishing at fixed
// frequency when the flow stalled near a critical point.
GroundStateResult finish_normalized(FlowOutcome f, double c, const ModelParams& m,
                                    const SolverOptions& opt);

}  // namespace afnls::detail
