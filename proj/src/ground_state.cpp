#include "afnls/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "afnls/error.hpp"
#include "detail.hpp"

namespace afnls {

namespace kp = kernels::parallel;
using detail::axpy;
using detail::re_inner;

Field gaussian_seed(const GridSpec& g) {
  const double ax = g.lx() / 8, ay = g.ly() / 8;
  return sample(g, [&](double x, double y) {
    return cplx(std::exp(-(x / ax) * (x / ax) - (y / ay) * (y / ay)), 0.0);
  });
}

void fix_gauge(Field& u) {
  const GridSpec& g = u.grid();
  std::size_t best = 0;
  double top = -1;
  for (std::size_t k = 0; k < u.size(); ++k)
    if (std::abs(u[k]) > top) top = std::abs(u[k]), best = k;
  if (top <= 0) return;
  const int i0 = static_cast<int>(best / g.ny()), j0 = static_cast<int>(best % g.ny());
  const cplx rot = std::conj(u[best]) / top;
  std::vector<cplx> out(u.size());
  for (int i = 0; i < g.nx(); ++i) {
    const int si = ((i - g.nx() / 2 + i0) % g.nx() + g.nx()) % g.nx();
    for (int j = 0; j < g.ny(); ++j) {
      const int sj = ((j - g.ny() / 2 + j0) % g.ny() + g.ny()) % g.ny();
      out[static_cast<std::size_t>(i) * g.ny() + j] = rot * u(si, sj);
    }
  }
  u.data() = std::move(out);
}

double stationarity_residual(const Field& u, const ModelParams& m) {
  const auto table = detail::linear_table(u.grid(), m.s, m.omega);
  Field r = detail::filter(u, table, [&](double t) { return t + m.alpha; });
  const Field n = power_nonlinearity(u, m.p);
  r -= n;
  const double un = detail::norm(u);
  if (!(un > 0)) throw DomainError("stationarity_residual: zero field");
  return detail::norm(r) / un;
}

double mass_exponent(double s, double p) { return 2 / (p - 2) - 0.5 - 1 / (2 * s); }

GridSpec scaled_grid(const GridSpec& base, double alpha, double s) {
  return build_grid(base.nx(), base.ny(), base.lx() / std::sqrt(alpha),
                    base.ly() * std::pow(alpha, -1 / (2 * s)));
}

double predicted_alpha(double c, double mass_at_alpha1, double s, double p) {
  return std::pow(c / mass_at_alpha1, 1 / mass_exponent(s, p));
}

namespace {

struct PetviashviliOutcome {
  Field u;
  double residual;
  int iterations;
};

// Iterate u <- S^{(p-1)/(p-2)} T^{-1} N(u), S the stabilizing quotient, until
// ||T u - N(u)|| <= tol * ||T u|| (or tol * ||u|| when relative_to_u).
// `table` holds the full positive symbol T.
PetviashviliOutcome petviashvili(Field u, const std::vector<double>& table, double p, double tol,
                                 int max_iter, bool relative_to_u = false) {
  const double expo = (p - 1) / (p - 2);
  const GridSpec& g = u.grid();
  const std::size_t n = g.size();
  double res = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    const Field uh = to_spectrum(u);
    const Field nh = to_spectrum(power_nonlinearity(u, p));
    double num = 0, den = 0, r2 = 0, u2 = 0;
    for (std::size_t k = 0; k < n; ++k) {
      num += table[k] * std::norm(uh[k]);
      den += (std::conj(uh[k]) * nh[k]).real();
      r2 += std::norm(table[k] * uh[k] - nh[k]);
      u2 += std::norm(relative_to_u ? uh[k] : table[k] * uh[k]);
    }
    if (!(u2 > 0) || !(den > 0) || !std::isfinite(num))
      throw ConvergenceError("fixed-frequency iteration collapsed to the zero field");
    res = std::sqrt(r2 / u2);
    if (res <= tol) return {std::move(u), res, it};
    const double factor = std::pow(num / den, expo);
    Field next = nh;
    for (std::size_t k = 0; k < n; ++k) next[k] *= factor / table[k];
    u = from_spectrum(next);
  }
  throw ConvergenceError("fixed-frequency iteration did not reach residual " + std::to_string(tol) +
                         " (last " + std::to_string(res) + ")");
}

GroundStateResult finish(Field u, const ModelParams& m, double multiplier, double grad_res,
                         int iterations, Regime regime) {
  fix_gauge(u);
  GroundStateResult r{std::move(u)};
  ModelParams mm = m;
  const Components c = components(r.field, mm);
  r.multiplier = multiplier;
  r.energy = energy_of(c, mm) - 0.5 * mm.omega * c.eta_moment;
  r.q_residual = std::abs(q_of(c, mm)) / c.hdot();
  r.grad_residual = grad_res;
  r.iterations = iterations;
  r.regime = regime;
  return r;
}

void normalize_mass(Field& u, double c) {
  const double m = mass(u);
  if (!(m > 0)) throw ConvergenceError("iterate vanished");
  u *= std::sqrt(c / m);
}


struct Polished {
  Field u;
  double alpha;
  double residual;
  int iterations;
};

// Solve (table + alpha) u = |u|^{p-2} u at fixed alpha, then adjust log(alpha)
// by secant steps (first slope gamma) until the mass equals c. The returned
// field is renormalized to mass c exactly.
Polished polish_to_mass(const Field& seed, double c, const std::vector<double>& table,
                        double alpha0, double gamma, double tol, double p) {
  auto solve_at = [&](double alpha, const Field& s) {
    auto t = table;
    for (double& x : t) x += alpha;
    return petviashvili(s, t, p, std::min(tol, 1e-10), 20000);
  };
  double la = std::log(alpha0);
  auto cur = solve_at(alpha0, seed);
  int iterations = cur.iterations;
  double lm = std::log(mass(cur.u));
  double la_prev = 0, lm_prev = 0;
  bool have_prev = false;
  const double target = std::log(c);
  for (int k = 0; k < 30 && std::abs(lm - target) > 1e-12; ++k) {
    double slope = gamma;
    if (have_prev && la != la_prev) slope = (lm - lm_prev) / (la - la_prev);
    if (!(std::abs(slope) > 1e-3 * std::abs(gamma))) slope = gamma;
    la_prev = la;
    lm_prev = lm;
    have_prev = true;
    la += (target - lm) / slope;
    cur = solve_at(std::exp(la), cur.u);
    iterations += cur.iterations;
    lm = std::log(mass(cur.u));
  }
  if (std::abs(lm - target) > 1e-9)
    throw ConvergenceError("fixed-frequency polish did not reach the mass constraint");
  normalize_mass(cur.u, c);
  // Residual of the renormalized field against its own frequency.
  auto t = table;
  for (double& x : t) x += std::exp(la);
  Field r = detail::filter(cur.u, t, [](double v) { return v; });
  r -= power_nonlinearity(cur.u, p);
  const double res = detail::norm(r) / detail::norm(detail::filter(cur.u, t, [](double v) { return v; }));
  return {std::move(cur.u), std::exp(la), res, iterations};
}

}  // namespace

GroundStateResult solve_fixed_alpha(const ModelParams& m, const GridSpec& g,
                                    const SolverOptions& opt) {
  classify_regime(m);
  if (!(m.alpha > 0)) throw DomainError("fixed-frequency solve needs alpha > 0");
  auto table = detail::linear_table(g, m.s, 0.0);
  for (double& t : table) t += m.alpha;
  Field seed = opt.seed ? *opt.seed : gaussian_seed(g);
  if (!seed.grid().same_as(g)) throw DomainError("seed grid does not match");
  auto out = petviashvili(std::move(seed), table, m.p, opt.tol, opt.max_iter, true);
  return finish(std::move(out.u), m, m.alpha, out.residual, out.iterations, Regime::fixed_alpha);
}

double pohozaev_scale(const Field& u, const ModelParams& m) {
  const Components c = components(u, m);
  const double beta = (m.s + 1) * (m.p - 2) / 2;
  if (!(c.lpp > 0) || !(c.hdot() > 0)) throw DomainError("pohozaev_scale: zero field");
  return std::pow(m.s * c.hdot() * m.p / (beta * c.lpp), 1 / (beta - 2 * m.s));
}

std::pair<double, Field> project_pohozaev(const Field& u, const ModelParams& m, double tol) {
  if (classify_regime(m) != Regime::supercritical)
    throw DomainError("project_pohozaev requires the supercritical regime");
  const double h0 = hdot(u, m.s);
  if (!(h0 > 0)) throw DomainError("project_pohozaev: zero field");
  auto q_at = [&](double t) {
    const Field v = scale_field(u, t, m.s, 1e-6);
    const Components c = components(v, m);
    return std::make_pair(q_of(c, m) / c.hdot(), v);
  };
  // Bracket in log t around the closed-form guess.
  const double guess = pohozaev_scale(u, m);
  double lo = guess, hi = guess;
  try {
    for (double f = 1.001; q_at(lo).first <= 0; f *= f) {
      lo = guess / f;
      if (lo < 1e-6) throw ResolutionError("t below 1e-6");
    }
    for (double f = 1.001; q_at(hi).first >= 0; f *= f) {
      hi = guess * f;
      if (hi > 1e6) throw ResolutionError("t above 1e6");
    }
  } catch (const ResolutionError& e) {
    throw ResolutionError(std::string("project_pohozaev: failed to bracket t_u (") + e.what() + ")");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = std::sqrt(lo * hi);
    auto [q, v] = q_at(mid);
    if (std::abs(q) <= tol || hi / lo - 1 < 1e-15) return {mid, std::move(v)};
    (q > 0 ? lo : hi) = mid;
  }
  const double mid = std::sqrt(lo * hi);
  return {mid, q_at(mid).second};
}

FlowOutcome normalized_flow(Field u, double c, const ModelParams& m, const SolverOptions& opt) {
  const GridSpec& g = u.grid();
  const auto table = detail::linear_table(g, m.s, m.omega);
  const double tmin = *std::min_element(table.begin(), table.end());
  normalize_mass(u, c);

  auto functional = [&](const Field& v, double& quad, double& lpp) {
    const Field vh = to_spectrum(v);
    quad = kp::weighted_abs2(vh.values(), g.nx(), g.ny(), [&](int i, int j) {
             return table[static_cast<std::size_t>(i) * g.ny() + j];
           }) / g.area();
    lpp = kp::sum_abs_pow(v.values(), m.p) * g.cell();
    return 0.5 * quad - lpp / m.p;
  };

  double quad = 0, lpp = 0;
  double e = functional(u, quad, lpp);
  double theta = 1.0;
  std::optional<Field> d_prev, r_prev, pr_prev;
  int flat = 0;  // consecutive steps accepted only within round-off
  FlowOutcome out{u};
  for (int it = 0; it < opt.max_iter; ++it) {
    const Field lu = detail::filter(u, table, [](double t) { return t; });
    Field grad = lu;
    grad -= power_nonlinearity(u, m.p);
    const double uu = re_inner(u, u);
    const double mu = -re_inner(u, grad) / uu;
    Field r = grad;
    axpy(mu, u, r);
    const double lnorm = detail::norm(lu);
    const double res = lnorm > 0 ? detail::norm(r) / lnorm : 0.0;
    out.multiplier = mu;
    out.residual = res;
    out.iterations = it;
    if (res <= opt.tol) {
      out.converged = true;
      break;
    }
    const double sig = std::max(mu + tmin, 1e-8 + 1e-3 * std::abs(mu));
    auto precond = [&](double t) { return 1.0 / (t - tmin + sig); };
    const Field pr = detail::filter(r, table, precond);
    const Field pu = detail::filter(u, table, precond);
    Field d = pu;
    d *= re_inner(u, pr) / re_inner(u, pu);
    d -= pr;
    if (d_prev) {
      const double b_den = re_inner(*r_prev, *pr_prev);
      Field diff = pr;
      diff -= *pr_prev;
      const double b = b_den > 0 ? std::max(0.0, re_inner(r, diff) / b_den) : 0.0;
      Field cg = d;
      axpy(b, *d_prev, cg);
      axpy(-re_inner(u, cg) / uu, u, cg);
      if (re_inner(cg, r) < 0) d = std::move(cg);
    }
    const double slope = re_inner(d, r);
    double th = std::min(theta * 1.5, 4.0);
    Field v = u;
    double en = 0, q2 = 0, l2 = 0;
    bool accepted = false;
    while (th >= 1e-12) {
      v = u;
      axpy(th, d, v);
      normalize_mass(v, c);
      en = functional(v, q2, l2);
      const double roundoff = 1e-13 * (std::abs(quad) + std::abs(lpp));
      if (en <= e + 1e-4 * th * slope || en <= e + roundoff) {
        accepted = true;
        break;
      }
      th *= 0.5;
    }
    if (!accepted) break;
    flat = en < e - 1e-13 * (std::abs(quad) + std::abs(lpp)) ? 0 : flat + 1;
    if (flat >= 10) break;
    theta = th;
    u = std::move(v);
    e = en;
    quad = q2;
    lpp = l2;
    if (opt.on_iterate) opt.on_iterate(it + 1, e);
    d_prev = std::move(d);
    r_prev = std::move(r);
    pr_prev = pr;
  }
  out.field = std::move(u);
  out.energy = e;
  return out;
}

FlowOutcome imaginary_time_flow(Field u, double c, const ModelParams& m, double tau, int steps,
                                const std::function<void(int, double)>& on_step) {
  if (!(tau > 0) || steps < 0) throw DomainError("imaginary_time_flow: need tau > 0 and steps >= 0");
  if (!(c > 0)) throw DomainError("mass constraint c must be positive");
  const auto table = detail::linear_table(u.grid(), m.s, m.omega);
  if (!(1 + tau * *std::min_element(table.begin(), table.end()) > 0))
    throw DomainError("imaginary_time_flow: 1 + tau L is not invertible");
  normalize_mass(u, c);
  FlowOutcome out{u};
  out.energy = energy_omega(u, m);
  for (int k = 1; k <= steps; ++k) {
    Field rhs = u;
    axpy(tau, power_nonlinearity(u, m.p), rhs);
    u = detail::filter(rhs, table, [tau](double t) { return 1 / (1 + tau * t); });
    normalize_mass(u, c);
    out.energy = energy_omega(u, m);
    if (!std::isfinite(out.energy)) throw NonFiniteError("imaginary_time_flow: non-finite energy");
    if (on_step) on_step(k, out.energy);
  }
  out.iterations = steps;
  out.field = std::move(u);
  return out;
}

namespace detail {

// The energy line search cannot resolve stationarity much below 1e-7; a flow
// that stalled close to a critical point is finished by the fixed-frequency
// polish at its own multiplier.
GroundStateResult finish_normalized(FlowOutcome f, double c, const ModelParams& m,
                                    const SolverOptions& opt) {
  int iterations = f.iterations;
  Field u = std::move(f.field);
  double residual = f.residual;
  if (!f.converged) {
    if (!(f.residual < 1e-4) || !(f.multiplier > 0))
      throw ConvergenceError("normalized flow stalled at residual " + std::to_string(f.residual));
    const auto table = detail::linear_table(u.grid(), m.s, m.omega);
    auto pol = polish_to_mass(u, c, table, f.multiplier, mass_exponent(m.s, m.p), opt.tol, m.p);
    u = std::move(pol.u);
    residual = pol.residual;
    iterations += pol.iterations;
  }
  const double alpha =
      m.omega == 0 ? (lp_norm_p(u, m.p) - hdot(u, m.s)) / c : f.multiplier;
  return finish(std::move(u), m, alpha, residual, iterations, Regime::subcritical);
}

}  // namespace detail

GroundStateResult solve_subcritical(double c, const ModelParams& m, const GridSpec& g,
                                    const SolverOptions& opt) {
  if (classify_regime(m) != Regime::subcritical)
    throw DomainError("solve_subcritical requires p < 2(3s+1)/(s+1)");
  if (!(c > 0)) throw DomainError("mass constraint c must be positive");
  Field seed = opt.seed ? *opt.seed : gaussian_seed(g);
  FlowOutcome f = normalized_flow(std::move(seed), c, m, opt);
  return detail::finish_normalized(std::move(f), c, m, opt);
}

GroundStateResult solve_supercritical(double c, const ModelParams& m, const GridSpec& g,
                                      const SolverOptions& opt) {
  if (classify_regime(m) != Regime::supercritical)
    throw DomainError("solve_supercritical requires 2(3s+1)/(s+1) < p < 2(1+s)/(1-s)");
  if (!(c > 0)) throw DomainError("mass constraint c must be positive");
  const auto table = detail::linear_table(g, m.s, 0.0);
  ModelParams raw = m;

  auto energy_raw = [&](const Field& v) {
    const Field vh = to_spectrum(v);
    const double quad = kp::weighted_abs2(vh.values(), g.nx(), g.ny(), [&](int i, int j) {
                          return table[static_cast<std::size_t>(i) * g.ny() + j];
                        }) / g.area();
    return 0.5 * quad - kp::sum_abs_pow(v.values(), m.p) * g.cell() / m.p;
  };
  auto reproject = [&](Field v) {
    normalize_mass(v, c);
    v = scale_field(v, pohozaev_scale(v, raw), m.s, 1e-4);
    normalize_mass(v, c);
    return v;
  };

  // Phase 1: descent on Psi(u) = E(u_{t_u}) over S_c. The gradient is taken
  // on E at the projected point with t_u frozen, then the trial point is
  // renormalized and projected back onto P_c.
  Field u = reproject(opt.seed ? *opt.seed : gaussian_seed(g));
  double e = energy_raw(u);
  double theta = 1.0, mu = 0;
  const int phase1 = std::min(opt.max_iter, 400);
  int it = 0;
  std::vector<double> history{e};
  for (; it < phase1; ++it) {
    const Field lu = detail::filter(u, table, [](double t) { return t; });
    Field grad = lu;
    grad -= power_nonlinearity(u, m.p);
    const double uu = re_inner(u, u);
    mu = -re_inner(u, grad) / uu;
    Field r = grad;
    axpy(mu, u, r);
    if (detail::norm(r) <= opt.tol * detail::norm(lu)) break;
    const double sig = std::max(mu, 1e-8);
    auto precond = [&](double t) { return 1.0 / (t + sig); };
    const Field pr = detail::filter(r, table, precond);
    const Field pu = detail::filter(u, table, precond);
    Field d = pu;
    d *= re_inner(u, pr) / re_inner(u, pu);
    d -= pr;
    double th = std::min(1.0, theta * 2);
    bool accepted = false;
    Field v = u;
    double en = e;
    while (th >= 1e-10) {
      v = u;
      axpy(th, d, v);
      v = reproject(std::move(v));
      en = energy_raw(v);
      if (en <= e + 1e-13 * std::abs(e)) {
        accepted = true;
        break;
      }
      th *= 0.5;
    }
    if (!accepted) break;
    theta = th;
    u = std::move(v);
    e = en;
    if (opt.on_iterate) opt.on_iterate(it + 1, e);
    history.push_back(e);
    const std::size_t h = history.size();
    if (h > 20 && history[h - 21] - e <= 1e-9 * std::abs(e)) break;
  }
  if (!(mu > 0)) throw ConvergenceError("supercritical descent produced a nonpositive multiplier");

  // Phase 2: the periodic box leaves a residual floor for phase 1, so the
  // profile is polished into an exact lattice solution.
  auto cur = polish_to_mass(u, c, table, mu, mass_exponent(m.s, m.p), opt.tol, m.p);
  GroundStateResult r = finish(std::move(cur.u), m, cur.alpha, cur.residual,
                               it + cur.iterations, Regime::supercritical);
  if (!(r.q_residual <= opt.q_tol))
    throw ConvergenceError("supercritical solve ended off the Pohozaev manifold (|Q|/hdot = " +
                           std::to_string(r.q_residual) + ")");
  return r;
}

}  // namespace afnls
