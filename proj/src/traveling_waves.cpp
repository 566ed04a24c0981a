#include "afnls/traveling_waves.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>

#include "afnls/csv.hpp"
#include "afnls/error.hpp"
#include "afnls/spectral.hpp"
#include "detail.hpp"

namespace afnls {

namespace kp = kernels::parallel;

double omega_floor(double s, double omega) {
  if (!(s > 0.5 && s < 1))
    throw DomainError("omega_floor: defined for 1/2 < s < 1 (s = 1/2 uses |omega| < 1)");
  return (2 * s - 1) * std::pow(std::abs(omega / (2 * s)), 2 * s / (2 * s - 1));
}

Coercivity check_coercivity(const ModelParams& m, const GridSpec& g) {
  Coercivity c;
  c.minimum = quadratic_form_omega(g, m);
  c.coercive = c.minimum > 0;
  return c;
}

namespace {

void check_boosted_domain(const ModelParams& m) {
  if (!(m.s >= 0.5 && m.s < 1)) throw DomainError("boosted waves need 1/2 <= s < 1");
  if (!(m.p > 2 && m.p < upper_exponent(m.s)))
    throw DomainError("boosted waves need 2 < p < 2(1+s)/(1-s)");
  if (m.s > 0.5 && !(m.alpha > omega_floor(m.s, m.omega)))
    throw DomainError("boosted waves need alpha > omega_0");
  if (!(m.alpha > 0)) throw DomainError("boosted waves need alpha > 0");
}

struct Quotient {
  double quad = 0;  // \int T |uh|^2 / (2 pi)^2
  double lpp = 0;
  double value(double p) const { return std::pow(quad, p / 2) / lpp; }
};

double lp_raw(const Field& u, double p) { return kp::sum_abs_pow(u.values(), p) * u.grid().cell(); }

void normalize_lp(Field& u, double p) {
  const double l = lp_raw(u, p);
  if (!(l > 0)) throw ConvergenceError("solve_boosted: iterate vanished");
  u *= std::pow(l, -1 / p);
}

}  // namespace

BoostedWave solve_boosted(const ModelParams& m, const GridSpec& g, const BoostedOptions& opt) {
  check_boosted_domain(m);
  const Coercivity co = check_coercivity(m, g);
  if (!co.coercive) throw DomainError("quadratic form indefinite");

  auto table = detail::linear_table(g, m.s, m.omega);
  for (double& t : table) t += m.alpha;
  const int ny = g.ny();

  auto measure = [&](const Field& v, Field* vh_out) {
    Field vh = to_spectrum(v);
    Quotient q;
    q.quad = spectral_integral(vh, [&](int i, int j) { return table[static_cast<std::size_t>(i) * ny + j]; });
    q.lpp = lp_raw(v, m.p);
    if (!(q.quad > 0)) throw DomainError("quadratic form indefinite");
    if (vh_out) *vh_out = std::move(vh);
    return q;
  };

  Field u = opt.seed ? *opt.seed : gaussian_seed(g);
  if (!u.grid().same_as(g)) throw DomainError("seed grid does not match");
  normalize_lp(u, m.p);
  Field uh(g, Space::spectral);
  Quotient q = measure(u, &uh);
  double res = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < opt.max_iter; ++it) {
    Field nh = to_spectrum(power_nonlinearity(u, m.p));
    const double lambda = q.quad / q.lpp;
    double r2 = 0, t2 = 0;
    for (std::size_t k = 0; k < g.size(); ++k) {
      const cplx tu = table[k] * uh[k];
      r2 += std::norm(tu - lambda * nh[k]);
      t2 += std::norm(tu);
    }
    res = std::sqrt(r2 / t2);
    if (res <= opt.tol) break;
    for (std::size_t k = 0; k < g.size(); ++k) nh[k] /= table[k];
    Field w = from_spectrum(nh);
    normalize_lp(w, m.p);
    // Backtrack along u -> w until the quotient does not increase.
    const double q0 = q.value(m.p);
    bool accepted = false;
    for (double th = 1; th >= 1.0 / 1024; th *= 0.5) {
      Field v = w;
      if (th < 1) {
        v = u;
        v *= 1 - th;
        detail::axpy(th, w, v);
        normalize_lp(v, m.p);
      }
      Field vh(g, Space::spectral);
      const Quotient qv = measure(v, &vh);
      if (qv.value(m.p) <= q0 * (1 + 1e-14)) {
        u = std::move(v);
        uh = std::move(vh);
        q = qv;
        accepted = true;
        if (opt.on_iterate) opt.on_iterate(it, q.value(m.p));
        break;
      }
    }
    if (!accepted) break;
  }
  if (!(res <= std::max(opt.tol, 1e-12) * 100))
    throw ConvergenceError("solve_boosted: Euler-Lagrange residual " + std::to_string(res) +
                           " above tolerance");

  // T u = lambda N(u) becomes T phi = N(phi) for phi = lambda^{1/(p-2)} u.
  const double lambda = q.quad / q.lpp;
  u *= std::pow(lambda, 1 / (m.p - 2));
  fix_gauge(u);

  BoostedWave w{u, m, 0, 0, std::nullopt, 0};
  w.quotient = weinstein_quotient(u, m);
  Field tu = detail::filter(u, table, [](double t) { return t; });
  Field r = tu;
  r -= power_nonlinearity(u, m.p);
  w.el_residual = detail::norm(r) / detail::norm(tu);
  w.iterations = it;
  if (m.s == 0.5 && m.omega != 0) w.poho_ratio = half_wave_pohozaev(u, m.omega);
  return w;
}

Field steiner_symmetrize(const Field& u) {
  require_physical(u, "steiner_symmetrize");
  const GridSpec& g = u.grid();
  const Field uh = to_spectrum(u);
  const int nx = g.nx(), ny = g.ny();
  // Storage slots in the order eta = 0, +1, -1, +2, -2, ..., -ny/2.
  std::vector<int> order;
  order.reserve(ny);
  order.push_back(0);
  for (int k = 1; k < ny / 2; ++k) {
    order.push_back(k);
    order.push_back(ny - k);
  }
  order.push_back(ny / 2);

  Field out(g, Space::spectral);
  std::vector<double> mag(ny);
  for (int i = 0; i < nx; ++i) {
    for (int j = 0; j < ny; ++j) mag[j] = std::abs(uh(i, j));
    std::stable_sort(mag.begin(), mag.end(), std::greater<>());
    for (int k = 0; k < ny; ++k) out(i, order[k]) = mag[k];
  }
  return from_spectrum(out);
}

double half_wave_pohozaev(const Field& phi, double omega) {
  if (omega == 0) throw DomainError("half_wave_pohozaev: omega must be nonzero");
  ModelParams m;
  const Components c = components(phi, m);
  if (!(c.mass > 0)) throw DomainError("half_wave_pohozaev: zero field");
  return c.sgn_moment / (omega * c.mass);
}

DecayReport boosted_decay_check(const BoostedWave& wave, const DecayWindow& w) {
  const Field& u = wave.field;
  const GridSpec& g = u.grid();
  const double y_max = w.y_max > 0 ? w.y_max : g.ly() / 2;
  if (w.x_max > g.lx() || y_max > g.ly() || !(w.y_min < y_max) || !(w.x_max >= 0))
    throw DomainError("boosted_decay_check: region exceeds the box");
  const DecayRate rate = decay_rate(wave.params, g);
  const double a0 = std::sqrt(rate.alpha0);

  DecayReport rep;
  rep.bound_id = BoundId::boosted;
  rep.region = {-w.x_max, w.x_max, w.y_min, y_max, 0, 0, 0, 0};
  rep.ratio_min = std::numeric_limits<double>::infinity();
  rep.ratio_max = 0;
  for (int i = 0; i < g.nx(); ++i) {
    const double x = g.x(i);
    if (std::abs(x) > w.x_max) continue;
    ++rep.region.nx;
    for (int j = 0; j < g.ny(); ++j) {
      const double y = g.y(j);
      if (std::abs(y) < w.y_min || std::abs(y) > y_max) continue;
      const double v = y * y * std::exp(a0 * std::abs(x)) * std::abs(u(i, j));
      rep.ratio_min = std::min(rep.ratio_min, v);
      rep.ratio_max = std::max(rep.ratio_max, v);
    }
  }
  for (int j = 0; j < g.ny(); ++j)
    if (std::abs(g.y(j)) >= w.y_min && std::abs(g.y(j)) <= y_max) ++rep.region.ny;
  if (rep.region.nx == 0 || rep.region.ny == 0)
    throw DomainError("boosted_decay_check: region holds no grid points");
  return rep;
}

namespace {

double ls_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0, sxx = 0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxy += (x[k] - mx) * (y[k] - my);
    sxx += (x[k] - mx) * (x[k] - mx);
  }
  if (!(sxx > 0)) throw DomainError("mass_scaling_study: omegas must give distinct 1 - |omega|");
  return sxy / sxx;
}

}  // namespace

ScalingStudy mass_scaling_study(const std::vector<double>& omegas, const ModelParams& m,
                                const GridSpec& g, const BoostedOptions& opt) {
  if (omegas.size() < 2) throw DomainError("need >= 2 points");
  if (m.s != 0.5) throw DomainError("mass_scaling_study: requires s = 1/2");
  for (double w : omegas)
    if (!(std::abs(w) < 1)) throw DomainError("mass_scaling_study: needs |omega| < 1");
  const int n = static_cast<int>(omegas.size());
  std::vector<std::optional<BoostedWave>> waves(omegas.size());
  std::vector<std::exception_ptr> errors(omegas.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int k = 0; k < n; ++k) {
    try {
      const double w = omegas[k];
      ModelParams mw = m;
      mw.omega = w;
      const GridSpec gw = build_grid(g.nx(), g.ny(), g.lx(), g.ly() * (1 - std::abs(w)));
      BoostedOptions o = opt;
      o.seed.reset();
      waves[k] = solve_boosted(mw, gw, o);
    } catch (...) {
      errors[k] = std::current_exception();
    }
  }
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  ScalingStudy st;
  std::vector<double> lx, lm, lh;
  for (int k = 0; k < n; ++k) {
    const BoostedWave& wave = *waves[k];
    const Components c = components(wave.field, wave.params);
    st.omegas.push_back(omegas[k]);
    st.masses.push_back(std::sqrt(c.mass));
    st.hdots.push_back(std::sqrt(c.hdot()));
    st.quotients.push_back(wave.quotient);
    lx.push_back(std::log(1 - std::abs(omegas[k])));
    lm.push_back(std::log(st.masses.back()));
    lh.push_back(std::log(st.hdots.back()));
  }
  st.fitted_slope = ls_slope(lx, lm);
  st.hdot_slope = ls_slope(lx, lh);
  return st;
}

void write_scaling_csv(const std::string& path, const ScalingStudy& st) {
  CsvWriter w(path, {"omega", "mass", "hdot", "quotient"});
  for (std::size_t k = 0; k < st.omegas.size(); ++k)
    w.row({st.omegas[k], st.masses[k], st.hdots[k], st.quotients[k]});
  w.close();
}

GroundStateResult normalized_boosted_min(double c, const ModelParams& m, const GridSpec& g,
                                         const SolverOptions& opt) {
  if (classify_regime(m) != Regime::subcritical)
    throw DomainError("normalized_boosted_min requires p < 2(3s+1)/(s+1)");
  if (m.omega != 0) {
    if (m.s < 0.5) throw DomainError("normalized_boosted_min: omega != 0 needs s >= 1/2");
    if (m.s == 0.5 && !(std::abs(m.omega) < 1))
      throw DomainError("normalized_boosted_min: s = 1/2 needs |omega| < 1");
  }
  if (!(c > 0)) throw DomainError("mass constraint c must be positive");
  Field seed = opt.seed ? *opt.seed : gaussian_seed(g);
  FlowOutcome f = normalized_flow(std::move(seed), c, m, opt);
  return detail::finish_normalized(std::move(f), c, m, opt);
}

}  // namespace afnls
