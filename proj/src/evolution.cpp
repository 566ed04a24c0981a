#include "afnls/evolution.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "afnls/csv.hpp"
#include "afnls/error.hpp"
#include "afnls/spectral.hpp"
#include "detail.hpp"

namespace afnls {

namespace kp = kernels::parallel;

const char* scheme_name(Scheme s) { return s == Scheme::strang ? "strang" : "lie"; }

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::blowup_suspected: return "blowup_suspected";
    case Verdict::global_suspected: return "global_suspected";
    case Verdict::undetermined: return "undetermined";
  }
  return "?";
}

double cutoff_profile(double r, int k) {
  if (k < 0 || k > 4) throw DomainError("cutoff_profile: derivative order must be 0..4");
  const double a = std::abs(r);
  const double sg = r < 0 && (k % 2 == 1) ? -1.0 : 1.0;
  if (a <= 1) {
    const double v[5] = {a * a, 2 * a, 2, 0, 0};
    return sg * v[k];
  }
  if (a >= 2) {
    return k == 0 ? 2.0 : 0.0;
  }
  // Degree-9 blend on t = |r| - 1 matching r^2 at 1 and the plateau at 2
  // through the fourth derivative; theta'' <= 2 holds on [1, 2].
  static constexpr double coef[10] = {1, 2, 1, 0, 0, -49, 133, -146, 75, -15};
  const double t = a - 1;
  double v = 0;
  for (int n = 9; n >= k; --n) {
    double c = coef[n];
    for (int d = 0; d < k; ++d) c *= n - d;
    v = v * t + c;
  }
  return sg * v;
}

Cutoff build_cutoff(double R, const GridSpec& g, double s) {
  if (!(R > 1)) throw DomainError("build_cutoff: R must exceed 1");
  if (2 * R > std::min(g.lx(), g.ly()))
    throw DomainError("build_cutoff: 2R exceeds the box half-width");
  Cutoff c;
  c.R = R;
  c.s = s;
  for (int k = 0; k < 5; ++k) {
    const double scale = std::pow(R, 2 - k);
    c.dx[k].resize(g.nx());
    c.dy[k].resize(g.ny());
    for (int i = 0; i < g.nx(); ++i) c.dx[k][i] = scale * cutoff_profile(g.x(i) / R, k);
    for (int j = 0; j < g.ny(); ++j) c.dy[k][j] = scale * cutoff_profile(g.y(j) / R, k);
    double sup = 0;
    for (int n = 0; n <= 20000; ++n) sup = std::max(sup, std::abs(cutoff_profile(n * 1e-4, k)));
    c.c[k] = sup;
  }
  return c;
}

double virial_m(const Field& u, const Cutoff& cut) {
  require_physical(u, "virial_m");
  require_finite(u, "virial_m");
  const GridSpec& g = u.grid();
  if (static_cast<int>(cut.dx[1].size()) != g.nx() || static_cast<int>(cut.dy[1].size()) != g.ny())
    throw DomainError("virial_m: cutoff built on a different grid");
  const Field ux = apply_symbol(u, Symbol::dx());
  const Field uy = apply_symbol(u, Symbol::dy());
  const int nx = g.nx(), ny = g.ny();
  const auto uv = u.values();
  const auto xv = ux.values();
  const auto yv = uy.values();
  // Fixed row order keeps the sum independent of the thread count.
  std::vector<double> rows(nx);
#pragma omp parallel for schedule(static)
  for (int i = 0; i < nx; ++i) {
    double acc = 0;
    for (int j = 0; j < ny; ++j) {
      const std::size_t k = static_cast<std::size_t>(i) * ny + j;
      acc += std::imag(std::conj(uv[k]) * (cut.s * cut.dx[1][i] * xv[k] + cut.dy[1][j] * yv[k]));
    }
    rows[i] = acc;
  }
  double total = 0;
  for (double r : rows) total += r;
  return 2 * total * g.cell();
}

namespace {

// Precomputed linear propagators, keyed by the step. Modes outside the 2/3
// band are zeroed with the propagator, which keeps iterates dealiased.
class Propagator {
 public:
  Propagator(const GridSpec& g, double s) : table_(detail::linear_table(g, s, 0.0)), keep_(g.size()) {
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j)
        keep_[static_cast<std::size_t>(i) * g.ny() + j] =
            std::abs(GridSpec::signed_index(i, g.nx())) <= g.nx() / 3 &&
            std::abs(GridSpec::signed_index(j, g.ny())) <= g.ny() / 3;
  }

  void apply(Field& u, double dt) {
    auto it = cache_.find(dt);
    if (it == cache_.end()) {
      std::vector<cplx> ph(table_.size());
      for (std::size_t k = 0; k < ph.size(); ++k)
        ph[k] = keep_[k] ? std::polar(1.0, -dt * table_[k]) : cplx(0);
      it = cache_.emplace(dt, std::move(ph)).first;
    }
    const auto& ph = it->second;
    const int ny = u.grid().ny();
    Field uh = to_spectrum(u);
    apply_multiplier(uh, [&](int i, int j) { return ph[static_cast<std::size_t>(i) * ny + j]; });
    u = from_spectrum(uh);
  }

 private:
  std::vector<double> table_;
  std::vector<bool> keep_;
  std::map<double, std::vector<cplx>> cache_;
};

Field advance(const Field& u, double dt, const ModelParams& m, Scheme scheme, Propagator& lin) {
  Field v = u;
  if (scheme == Scheme::strang) {
    kp::nonlinear_phase(v.values(), 0.5 * dt, m.p);
    lin.apply(v, dt);
    kp::nonlinear_phase(v.values(), 0.5 * dt, m.p);
  } else {
    kp::nonlinear_phase(v.values(), dt, m.p);
    lin.apply(v, dt);
  }
  if (!v.all_finite()) throw NonFiniteError("step: non-finite samples (numerical blow-up)");
  return v;
}

double max_modulus(const Field& u) {
  double a = 0;
  for (const cplx& z : u.values()) a = std::max(a, std::abs(z));
  return a;
}

}  // namespace

Field step(const Field& u, double dt, const ModelParams& m, Scheme scheme) {
  if (!(dt > 0)) throw DomainError("step: dt must be positive");
  require_physical(u, "step");
  require_finite(u, "step");
  Propagator lin(u.grid(), m.s);
  return advance(u, dt, m, scheme, lin);
}

Trajectory evolve(const Field& u0, double T, double dt, const ModelParams& m,
                  const EvolveOptions& opt) {
  if (!(T > 0)) throw DomainError("evolve: T must be positive");
  if (!(dt > 0)) throw DomainError("evolve: dt must be positive");
  require_physical(u0, "evolve");
  require_finite(u0, "evolve");

  Trajectory tr;
  tr.dt = dt;
  tr.scheme = opt.scheme;
  Propagator lin(u0.grid(), m.s);

  auto record = [&](const Field& u, double t) {
    Diagnostics d = diagnostics(u, m, t);
    if (opt.cutoff) d.virial = virial_m(u, *opt.cutoff);
    tr.times.push_back(t);
    tr.diagnostics.push_back(d);
    return d;
  };

  Field u = u0;
  const double h0 = record(u, 0.0).hdot;
  if (opt.snapshot_every > 0) {
    tr.snapshot_times.push_back(0.0);
    tr.snapshots.push_back(u);
  }

  double t = 0;
  long k = 0;
  while (t < T * (1 - 1e-12)) {
    // Fixed steps land on exact multiples of dt.
    double next = std::min(T, (k + 1) * dt);
    if (opt.phase_limit > 0) {
      double h = std::min(dt, T - t);
      const double amp = std::pow(max_modulus(u), m.p - 2);
      while (h * amp > opt.phase_limit && h > dt * 1e-6) h *= 0.5;
      next = t + h;
    }
    try {
      u = advance(u, next - t, m, opt.scheme, lin);
    } catch (const NonFiniteError&) {
      tr.abort_time = next;
      break;
    }
    ++k;
    t = next;
    const Diagnostics d = record(u, t);
    if (opt.snapshot_every > 0 && k % opt.snapshot_every == 0) {
      tr.snapshot_times.push_back(t);
      tr.snapshots.push_back(u);
    }
    if (!std::isfinite(d.hdot)) {
      tr.abort_time = t;
      break;
    }
    if (opt.hdot_stop > 0 && d.hdot > opt.hdot_stop * h0) break;
  }
  tr.final_state = u;
  return tr;
}

void write_trajectory_csv(const std::string& path, const Trajectory& tr) {
  CsvWriter w(path, {"t", "mass", "energy", "q", "momentum", "hdot", "lp", "virial"});
  for (const auto& d : tr.diagnostics)
    w.row({d.t, d.mass, d.energy, d.q, d.momentum, d.hdot, d.lp,
           d.virial.value_or(std::numeric_limits<double>::quiet_NaN())});
  w.close();
}

VirialReport virial_derivative_check(const Trajectory& tr, const Cutoff& cut,
                                     const ModelParams& m) {
  const std::size_t n = tr.snapshots.size();
  if (n < 3) throw DomainError("virial_derivative_check: needs at least 3 snapshots");
  VirialReport rep;
  rep.q0 = (2 + m.p) / 2;
  rep.constant = 1;
  std::vector<double> mv(n);
  for (std::size_t k = 0; k < n; ++k) mv[k] = virial_m(tr.snapshots[k], cut);
  const double R = cut.R;
  rep.margin = std::numeric_limits<double>::infinity();
  for (std::size_t k = 1; k + 1 < n; ++k) {
    const Field& u = tr.snapshots[k];
    const GridSpec& g = u.grid();
    const double t = tr.snapshot_times[k];
    const double d = (mv[k + 1] - mv[k - 1]) / (tr.snapshot_times[k + 1] - tr.snapshot_times[k - 1]);
    double outer = 0;
    for (int i = 0; i < g.nx(); ++i)
      for (int j = 0; j < g.ny(); ++j)
        if (std::abs(g.x(i)) >= R || std::abs(g.y(j)) >= R) outer += std::norm(u(i, j));
    outer *= g.cell();
    const Components c = components(u, m);
    const double q = q_of(c, m);
    const double b = 8 * q + rep.constant * (std::pow(R, -2) + std::pow(R, -2 * m.s)) * c.mass +
                     rep.constant * std::pow(std::sqrt(outer), rep.q0);
    rep.times.push_back(t);
    rep.dmdt.push_back(d);
    rep.bound.push_back(b);
    rep.q.push_back(q);
    rep.margin = std::min(rep.margin, b - d);
  }
  return rep;
}

BlowupVerdict classify_blowup(const Field& u0, const ModelParams& m, double horizon,
                              const BlowupOptions& opt) {
  if (!(m.s > 0.5 && m.s < 1)) throw DomainError("classify_blowup: requires s in (1/2, 1)");
  const Regime r = classify_regime(m);
  const double e0 = energy(u0, m);
  if (r == Regime::subcritical)
    throw DomainError("classify_blowup: regime mismatch (mass-subcritical p)");
  if (r == Regime::critical && !(e0 < 0))
    throw DomainError("classify_blowup: regime mismatch (critical p needs E(u0) < 0)");
  if (!(horizon > 0)) throw DomainError("classify_blowup: horizon must be positive");

  EvolveOptions eo;
  eo.phase_limit = opt.phase_limit;
  eo.hdot_stop = opt.growth * opt.growth;  // growth is measured on the norm
  const Trajectory tr = evolve(u0, horizon, opt.dt, m, eo);

  BlowupVerdict v;
  v.abort_time = tr.abort_time;
  v.diagnostics = tr.diagnostics;
  v.final_state = tr.final_state;
  v.t_end = tr.times.back();
  v.q_max = -std::numeric_limits<double>::infinity();
  double hmax = 0;
  for (const auto& d : tr.diagnostics) {
    v.q_max = std::max(v.q_max, d.q);
    hmax = std::max(hmax, d.hdot);
  }
  const double h0 = tr.diagnostics.front().hdot;
  v.hdot_growth = std::sqrt(tr.diagnostics.back().hdot / h0);
  const bool grew = std::sqrt(hmax / h0) > opt.growth;
  const bool nan = tr.abort_time.has_value();

  if (v.q_max < 0 && (grew || nan)) {
    v.classification = Verdict::blowup_suspected;
    v.criteria_used.push_back("Q(u(t)) <= -delta, delta = -q_max");
    v.criteria_used.push_back(nan ? "non-finite abort" : "hdot growth");
    return v;
  }
  bool dichotomy = true;
  if (opt.reference) {
    const auto& ref = *opt.reference;
    dichotomy = e0 >= 0 && e0 / ref.energy < ref.ratio_bound &&
                tr.diagnostics.front().hdot / ref.hdot < ref.ratio_bound;
    v.criteria_used.push_back(dichotomy ? "global-side dichotomy holds" : "global-side dichotomy fails");
  }
  if (dichotomy && !nan && !grew) {
    v.classification = Verdict::global_suspected;
    v.criteria_used.push_back("bounded hdot");
  }
  return v;
}

Field instability_data(const Field& phi, double lambda, const ModelParams& m) {
  if (!(lambda > 1)) throw DomainError("instability_data: lambda must exceed 1");
  Field out = scale_field(phi, lambda, m.s);
  const Components a = components(phi, m), b = components(out, m);
  if (!(energy_of(b, m) < energy_of(a, m)) || !(b.hdot() > a.hdot()))
    throw DomainError("instability_data: scaling did not lower E and raise hdot; phi is not on the Pohozaev set");
  return out;
}

}  // namespace afnls
