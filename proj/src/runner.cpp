#include "afnls/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "afnls/csv.hpp"
#include "afnls/evolution.hpp"
#include "afnls/field_io.hpp"
#include "afnls/ground_state.hpp"
#include "afnls/kernel.hpp"
#include "afnls/rng.hpp"
#include "afnls/traveling_waves.hpp"
#include "json.hpp"

#ifndef AFNLS_VERSION
#define AFNLS_VERSION "0.0.0-unknown"
#endif

namespace afnls {

namespace fs = std::filesystem;
using nlohmann::json;

const char* artifact_version() { return AFNLS_VERSION; }

namespace {

struct Context {
  const ExperimentConfig& cfg;
  RunRecord& rec;
  fs::path dir;

  std::string path(const std::string& name) const { return (dir / name).string(); }
  void produced(const std::string& name) { rec.files.push_back(name); }
};

GridSpec grid_of(const ExperimentConfig& c) {
  const GridDesc& g = *c.grid;
  return build_grid(g.nx, g.ny, g.lx, g.ly);
}

SolverOptions solver_of(const ExperimentConfig& c) {
  SolverOptions o;
  o.tol = c.tol;
  o.max_iter = c.max_iter;
  o.q_tol = c.q_tol;
  return o;
}

GroundStateResult alpha_one_state(const ExperimentConfig& c, const GridSpec& g, double p) {
  ModelParams m = c.params;
  m.p = p;
  m.alpha = 1;
  m.omega = 0;
  SolverOptions o = solver_of(c);
  o.tol = std::min(o.tol, 1e-8);
  return solve_fixed_alpha(m, g, o);
}

void run_ground_state(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto& f = c.file;
  const std::string target = f.get_string("ground-state", "target", "mass");
  const GridSpec base = grid_of(c);
  auto solve = [&]() -> GroundStateResult {
    if (target == "fixed-alpha") return solve_fixed_alpha(c.params, base, solver_of(c));
    if (target != "mass") throw ConfigError("field [ground-state] target must be 'mass' or 'fixed-alpha'");
    const Regime regime = classify_regime(c.params);
    if (regime == Regime::critical)
      throw DomainError("critical p has no normalized ground state; use target = fixed-alpha");
    GridSpec g = base;
    if (f.get_bool("ground-state", "scale_grid", true)) {
      // [grid] is the alpha = 1 box; stretch it to the predicted frequency.
      const auto ref = alpha_one_state(c, base, c.params.p);
      const double a = predicted_alpha(c.params.c, mass(ref.field), c.params.s, c.params.p);
      g = scaled_grid(base, a, c.params.s);
      ctx.rec.headline["predicted_alpha"] = a;
    }
    return regime == Regime::subcritical ? solve_subcritical(c.params.c, c.params, g, solver_of(c))
                                         : solve_supercritical(c.params.c, c.params, g, solver_of(c));
  };
  const GroundStateResult r = solve();
  const Components comp = components(r.field, c.params);
  write_field(ctx.path("ground_state.afield"), r.field);
  ctx.produced("ground_state.afield");
  CsvWriter w(ctx.path("ground_state.csv"),
              {"c", "alpha", "energy", "q_residual", "grad_residual", "mass", "hdot", "lp", "lx", "ly"});
  w.row({comp.mass, r.multiplier, r.energy, r.q_residual, r.grad_residual, comp.mass, comp.hdot(),
         std::pow(comp.lpp, 1 / c.params.p), r.field.grid().lx(), r.field.grid().ly()});
  w.close();
  ctx.produced("ground_state.csv");
  auto& h = ctx.rec.headline;
  h["c"] = comp.mass;
  h["alpha"] = r.multiplier;
  h["energy"] = r.energy;
  h["q_residual"] = r.q_residual;
  h["grad_residual"] = r.grad_residual;
  h["iterations"] = r.iterations;
  ctx.rec.labels["regime"] = regime_name(r.regime);
}

Field initial_field(Context& ctx, const GridSpec& g, std::optional<DichotomyReference>& ref) {
  const auto& c = ctx.cfg;
  const auto& f = c.file;
  const std::string kind = f.get_string("evolve", "initial", "gaussian");
  const double amp = f.get_double("evolve", "amplitude", 1.0);
  Field u(g);
  if (kind == "gaussian") {
    u = sample(g, [](double x, double y) { return cplx(std::exp(-x * x - y * y), 0); });
  } else if (kind == "random") {
    u = random_field(g, c.seed, 0);
  } else if (kind == "ground-state") {
    ModelParams m = c.params;
    m.omega = 0;
    const auto gs = solve_fixed_alpha(m, g, solver_of(c));
    u = gs.field;
    if (classify_regime(m) == Regime::supercritical) {
      const auto th = blowup_thresholds(gs.field, m);
      ref = DichotomyReference{gs.energy, hdot(gs.field, m.s), th.ratio_bound};
    }
    if (f.has("evolve", "lambda")) u = instability_data(u, f.get_double("evolve", "lambda"), m);
  } else if (kind.rfind("file:", 0) == 0) {
    u = read_field(kind.substr(5));
    if (!u.grid().same_as(g)) throw ConfigError("field [evolve] initial: file grid differs from [grid]");
  } else {
    throw ConfigError("field [evolve] initial must be gaussian, random, ground-state or file:PATH");
  }
  u *= amp;
  return u;
}

void write_diagnostics(Context& ctx, const std::vector<Diagnostics>& ds) {
  CsvWriter w(ctx.path("trajectory.csv"),
              {"t", "mass", "energy", "q", "momentum", "hdot", "lp", "virial"});
  for (const auto& d : ds)
    w.row({d.t, d.mass, d.energy, d.q, d.momentum, d.hdot, d.lp,
           d.virial.value_or(std::numeric_limits<double>::quiet_NaN())});
  w.close();
  ctx.produced("trajectory.csv");
  const auto& a = ds.front();
  const auto& b = ds.back();
  auto& h = ctx.rec.headline;
  h["mass_drift"] = std::abs(b.mass - a.mass) / a.mass;
  h["energy_drift"] = std::abs(b.energy - a.energy) / std::max(std::abs(a.energy), 1e-300);
  h["t_end"] = b.t;
}

void run_evolve(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto& f = c.file;
  const GridSpec g = grid_of(c);
  std::optional<DichotomyReference> ref;
  const Field u0 = initial_field(ctx, g, ref);
  const double T = f.get_double("evolve", "T"), dt = f.get_double("evolve", "dt");
  const std::string scheme = f.get_string("evolve", "scheme", "strang");
  if (scheme != "strang" && scheme != "lie") throw ConfigError("field [evolve] scheme must be strang or lie");

  if (f.get_bool("evolve", "classify", false)) {
    BlowupOptions o;
    o.dt = dt;
    o.phase_limit = f.get_double("evolve", "phase_limit", o.phase_limit);
    o.reference = ref;
    const auto v = classify_blowup(u0, c.params, f.get_double("evolve", "horizon", T), o);
    write_diagnostics(ctx, v.diagnostics);
    if (v.final_state) {
      write_field(ctx.path("final.afield"), *v.final_state);
      ctx.produced("final.afield");
    }
    ctx.rec.labels["verdict"] = verdict_name(v.classification);
    std::string crit;
    for (const auto& s : v.criteria_used) crit += (crit.empty() ? "" : "; ") + s;
    ctx.rec.labels["criteria"] = crit;
    ctx.rec.headline["q_max"] = v.q_max;
    ctx.rec.headline["hdot_growth"] = v.hdot_growth;
    if (v.abort_time) ctx.rec.headline["abort_time"] = *v.abort_time;
    return;
  }

  EvolveOptions o;
  o.scheme = scheme == "strang" ? Scheme::strang : Scheme::lie;
  o.phase_limit = f.get_double("evolve", "phase_limit", 0.0);
  if (f.has("evolve", "R")) o.cutoff = build_cutoff(f.get_double("evolve", "R"), g, c.params.s);
  const auto tr = evolve(u0, T, dt, c.params, o);
  write_diagnostics(ctx, tr.diagnostics);
  if (tr.final_state) {
    write_field(ctx.path("final.afield"), *tr.final_state);
    ctx.produced("final.afield");
  }
  if (tr.abort_time) ctx.rec.headline["abort_time"] = *tr.abort_time;
}

BoundId bound_of(const std::string& s) {
  if (s == "est-1") return BoundId::est1;
  if (s == "1.1-3") return BoundId::upper_1_1_3;
  if (s == "1.1-4") return BoundId::lower_1_1_4;
  throw ConfigError("field [kernel] bound must be est-1, 1.1-3 or 1.1-4");
}

void run_kernel(Context& ctx) {
  const auto& f = ctx.cfg.file;
  const double s = ctx.cfg.params.s;
  Region r;
  r.x_min = f.get_double("kernel", "x_min", 0.0);
  r.x_max = f.get_double("kernel", "x_max", 1.0);
  r.nx = static_cast<int>(f.get_int("kernel", "nx", 5));
  r.y_min = f.get_double("kernel", "y_min", 1.0);
  r.y_max = f.get_double("kernel", "y_max", 20.0);
  r.ny = static_cast<int>(f.get_int("kernel", "ny", 12));
  r.k = static_cast<int>(f.get_int("kernel", "k", 0));
  r.m = static_cast<int>(f.get_int("kernel", "m", 0));
  KernelQuadrature q;
  q.rel_tol = f.get_double("kernel", "rel_tol", q.rel_tol);
  if (!(q.rel_tol > 0)) throw ConfigError("field [kernel] rel_tol must be positive");

  std::vector<KernelSample> samples;
  for (int a = 0; a < r.nx; ++a) {
    const double x = r.nx == 1 ? r.x_min : r.x_min + (r.x_max - r.x_min) * a / (r.nx - 1);
    for (int b = 0; b < r.ny; ++b) {
      const double y = r.ny == 1 ? r.y_min
                                 : r.y_min * std::pow(r.y_max / r.y_min, static_cast<double>(b) / (r.ny - 1));
      samples.push_back(ks_kernel(x, y, s, q));
    }
  }
  write_kernel_csv(ctx.path("kernel.csv"), samples);
  ctx.produced("kernel.csv");
  const BoundId id = bound_of(f.get_string("kernel", "bound", "1.1-3"));
  const DecayReport rep = decay_report(s, id, r, q);
  ctx.rec.labels["bound"] = bound_name(id);
  ctx.rec.headline["ratio_min"] = rep.ratio_min;
  ctx.rec.headline["ratio_max"] = rep.ratio_max;
  if (f.has("kernel", "mass_box_x"))
    ctx.rec.headline["kernel_mass"] =
        ks_mass(s, f.get_double("kernel", "mass_box_x"), f.get_double("kernel", "mass_box_y"), q);
}

void run_boosted(Context& ctx) {
  const auto& c = ctx.cfg;
  const auto& f = c.file;
  const GridSpec g = grid_of(c);
  BoostedOptions o;
  o.tol = std::min(c.tol, 1e-9);
  o.max_iter = c.max_iter;
  const BoostedWave w = solve_boosted(c.params, g, o);
  write_field(ctx.path("boosted.afield"), w.field);
  ctx.produced("boosted.afield");
  auto& h = ctx.rec.headline;
  h["quotient"] = w.quotient;
  h["el_residual"] = w.el_residual;
  h["mass"] = mass(w.field);
  h["coercivity_min"] = check_coercivity(c.params, g).minimum;
  if (w.poho_ratio) h["poho_ratio"] = *w.poho_ratio;
  DecayWindow dw;
  dw.x_max = f.get_double("boosted", "decay_x_max", std::min(3.0, g.lx()));
  dw.y_min = f.get_double("boosted", "decay_y_min", std::min(3.0, g.ly() / 4));
  dw.y_max = f.get_double("boosted", "decay_y_max", 0.0);
  const DecayReport rep = boosted_decay_check(w, dw);
  h["decay_sup"] = rep.ratio_max;
}

void run_thresholds(Context& ctx) {
  const auto& c = ctx.cfg;
  const GridSpec g = grid_of(c);
  const auto phi = alpha_one_state(c, g, c.params.p);
  ModelParams m = c.params;
  ThresholdReport r = classify_regime(m) == Regime::supercritical ? blowup_thresholds(phi.field, m)
                                                                  : sharp_constants(phi.field, m);
  ModelParams mc = m;
  mc.p = critical_exponent(m.s);
  const auto crit = alpha_one_state(c, g, mc.p);
  r.c_star = critical_mass(crit.field, mc);
  CsvWriter w(ctx.path("thresholds.csv"),
              {"c_qs", "c_h", "c_star", "rho", "x0_sq", "g_x0", "ratio_bound", "omega0"});
  w.row({r.c_qs, r.c_h, r.c_star, r.rho, r.x0_sq, r.g_x0, r.ratio_bound, r.omega0});
  w.close();
  ctx.produced("thresholds.csv");
  auto& h = ctx.rec.headline;
  h["c_qs"] = r.c_qs;
  h["c_h"] = r.c_h;
  h["c_star"] = r.c_star;
  h["ratio_bound"] = r.ratio_bound;
  h["phi_mass"] = mass(phi.field);
}

void run_scaling(Context& ctx) {
  const auto& c = ctx.cfg;
  const GridSpec g = grid_of(c);
  BoostedOptions o;
  o.tol = std::min(c.tol, 1e-9);
  o.max_iter = c.max_iter;
  const auto st = mass_scaling_study(c.file.get_list("scaling-study", "omegas"), c.params, g, o);
  write_scaling_csv(ctx.path("scaling.csv"), st);
  ctx.produced("scaling.csv");
  ctx.rec.headline["slope"] = st.fitted_slope;
  ctx.rec.headline["hdot_slope"] = st.hdot_slope;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  out << text;
  out.close();
  if (!out) throw Error("failed writing " + path);
}

}  // namespace

RunRecord run(const ExperimentConfig& config) {
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec;
  rec.command = config.command;
  rec.version = artifact_version();
  rec.config = config.file.sections();
  rec.seed = config.seed;
  fs::create_directories(config.out_dir);
  Context ctx{config, rec, fs::path(config.out_dir)};

  if (config.command == "ground-state") run_ground_state(ctx);
  else if (config.command == "evolve") run_evolve(ctx);
  else if (config.command == "kernel") run_kernel(ctx);
  else if (config.command == "boosted") run_boosted(ctx);
  else if (config.command == "thresholds") run_thresholds(ctx);
  else if (config.command == "scaling-study") run_scaling(ctx);
  else throw ConfigError("unknown command '" + config.command + "'");

  for (const auto& name : rec.files) {
    const fs::path p = ctx.dir / name;
    if (!fs::exists(p) || fs::file_size(p) == 0) throw Error("produced file " + name + " is missing or empty");
  }
  rec.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  write_text(ctx.path("record.json"), record_to_json(rec));
  return rec;
}

void write_error_record(const std::string& out_dir, const std::string& command,
                        const std::string& type, const std::string& message) {
  json j;
  j["command"] = command;
  j["version"] = artifact_version();
  j["error"] = {{"type", type}, {"message", message}};
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) return;
  std::ofstream out(fs::path(out_dir) / "error.json", std::ios::binary);
  out << j.dump(2) << '\n';
}

std::string record_to_json(const RunRecord& r) {
  json j;
  j["command"] = r.command;
  j["version"] = r.version;
  j["config"] = r.config;
  j["seed"] = r.seed;
  j["wall_time_s"] = r.wall_time;
  j["files"] = r.files;
  json h = json::object();
  for (const auto& [k, v] : r.headline) h[k] = std::isfinite(v) ? json(v) : json(format_double(v));
  j["headline"] = h;
  j["labels"] = r.labels;
  return j.dump(2) + "\n";
}

RunRecord record_from_json(const std::string& text) {
  const json j = json::parse(text);
  RunRecord r;
  r.command = j.at("command").get<std::string>();
  r.version = j.value("version", "");
  if (j.contains("config")) r.config = j.at("config").get<decltype(r.config)>();
  r.seed = j.value("seed", std::uint64_t{0});
  r.wall_time = j.value("wall_time_s", 0.0);
  if (j.contains("files")) r.files = j.at("files").get<std::vector<std::string>>();
  if (j.contains("headline"))
    for (const auto& [k, v] : j.at("headline").items())
      r.headline[k] = v.is_number() ? v.get<double>() : std::stod(v.get<std::string>());
  if (j.contains("labels")) r.labels = j.at("labels").get<std::map<std::string, std::string>>();
  return r;
}

RunRecord load_record(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read record " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return record_from_json(ss.str());
  } catch (const json::exception& e) {
    throw Error(path + ": malformed record (" + e.what() + ")");
  }
}

std::vector<std::string> report(const std::vector<RunRecord>& records, const std::string& out_dir) {
  if (records.empty()) throw DomainError("report: no records given");
  fs::create_directories(out_dir);
  std::vector<std::string> written;
  std::ostringstream md;
  md << "# Run summary\n\n";

  std::map<std::string, std::vector<const RunRecord*>> by_cmd;
  for (const auto& r : records) by_cmd[r.command].push_back(&r);
  for (const auto& [cmd, rs] : by_cmd) {
    std::vector<std::string> keys;
    for (const auto* r : rs)
      for (const auto& [k, v] : r->headline)
        if (std::find(keys.begin(), keys.end(), k) == keys.end()) keys.push_back(k);
    std::vector<std::string> lkeys;
    for (const auto* r : rs)
      for (const auto& [k, v] : r->labels)
        if (std::find(lkeys.begin(), lkeys.end(), k) == lkeys.end()) lkeys.push_back(k);
    md << "## " << cmd << "\n\n|";
    for (const auto& k : keys) md << " " << k << " |";
    for (const auto& k : lkeys) md << " " << k << " |";
    md << "\n|";
    for (std::size_t k = 0; k < keys.size() + lkeys.size(); ++k) md << "---|";
    md << "\n";
    for (const auto* r : rs) {
      md << "|";
      for (const auto& k : keys) {
        auto it = r->headline.find(k);
        md << " " << (it == r->headline.end() ? "" : format_double(it->second)) << " |";
      }
      for (const auto& k : lkeys) {
        auto it = r->labels.find(k);
        md << " " << (it == r->labels.end() ? "" : it->second) << " |";
      }
      md << "\n";
    }
    md << "\n";
  }

  if (by_cmd.count("ground-state")) {
    std::vector<std::pair<double, double>> mc;
    for (const auto* r : by_cmd["ground-state"])
      if (r->headline.count("c") && r->headline.count("energy"))
        mc.emplace_back(r->headline.at("c"), r->headline.at("energy"));
    std::sort(mc.begin(), mc.end());
    CsvWriter w((fs::path(out_dir) / "m_of_c.csv").string(), {"c", "m"});
    for (const auto& [c, m] : mc) w.row({c, m});
    w.close();
    written.push_back("m_of_c.csv");
    md << "## m(c) subadditivity\n\n";
    for (const auto& [c, m] : mc)
      for (const auto& [c2, m2] : mc)
        if (std::abs(c2 - 2 * c) <= 1e-6 * c2)
          md << "- m(" << format_double(c2) << ") = " << format_double(m2) << " vs 2 m("
             << format_double(c) << ") = " << format_double(2 * m) << ": "
             << (m2 < 2 * m ? "strict" : "NOT strict") << "\n";
    md << "\n";
  }
  if (by_cmd.count("scaling-study")) {
    CsvWriter w((fs::path(out_dir) / "slopes.csv").string(), {"slope", "hdot_slope"});
    for (const auto* r : by_cmd["scaling-study"])
      w.row({r->headline.count("slope") ? r->headline.at("slope") : std::nan(""),
             r->headline.count("hdot_slope") ? r->headline.at("hdot_slope") : std::nan("")});
    w.close();
    written.push_back("slopes.csv");
  }
  write_text((fs::path(out_dir) / "summary.md").string(), md.str());
  written.push_back("summary.md");
  return written;
}

}  // namespace afnls
