#include <omp.h>

#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "afnls/config.hpp"
#include "afnls/runner.hpp"

namespace {

enum Exit { ok = 0, failure = 1, usage = 2, config = 3, domain = 4, convergence = 5, numeric = 6 };

struct ErrorKind {
  const char* type;
  int code;
};

ErrorKind classify(const std::exception& e) {
  if (dynamic_cast<const afnls::ConfigError*>(&e)) return {"ConfigError", config};
  if (dynamic_cast<const afnls::DomainError*>(&e)) return {"DomainError", domain};
  if (dynamic_cast<const afnls::ConvergenceError*>(&e)) return {"ConvergenceError", convergence};
  if (dynamic_cast<const afnls::ResolutionError*>(&e)) return {"ResolutionError", domain};
  if (dynamic_cast<const afnls::NonFiniteError*>(&e)) return {"NonFiniteError", numeric};
  return {"Error", failure};
}

void set_threads(int flag) {
  int n = flag;
  if (n <= 0) {
    if (const char* env = std::getenv("AFNLS_THREADS")) n = std::atoi(env);
  }
  if (n > 0) omp_set_num_threads(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Anisotropic fractional NLS experiments"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  long long seed = -1;
  int threads = 0;
  std::vector<CLI::App*> commands;
  for (const auto& name : afnls::kCommands) {
    auto* sub = app.add_subcommand(name, "run the " + name + " experiment");
    sub->add_option("--config", config_path, "config file")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", out_dir, "output directory (overrides [run] out)");
    sub->add_option("--seed", seed, "seed (overrides [run] seed)")->check(CLI::NonNegativeNumber);
    sub->add_option("--threads", threads, "OpenMP threads (default: AFNLS_THREADS)");
    commands.push_back(sub);
  }
  std::vector<std::string> records;
  std::string report_out = "report";
  auto* rep = app.add_subcommand("report", "aggregate record.json files");
  rep->add_option("records", records, "record.json paths")->required();
  rep->add_option("--out", report_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? ok : usage;
  }

  if (rep->parsed()) {
    try {
      std::vector<afnls::RunRecord> rs;
      for (const auto& p : records) rs.push_back(afnls::load_record(p));
      for (const auto& f : afnls::report(rs, report_out)) std::cout << report_out << "/" << f << "\n";
      return ok;
    } catch (const std::exception& e) {
      const auto k = classify(e);
      afnls::write_error_record(report_out, "report", k.type, e.what());
      std::cerr << "report: " << k.type << ": " << e.what() << "\n";
      return k.code;
    }
  }

  std::string command;
  for (auto* sub : commands)
    if (sub->parsed()) command = sub->get_name();
  set_threads(threads);

  std::string target = out_dir.empty() ? "out" : out_dir;
  try {
    const auto file = afnls::ConfigFile::load(config_path);
    if (out_dir.empty()) target = file.get_string("run", "out", "out");
    auto cfg = afnls::make_config(command, file);
    if (!out_dir.empty()) cfg.out_dir = out_dir;
    if (seed >= 0) cfg.seed = static_cast<std::uint64_t>(seed);
    target = cfg.out_dir;
    const auto rec = afnls::run(cfg);
    for (const auto& f : rec.files) std::cout << cfg.out_dir << "/" << f << "\n";
    for (const auto& [k, v] : rec.labels) std::cout << k << ": " << v << "\n";
    return ok;
  } catch (const std::exception& e) {
    const auto k = classify(e);
    afnls::write_error_record(target, command, k.type, e.what());
    std::cerr << command << ": " << k.type << ": " << e.what() << "\n";
    return k.code;
  }
}
