#include "afnls/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace afnls {

const std::vector<std::string> kCommands = {"ground-state", "evolve",     "kernel",       "boosted",
                                            "thresholds",   "scaling-study"};

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::optional<double> to_double(const std::string& s) {
  double v = 0;
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

// Keys accepted per section; anything else is reported as a typo.
const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> k = {
      {"run", {"seed", "out"}},
      {"model", {"s", "p", "alpha", "omega", "c"}},
      {"grid", {"nx", "ny", "lx", "ly"}},
      {"solver", {"tol", "max_iter", "q_tol"}},
      {"ground-state", {"target", "scale_grid"}},
      {"evolve",
       {"T", "dt", "scheme", "initial", "amplitude", "lambda", "snapshot_every", "R", "classify",
        "horizon", "phase_limit"}},
      {"kernel",
       {"bound", "x_min", "x_max", "nx", "y_min", "y_max", "ny", "k", "m", "rel_tol", "mass_box_x",
        "mass_box_y"}},
      {"boosted", {"decay_x_max", "decay_y_min", "decay_y_max"}},
      {"thresholds", {}},
      {"scaling-study", {"omegas"}},
  };
  return k;
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text, const std::string& origin) {
  ConfigFile f;
  f.origin_ = origin;
  std::istringstream in(text);
  std::string line, section;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(n) + ": ";
    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(where + "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (!known_keys().count(section)) throw ConfigError(where + "unknown section [" + section + "]");
      f.data_[section];
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError(where + "expected 'key = value'");
    if (section.empty()) throw ConfigError(where + "key outside any [section]");
    const std::string key = trim(line.substr(0, eq)), value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + "empty key");
    if (!known_keys().at(section).count(key))
      throw ConfigError(where + "unknown key '" + key + "' in [" + section + "]");
    if (f.data_[section].count(key))
      throw ConfigError(where + "duplicate key '" + key + "' in [" + section + "]");
    f.data_[section][key] = value;
    f.lines_[section + "." + key] = n;
  }
  return f;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str(), path);
}

const std::string* ConfigFile::find(const std::string& section, const std::string& key) const {
  auto s = data_.find(section);
  if (s == data_.end()) return nullptr;
  auto k = s->second.find(key);
  return k == s->second.end() ? nullptr : &k->second;
}

bool ConfigFile::has(const std::string& section, const std::string& key) const {
  return find(section, key) != nullptr;
}

std::string ConfigFile::get_string(const std::string& section, const std::string& key,
                                   std::optional<std::string> fallback) const {
  if (const auto* v = find(section, key)) return *v;
  if (fallback) return *fallback;
  throw ConfigError(origin_ + ": missing required field [" + section + "] " + key);
}

double ConfigFile::get_double(const std::string& section, const std::string& key,
                              std::optional<double> fallback) const {
  const auto* v = find(section, key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(origin_ + ": missing required field [" + section + "] " + key);
  }
  const auto d = to_double(*v);
  if (!d)
    throw ConfigError(origin_ + ":" + std::to_string(lines_.at(section + "." + key)) + ": field [" +
                      section + "] " + key + " is not a number: '" + *v + "'");
  return *d;
}

long ConfigFile::get_int(const std::string& section, const std::string& key,
                         std::optional<long> fallback) const {
  const double d = get_double(section, key, fallback ? std::optional<double>(*fallback) : std::nullopt);
  if (d != std::floor(d))
    throw ConfigError(origin_ + ": field [" + section + "] " + key + " must be an integer");
  return static_cast<long>(d);
}

bool ConfigFile::get_bool(const std::string& section, const std::string& key,
                          std::optional<bool> fallback) const {
  const auto* v = find(section, key);
  if (!v) {
    if (fallback) return *fallback;
    throw ConfigError(origin_ + ": missing required field [" + section + "] " + key);
  }
  if (*v == "true" || *v == "1" || *v == "yes") return true;
  if (*v == "false" || *v == "0" || *v == "no") return false;
  throw ConfigError(origin_ + ": field [" + section + "] " + key + " must be true or false");
}

std::vector<double> ConfigFile::get_list(const std::string& section, const std::string& key) const {
  const std::string s = get_string(section, key);
  std::vector<double> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto d = to_double(trim(item));
    if (!d)
      throw ConfigError(origin_ + ": field [" + section + "] " + key + " has a non-numeric entry '" +
                        trim(item) + "'");
    out.push_back(*d);
  }
  if (out.empty()) throw ConfigError(origin_ + ": field [" + section + "] " + key + " is empty");
  return out;
}

ExperimentConfig make_config(const std::string& command, const ConfigFile& file) {
  if (std::find(kCommands.begin(), kCommands.end(), command) == kCommands.end())
    throw ConfigError("unknown command '" + command + "'");
  ExperimentConfig c;
  c.command = command;
  c.file = file;
  c.seed = static_cast<std::uint64_t>(file.get_int("run", "seed", 0));
  c.out_dir = file.get_string("run", "out", "out");

  c.params.s = file.get_double("model", "s");
  if (command != "kernel") c.params.p = file.get_double("model", "p");
  c.params.alpha = file.get_double("model", "alpha", 1.0);
  c.params.omega = file.get_double("model", "omega", 0.0);
  c.params.c = file.get_double("model", "c", 1.0);

  if (command != "kernel") {
    GridDesc g;
    g.nx = static_cast<int>(file.get_int("grid", "nx"));
    g.ny = static_cast<int>(file.get_int("grid", "ny"));
    g.lx = file.get_double("grid", "lx");
    g.ly = file.get_double("grid", "ly");
    c.grid = g;
  }
  c.tol = file.get_double("solver", "tol", c.tol);
  c.max_iter = static_cast<int>(file.get_int("solver", "max_iter", c.max_iter));
  c.q_tol = file.get_double("solver", "q_tol", c.q_tol);
  if (!(c.tol > 0)) throw ConfigError("field [solver] tol must be positive");
  if (!(c.q_tol > 0)) throw ConfigError("field [solver] q_tol must be positive");
  if (c.max_iter <= 0) throw ConfigError("field [solver] max_iter must be positive");

  if (command == "evolve") {
    if (!(file.get_double("evolve", "T") > 0)) throw ConfigError("field [evolve] T must be positive");
    if (!(file.get_double("evolve", "dt") > 0)) throw ConfigError("field [evolve] dt must be positive");
  }
  if (command == "scaling-study") file.get_list("scaling-study", "omegas");
  return c;
}

}  // namespace afnls
