#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "afnls/error.hpp"
#include "afnls/functionals.hpp"

namespace afnls {

// Malformed or incomplete configuration; the message names the line or field.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// Flat "key = value" text in [sections]. '#' starts a comment.
class ConfigFile {
 public:
  static ConfigFile parse(const std::string& text, const std::string& origin = "config");
  static ConfigFile load(const std::string& path);

  bool has(const std::string& section, const std::string& key) const;
  std::string get_string(const std::string& section, const std::string& key,
                         std::optional<std::string> fallback = std::nullopt) const;
  double get_double(const std::string& section, const std::string& key,
                    std::optional<double> fallback = std::nullopt) const;
  long get_int(const std::string& section, const std::string& key,
               std::optional<long> fallback = std::nullopt) const;
  bool get_bool(const std::string& section, const std::string& key,
                std::optional<bool> fallback = std::nullopt) const;
  std::vector<double> get_list(const std::string& section, const std::string& key) const;

  const std::map<std::string, std::map<std::string, std::string>>& sections() const { return data_; }

 private:
  const std::string* find(const std::string& section, const std::string& key) const;
  std::map<std::string, std::map<std::string, std::string>> data_;
  std::map<std::string, int> lines_;  // "section.key" -> line number
  std::string origin_;
};

struct GridDesc {
  int nx = 0, ny = 0;
  double lx = 0, ly = 0;
};

struct ExperimentConfig {
  std::string command;
  ModelParams params;
  std::optional<GridDesc> grid;
  std::uint64_t seed = 0;
  std::string out_dir = "out";
  double tol = 1e-8;
  int max_iter = 50000;
  double q_tol = 1e-3;
  ConfigFile file;  // command sections are read from here by the runner
};

extern const std::vector<std::string> kCommands;

// Reads [run], [model], [grid] and [solver], then checks the command section.
ExperimentConfig make_config(const std::string& command, const ConfigFile& file);

}  // namespace afnls
