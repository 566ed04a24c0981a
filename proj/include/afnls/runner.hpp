#pragma once

#include <map>
#include <string>
#include <vector>

#include "afnls/config.hpp"

namespace afnls {

struct RunRecord {
  std::string command;
  std::string version;
  std::map<std::string, std::map<std::string, std::string>> config;
  std::uint64_t seed = 0;
  double wall_time = 0;  // seconds; only in the record, never in CSV outputs
  std::vector<std::string> files;
  std::map<std::string, double> headline;
  std::map<std::string, std::string> labels;  // verdicts and other strings
};

const char* artifact_version();

// Executes the command, writes its CSV and field files plus record.json into
// config.out_dir, and returns the record.
RunRecord run(const ExperimentConfig& config);

// Writes error.json for a failed run.
void write_error_record(const std::string& out_dir, const std::string& command,
                        const std::string& type, const std::string& message);

std::string record_to_json(const RunRecord& r);
RunRecord record_from_json(const std::string& text);
RunRecord load_record(const std::string& path);

// Aggregates records into summary.md plus m_of_c.csv and slopes.csv when the
// relevant commands are present. Returns the files written.
std::vector<std::string> report(const std::vector<RunRecord>& records, const std::string& out_dir);

}  // namespace afnls
