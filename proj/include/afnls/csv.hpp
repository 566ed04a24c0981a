#pragma once

#include <charconv>
#include <fstream>
#include <initializer_list>
#include <string>
#include <vector>

#include "afnls/error.hpp"

namespace afnls {

// Shortest round-trip decimal form; independent of the C locale.
inline std::string format_double(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::initializer_list<std::string> header)
      : out_(path, std::ios::binary), path_(path) {
    if (!out_) throw Error("cannot open " + path + " for writing");
    bool first = true;
    for (const auto& h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }

  void row(const std::vector<double>& values) {
    for (std::size_t k = 0; k < values.size(); ++k)
      out_ << (k ? "," : "") << format_double(values[k]);
    out_ << '\n';
  }

  void close() {
    out_.close();
    if (!out_) throw Error("failed writing " + path_);
  }

 private:
  std::ofstream out_;
  std::string path_;
};

}  // namespace afnls
