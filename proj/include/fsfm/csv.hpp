// Minimal CSV writing helpers for plot-ready outputs.
#pragma once

#include "fsfm/core.hpp"

#include <fstream>

namespace fsfm {

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns) : os_(path) {
    if (!os_) throw IoError("csv: cannot open '" + path + "' for writing");
    os_.precision(17);
    for (std::size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
    os_ << "\n";
  }

  void row(const std::vector<double>& values) {
    for (std::size_t i = 0; i < values.size(); ++i) os_ << (i ? "," : "") << values[i];
    os_ << "\n";
  }

 private:
  std::ofstream os_;
};

}  // namespace fsfm
