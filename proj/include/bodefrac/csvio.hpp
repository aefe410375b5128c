#pragma once

#include <string>
#include <vector>

namespace bodefrac {

// CSV with '.' decimal separator, '\n' line endings, mandatory header row.
// Rows accumulate in memory; commit writes a temp file and renames it into
// place so readers never see a partial file.
class CsvWriter {
 public:
  explicit CsvWriter(std::string header);

  void add_row(const std::vector<double>& values);
  void add_row_raw(std::string line);  // pre-formatted (mixed text columns)

  // Atomic write-temp-then-rename; returns the final path.
  const std::string& commit(const std::string& path);

  static std::string format(double v);

 private:
  std::string header_;
  std::vector<std::string> rows_;
  std::string final_path_;
};

}  // namespace bodefrac
