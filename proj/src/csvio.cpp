#include "bodefrac/csvio.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <utility>

namespace bodefrac {

CsvWriter::CsvWriter(std::string header) : header_(std::move(header)) {}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void CsvWriter::add_row(const std::vector<double>& values) {
  std::string line;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) line += ',';
    line += format(values[i]);
  }
  rows_.push_back(std::move(line));
}

void CsvWriter::add_row_raw(std::string line) { rows_.push_back(std::move(line)); }

const std::string& CsvWriter::commit(const std::string& path) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("CsvWriter: cannot open " + tmp);
    out << header_ << '\n';
    for (const std::string& r : rows_) out << r << '\n';
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("CsvWriter: cannot rename " + tmp + " to " + path);
  final_path_ = path;
  return final_path_;
}

}  // namespace bodefrac
