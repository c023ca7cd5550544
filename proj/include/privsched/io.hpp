#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

// CSV and manifest plumbing. Numeric cells are always %.9g so equal configs
// give byte-identical files; the FNV-1a content hash recorded in manifests
// pins each output.

namespace privsched {

std::string format_g9(double x);
std::string csv_join(const std::vector<std::string>& cells);

class CsvWriter {
 public:
  // Opens path, truncating, and writes the header row.
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);  // count must match header
  void numeric_row(const std::vector<double>& values);
  void close();

  const std::string& path() const { return path_; }
  std::uint64_t data_rows() const { return rows_; }

 private:
  std::string path_;
  std::size_t columns_;
  std::uint64_t rows_ = 0;
  std::ofstream out_;
};

// FNV-1a 64-bit hash of a file's bytes, as 16 hex digits.
std::string content_hash(const std::string& path);

}  // namespace privsched
