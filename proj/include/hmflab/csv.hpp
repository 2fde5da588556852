#pragma once

// CSV artifacts: '#' metadata lines, one header row, comma-separated body.
// Numbers are printed with %.17g so bodies are byte-stable across runs.

#include <fstream>
#include <map>
#include <string>
#include <vector>

namespace hmf {

std::string format_real(double v);

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& metadata, std::vector<std::string> columns);
  void row(const std::vector<std::string>& cells);
  [[nodiscard]] const std::string& path() const { return path_; }

 private:
  std::string path_;
  std::ofstream out_;
  std::size_t width_;
};

struct CsvTable {
  std::vector<std::string> metadata;  // comment lines without the leading "# "
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  [[nodiscard]] std::size_t column(const std::string& name) const;
  [[nodiscard]] bool has_column(const std::string& name) const;
  /// Value of "key = value" in the metadata, or "" if absent.
  [[nodiscard]] std::string meta(const std::string& key) const;
};

CsvTable read_csv(const std::string& path);

/// gnuplot data: blocks separated by two blank lines, one "# label" per block.
void write_dat(const std::string& path, const std::vector<std::string>& metadata,
               const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& blocks);

}  // namespace hmf
