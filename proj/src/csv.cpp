#include "hmflab/csv.hpp"

#include <cstdio>
#include <sstream>

#include "hmflab/errors.hpp"

namespace hmf {

std::string format_real(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

void require_plain(const std::string& cell) {
  if (cell.find_first_of(",\n\r\"") != std::string::npos) {
    throw UsageError("csv: cell '" + cell + "' contains a separator");
  }
}

}  // namespace

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& metadata,
                     std::vector<std::string> columns)
    : path_(path), out_(path, std::ios::binary), width_(columns.size()) {
  if (!out_) throw UsageError("csv: cannot write '" + path + "'");
  for (const auto& m : metadata) out_ << "# " << m << '\n';
  for (std::size_t i = 0; i < columns.size(); ++i) {
    require_plain(columns[i]);
    out_ << (i ? "," : "") << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != width_) throw UsageError("csv: row width does not match header in " + path_);
  for (std::size_t i = 0; i < cells.size(); ++i) {
    require_plain(cells[i]);
    out_ << (i ? "," : "") << cells[i];
  }
  out_ << '\n';
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return i;
  }
  throw UsageError("csv: missing column '" + name + "'");
}

bool CsvTable::has_column(const std::string& name) const {
  for (const auto& c : columns) {
    if (c == name) return true;
  }
  return false;
}

std::string CsvTable::meta(const std::string& key) const {
  const std::string prefix = key + " = ";
  for (const auto& m : metadata) {
    if (m.rfind(prefix, 0) == 0) return m.substr(prefix.size());
  }
  return "";
}

CsvTable read_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("csv: cannot open '" + path + "'");
  CsvTable t;
  std::string line;
  bool header = false;
  auto cells_of = [](const std::string& l) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream ls(l);
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!l.empty() && l.back() == ',') cells.emplace_back();
    return cells;
  };
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      t.metadata.push_back(line.size() > 2 && line[1] == ' ' ? line.substr(2) : line.substr(1));
      continue;
    }
    if (!header) {
      t.columns = cells_of(line);
      header = true;
      continue;
    }
    auto cells = cells_of(line);
    if (cells.size() != t.columns.size()) throw UsageError("csv: ragged row in '" + path + "'");
    t.rows.push_back(std::move(cells));
  }
  if (!header) throw UsageError("csv: no header row in '" + path + "'");
  return t;
}

void write_dat(const std::string& path, const std::vector<std::string>& metadata,
               const std::vector<std::pair<std::string, std::vector<std::pair<double, double>>>>& blocks) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw UsageError("dat: cannot write '" + path + "'");
  for (const auto& m : metadata) out << "# " << m << '\n';
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    if (b) out << "\n\n";
    out << "# " << blocks[b].first << '\n';
    for (const auto& [x, y] : blocks[b].second) out << format_real(x) << ' ' << format_real(y) << '\n';
  }
}

}  // namespace hmf
