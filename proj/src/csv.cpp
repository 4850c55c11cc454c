#include "polyheat/csv.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

#include "polyheat/errors.hpp"

namespace polyheat {

std::string format_number(Real v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::span<const std::string> header)
    : out_(path, std::ios::binary), columns_(header.size()) {
  if (!out_) throw validation_error("CsvWriter: cannot open " + path.string());
  if (header.empty()) throw validation_error("CsvWriter: header is mandatory");
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i) out_ << ',';
    out_ << header[i];
  }
  out_ << '\n';
}

void CsvWriter::write_row(std::span<const Real> values) {
  if (values.size() != columns_) throw validation_error("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out_ << ',';
    out_ << format_number(values[i]);
  }
  out_ << '\n';
}

void CsvWriter::write_row(std::span<const std::string> cells) {
  if (cells.size() != columns_) throw validation_error("CsvWriter: column count mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw validation_error("read_csv: cannot open " + path.string());
  CsvTable table;
  std::string line;
  if (!std::getline(in, line)) throw validation_error("read_csv: missing header in " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  {
    std::istringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) table.header.push_back(cell);
  }
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string cell;
    std::vector<Real> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw validation_error("read_csv: non-numeric cell '" + cell + "' in " + path.string());
      }
    }
    if (row.size() != table.header.size()) {
      throw validation_error("read_csv: ragged row in " + path.string());
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace polyheat
