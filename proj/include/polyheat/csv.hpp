#pragma once

#include <filesystem>
#include <fstream>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "polyheat/types.hpp"

namespace polyheat {

/// Formats a double with 17 significant digits, '.' decimal point, no locale.
std::string format_number(Real v);

/// CSV writer with a mandatory header, '\n' line endings and the fixed
/// number format above, so identical data produces identical bytes.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, std::span<const std::string> header);

  void write_row(std::span<const Real> values);
  void write_row(std::span<const std::string> cells);

 private:
  std::ofstream out_;
  std::size_t columns_;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<Real>> rows;

  int column(const std::string& name) const;  // -1 if absent
};

/// Reads a numeric CSV with a header line. Blank lines are skipped.
CsvTable read_csv(const std::filesystem::path& path);

}  // namespace polyheat
