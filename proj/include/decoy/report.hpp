#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace decoy {

/// A report cell: counts stay integers, everything else is a real rendered
/// with 6 significant digits. The JSON mirror carries the same rounded
/// values, so the two files never disagree.
using ReportCell = std::variant<std::int64_t, std::uint64_t, double, std::string>;

struct ReportTable {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<ReportCell>> rows;
};

/// 6-significant-digit rendering: '.' decimal point, no separators.
std::string format_real(double v);

/// The double that format_real's text parses back to; used to keep CSV and
/// JSON numerically identical.
double round_to_report_precision(double v);

/// CSV text: resolved-config comment block, header row, data rows, LF line
/// endings throughout.
std::string render_csv(const ReportTable& table, const std::string& config_text);

/// JSON mirror of the same table (and the same resolved config).
std::string render_json(const ReportTable& table, const std::string& config_text);

/// Writes through a temporary file and renames into place; a failed write
/// never leaves a partial file at the target path.
void write_file_atomic(const std::string& path, const std::string& content);

/// out_path with its extension replaced (coverage.csv -> coverage.json).
std::string sibling_path(const std::string& out_path, const std::string& extension);

}  // namespace decoy
