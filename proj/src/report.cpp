#include "decoy/report.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace decoy {

std::string format_real(double v) {
  char buffer[64];
  std::snprintf(buffer, sizeof buffer, "%.6g", v);
  return buffer;
}

double round_to_report_precision(double v) {
  return std::strtod(format_real(v).c_str(), nullptr);
}

namespace {

std::string cell_to_csv(const ReportCell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return std::to_string(*i);
  if (const auto* u = std::get_if<std::uint64_t>(&cell)) return std::to_string(*u);
  if (const auto* d = std::get_if<double>(&cell)) return format_real(*d);
  return std::get<std::string>(cell);
}

nlohmann::json cell_to_json(const ReportCell& cell) {
  if (const auto* i = std::get_if<std::int64_t>(&cell)) return *i;
  if (const auto* u = std::get_if<std::uint64_t>(&cell)) return *u;
  if (const auto* d = std::get_if<double>(&cell)) return round_to_report_precision(*d);
  return std::get<std::string>(cell);
}

}  // namespace

std::string render_csv(const ReportTable& table, const std::string& config_text) {
  std::ostringstream out;
  out << "# decoy-bench " << table.command << "\n";
  out << "# config-begin\n";
  std::istringstream config(config_text);
  std::string line;
  while (std::getline(config, line)) out << "# " << line << "\n";
  out << "# config-end\n";

  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    if (c) out << ",";
    out << table.columns[c];
  }
  out << "\n";
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ",";
      out << cell_to_csv(row[c]);
    }
    out << "\n";
  }
  return out.str();
}

std::string render_json(const ReportTable& table, const std::string& config_text) {
  nlohmann::json doc;
  doc["command"] = table.command;
  doc["config"] = config_text;
  doc["columns"] = table.columns;
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& row : table.rows) {
    nlohmann::json obj;
    for (std::size_t c = 0; c < row.size(); ++c) {
      obj[table.columns[c]] = cell_to_json(row[c]);
    }
    rows.push_back(std::move(obj));
  }
  doc["rows"] = std::move(rows);
  return doc.dump(2) + "\n";
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error(path + ": cannot open for writing");
    out << content;
    out.flush();
    if (!out) {
      out.close();
      std::filesystem::remove(tmp);
      throw std::runtime_error(path + ": write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp);
    throw std::runtime_error(path + ": rename failed: " + ec.message());
  }
}

std::string sibling_path(const std::string& out_path, const std::string& extension) {
  std::filesystem::path p(out_path);
  p.replace_extension(extension);
  return p.string();
}

}  // namespace decoy
