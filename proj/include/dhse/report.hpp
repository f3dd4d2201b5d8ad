#pragma once

#include <cmath>
#include <fstream>
#include <iomanip>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "dhse/error.hpp"

namespace dhse {

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

inline std::string format_double(double v, int precision = 4) {
  std::ostringstream ss;
  ss << std::fixed << std::setprecision(precision) << v;
  return ss.str();
}

// Aligned plain-text rendering with a rule under the header.
inline std::string render_table(const Table& table) {
  std::vector<std::size_t> widths(table.columns.size(), 0);
  for (std::size_t c = 0; c < table.columns.size(); ++c) widths[c] = table.columns[c].size();
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size() && c < widths.size(); ++c) {
      widths[c] = std::max(widths[c], row[c].size());
    }
  }
  std::ostringstream out;
  const auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t c = 0; c < widths.size(); ++c) {
      out << std::left << std::setw(static_cast<int>(widths[c])) << (c < row.size() ? row[c] : "");
      if (c + 1 < widths.size()) out << "  ";
    }
    out << '\n';
  };
  emit(table.columns);
  std::size_t total = 0;
  for (std::size_t c = 0; c < widths.size(); ++c) total += widths[c] + (c + 1 < widths.size() ? 2 : 0);
  out << std::string(total, '-') << '\n';
  for (const auto& row : table.rows) emit(row);
  return out.str();
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string escaped = "\"";
  for (char c : field) {
    if (c == '"') escaped += "\"\"";
    else escaped += c;
  }
  escaped += '"';
  return escaped;
}

inline void write_csv(const std::string& path, const Table& table) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open csv for writing: " + path);
  for (std::size_t c = 0; c < table.columns.size(); ++c) {
    out << csv_escape(table.columns[c]) << (c + 1 < table.columns.size() ? "," : "");
  }
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      out << csv_escape(row[c]) << (c + 1 < row.size() ? "," : "");
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing csv: " + path);
}

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
};

inline MeanStd mean_std(std::span<const double> values) {
  MeanStd ms;
  if (values.empty()) return ms;
  for (double v : values) ms.mean += v;
  ms.mean /= static_cast<double>(values.size());
  for (double v : values) ms.stddev += (v - ms.mean) * (v - ms.mean);
  ms.stddev = std::sqrt(ms.stddev / static_cast<double>(values.size()));
  return ms;
}

inline std::string format_mean_std(const MeanStd& ms, int precision = 4) {
  return format_double(ms.mean, precision) + " ± " + format_double(ms.stddev, precision);
}

}  // namespace dhse
