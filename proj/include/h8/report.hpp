#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "h8/format.hpp"

namespace h8 {

inline constexpr std::string_view kSchemaVersion = "h8.1";

/// Rows of already formatted cells. Formatting happens once, so CSV, JSON
/// and the hash all see the same text.
struct RowTable {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

inline std::string cell(double v) { return format_real(v); }
inline std::string cell(std::uint64_t v) { return std::to_string(v); }
inline std::string cell(bool v) { return v ? "true" : "false"; }

/// Header plus rows, comma separated, LF terminated.
std::string to_csv(const RowTable& table);

std::uint64_t fnv1a64(std::string_view bytes);

/// 16 hex digits of FNV-1a over the canonical CSV of the rows.
std::string determinism_hash(const RowTable& table);

enum class Format { csv, json };

struct ReportDocument {
  std::string command;
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  RowTable rows;
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
  double wall_time_ms = 0.0;
};

nlohmann::ordered_json to_json(const ReportDocument& doc);

/// Writes CSV or JSON to `path`, or to `fallback` when path is empty.
/// IoError when the file cannot be written.
void emit(const ReportDocument& doc, Format format, const std::filesystem::path& path, std::ostream& fallback);

/// Writes text to a file (IoError on failure) or to `fallback` when path is empty.
void write_text(const std::string& text, const std::filesystem::path& path, std::ostream& fallback);

}  // namespace h8
