#include "h8/report.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>

#include "h8/error.hpp"

namespace h8 {

void RowTable::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw DomainError("row width does not match header");
  rows.push_back(std::move(row));
}

std::string to_csv(const RowTable& table) {
  std::string out;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += cells[i];
    }
    out += '\n';
  };
  line(table.columns);
  for (const auto& r : table.rows) line(r);
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

std::string determinism_hash(const RowTable& table) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(to_csv(table))));
  return buf;
}

namespace {

nlohmann::ordered_json cell_json(const std::string& s) {
  if (s == "true") return true;
  if (s == "false") return false;
  if (s.empty() || s == "nan" || s == "inf" || s == "-inf") return s;
  std::int64_t i = 0;
  auto [pi, ei] = std::from_chars(s.data(), s.data() + s.size(), i);
  if (ei == std::errc{} && pi == s.data() + s.size()) return i;
  double d = 0;
  auto [pd, ed] = std::from_chars(s.data(), s.data() + s.size(), d);
  if (ed == std::errc{} && pd == s.data() + s.size()) return d;
  return s;
}

}  // namespace

nlohmann::ordered_json to_json(const ReportDocument& doc) {
  nlohmann::ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["command"] = doc.command;
  j["config"] = doc.config;
  j["columns"] = doc.rows.columns;
  auto rows = nlohmann::ordered_json::array();
  for (const auto& r : doc.rows.rows) {
    nlohmann::ordered_json o = nlohmann::ordered_json::object();
    for (std::size_t i = 0; i < r.size(); ++i) o[doc.rows.columns[i]] = cell_json(r[i]);
    rows.push_back(std::move(o));
  }
  j["rows"] = std::move(rows);
  j["summary"] = doc.summary;
  j["wall_time_ms"] = doc.wall_time_ms;
  j["determinism_hash"] = determinism_hash(doc.rows);
  return j;
}

void write_text(const std::string& text, const std::filesystem::path& path, std::ostream& fallback) {
  if (path.empty()) {
    fallback << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << text;
  if (!f) throw IoError("write failed for " + path.string());
}

void emit(const ReportDocument& doc, Format format, const std::filesystem::path& path, std::ostream& fallback) {
  if (format == Format::csv)
    write_text(to_csv(doc.rows), path, fallback);
  else
    write_text(to_json(doc).dump(2) + "\n", path, fallback);
}

}  // namespace h8
